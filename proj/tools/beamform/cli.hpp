// SPDX-License-Identifier: Apache-2.0

#ifndef BEAMFORM_CLI_HPP
#define BEAMFORM_CLI_HPP

#include <iosfwd>

namespace beamform {

// Exit codes: 0 success, 1 runtime or configuration error, 2 usage error.
int cli_main(int argc, const char* const* argv);
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace beamform

#endif  // BEAMFORM_CLI_HPP

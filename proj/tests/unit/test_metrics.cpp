// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "ccmavf/array_model.hpp"
#include "ccmavf/baselines.hpp"
#include "ccmavf/errors.hpp"
#include "ccmavf/metrics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccmavf;

TEST_CASE("white-noise array gain") {
  const ArrayGeometry g{40, 0.5};
  const SourceSet src{{90.0}, {1.0}};
  const CVector w = steering_vector(g, 90.0).entries() / 40.0;
  CHECK(output_sinr(w, src, g, 1.0) == doctest::Approx(10.0 * std::log10(40.0)).epsilon(1e-12));
  CHECK(output_sinr(w, src, g, 1.0) == doctest::Approx(16.0206).epsilon(1e-5));
}

TEST_CASE("MVDR attains the optimal SINR and bounds every filter") {
  const ArrayGeometry g{12, 0.5};
  const SourceSet src{{90.0, 40.0, 65.0, 130.0}, {1.0, 2.0, 0.5, 1.0}};
  const auto a0 = steering_vector(g, 90.0);
  const CMatrix rin = interference_plus_noise_covariance(g, src, 1.0);
  const double best = optimal_sinr(src, g, 1.0);
  const double direct = to_db(oracle::naive_inner(a0.entries(), rin.inverse() * a0.entries()).real());
  CHECK(best == doctest::Approx(direct).epsilon(1e-12));
  CHECK(output_sinr(mvdr_oracle(rin, a0), src, g, 1.0) == doctest::Approx(best).epsilon(1e-12));

  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    CHECK(output_sinr(oracle::random_cvector(12, rng), src, g, 1.0) <= best + 1e-9);
  }
}

TEST_CASE("SINR ignores complex scaling of the weights") {
  const ArrayGeometry g{6, 0.5};
  const SourceSet src{{90.0, 30.0, 120.0}, {1.0, 1.0, 1.0}};
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const CVector w = oracle::random_cvector(6, rng);
    const Complex c(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
    CHECK(output_sinr(c * w, src, g, 1.0) == doctest::Approx(output_sinr(w, src, g, 1.0)).epsilon(1e-10));
  }
}

TEST_CASE("clairvoyant SINR matches a Monte Carlo estimate") {
  const ArrayGeometry g{6, 0.5};
  const SourceSet src{{90.0, 35.0, 140.0}, {1.0, 1.0, 1.0}};
  std::mt19937_64 wrng(3);
  const CVector w = oracle::random_cvector(6, wrng);
  const CVector a0 = steering_vector(g, 90.0).entries();
  const CMatrix am = steering_matrix(g, src);
  Rng rng(4);
  double signal = 0.0, disturbance = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const auto snap = generate_snapshot(am, src, 1.0, rng);
    const CVector s = snap.true_symbols(0) * a0;
    signal += std::norm(oracle::naive_inner(w, s));
    disturbance += std::norm(oracle::naive_inner(w, snap.received - s));
  }
  const double mc = to_db(signal / disturbance);
  CHECK(std::abs(mc - output_sinr(w, src, g, 1.0)) < 0.05);
}

TEST_CASE("SINR errors and degenerate cases") {
  const ArrayGeometry g{4, 0.5};
  const SourceSet src{{90.0}, {1.0}};
  CHECK_THROWS_AS(output_sinr(CVector::Zero(4), src, g, 1.0), DomainError);
  CHECK_THROWS_AS(output_sinr(CVector::Ones(5), src, g, 1.0), DimensionError);
  CHECK(std::isinf(output_sinr(CVector::Ones(4), src, g, 0.0)));
}

TEST_CASE("beampattern") {
  const ArrayGeometry g{10, 0.5};
  const auto a0 = steering_vector(g, 72.0);

  SUBCASE("constraint direction is 0 dB") {
    const std::vector<double> grid{72.0};
    CHECK(std::abs(beampattern(a0.entries() / 10.0, g, grid)[0]) < 1e-12);
    std::mt19937_64 rng(5);
    const CVector w = project_onto_constraint(oracle::random_cvector(10, rng), a0);
    CHECK(std::abs(beampattern(w, g, grid)[0]) < 1e-9);
  }
  SUBCASE("uniform weights follow the Dirichlet kernel") {
    const CVector w = CVector::Constant(10, Complex(0.1, 0.0));
    std::vector<double> grid;
    for (double t = 1.0; t < 180.0; t += 1.7) grid.push_back(t);
    const auto pattern = beampattern(w, g, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double psi = 2.0 * oracle::kPi * 0.5 * std::cos(grid[i] * oracle::kPi / 180.0);
      const double mag = std::abs(std::sin(10.0 * psi / 2.0)) / (10.0 * std::abs(std::sin(psi / 2.0)));
      CHECK(pattern[i] == doctest::Approx(20.0 * std::log10(mag)).epsilon(1e-9));
    }
  }
  SUBCASE("MVDR nulls the interferer") {
    const SourceSet src{{72.0, 120.0}, {1.0, 1.0}};
    const CVector w = mvdr_oracle(interference_plus_noise_covariance(g, src, 1e-8), a0);
    const std::vector<double> grid{120.0};
    CHECK(beampattern(w, g, grid)[0] < -40.0);
  }
}

TEST_CASE("trial aggregation") {
  SUBCASE("identical trials") {
    const std::vector<std::vector<double>> t(5, std::vector<double>{2.0, 4.0, 8.0});
    const auto out = aggregate_trials(t, "x");
    CHECK(out.trials == 5);
    CHECK(out.label == "x");
    for (std::size_t i = 0; i < 3; ++i) CHECK(out.per_snapshot_db[i] == doctest::Approx(to_db(t[0][i])));
  }
  SUBCASE("linear-domain mean") {
    const std::vector<std::vector<double>> t{{1.0}, {3.0}};
    CHECK(aggregate_trials(t).per_snapshot_db[0] == doctest::Approx(3.0103).epsilon(1e-5));
  }
  SUBCASE("errors") {
    const std::vector<std::vector<double>> empty;
    CHECK_THROWS_AS(aggregate_trials(empty), DomainError);
    const std::vector<std::vector<double>> ragged{{1.0, 2.0}, {1.0}};
    CHECK_THROWS_AS(aggregate_trials(ragged), DimensionError);
  }
}

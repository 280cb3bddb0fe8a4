// SPDX-License-Identifier: Apache-2.0

#include <utility>
#include <vector>

#include "ccmavf/errors.hpp"
#include "ccmavf/stats_estimators.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccmavf;

namespace {

double rel_err(const CMatrix& a, const CMatrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

void check_matches(const MomentEstimates& est, const oracle::Moments& ref, double tol) {
  CHECK(rel_err(est.r_tilde, ref.r) <= tol);
  CHECK(rel_err(est.p_tilde, ref.p) <= tol);
  CHECK(rel_err(est.p_tilde_y, ref.py) <= tol);
}

}  // namespace

TEST_CASE("empty estimator is all zeros") {
  const MomentEstimates est(5);
  CHECK(est.count == 0);
  CHECK(est.r_tilde.norm() == 0.0);
  CHECK(est.p_tilde.norm() == 0.0);
  CHECK(est.p_tilde_y.norm() == 0.0);
}

TEST_CASE("single snapshot with unit output leaves p_tilde_y at zero") {
  MomentEstimates est(4);
  HistoryBuffer hist;
  CVector e1 = CVector::Zero(4);
  e1(0) = 1.0;
  accumulate(est, hist, e1, e1);
  CHECK(est.count == 1);
  CHECK(hist.size() == 1);
  CHECK((est.r_tilde - e1 * e1.adjoint()).norm() == 0.0);
  CHECK((est.p_tilde - e1).norm() == 0.0);
  CHECK(est.p_tilde_y.norm() == 0.0);
}

TEST_CASE("averaging identical snapshots is idempotent") {
  std::mt19937_64 rng(4);
  const CVector x = oracle::random_cvector(6, rng);
  const CVector w = oracle::random_cvector(6, rng);
  MomentEstimates one(6), two(6);
  HistoryBuffer h1, h2;
  accumulate(one, h1, x, w);
  accumulate(two, h2, x, w);
  accumulate(two, h2, x, w);
  CHECK(rel_err(two.r_tilde, one.r_tilde) < 1e-15);
  CHECK(rel_err(two.p_tilde, one.p_tilde) < 1e-15);
  CHECK(rel_err(two.p_tilde_y, one.p_tilde_y) < 1e-15);
}

TEST_CASE("streaming estimates match batch recomputation") {
  std::mt19937_64 rng(8);
  const CVector w = oracle::random_cvector(6, rng, 0.3);
  MomentEstimates est(6);
  HistoryBuffer hist;
  std::vector<std::pair<CVector, CVector>> terms;
  for (int i = 0; i < 5; ++i) {
    const CVector x = oracle::random_cvector(6, rng);
    accumulate(est, hist, x, w);
    terms.emplace_back(x, w);
  }
  check_matches(est, oracle::batch_moments(terms), 1e-12);
}

TEST_CASE("r_tilde stays Hermitian positive semidefinite") {
  std::mt19937_64 rng(12);
  MomentEstimates est(7);
  HistoryBuffer hist;
  for (int i = 0; i < 60; ++i) {
    const CVector x = oracle::random_cvector(7, rng);
    const CVector w = oracle::random_cvector(7, rng, 0.5);
    accumulate(est, hist, x, w);
    if (i % 3 == 0) refresh_current_term(est, hist, oracle::random_cvector(7, rng, 0.5));
    CHECK((est.r_tilde - est.r_tilde.adjoint()).norm() <= 1e-10 * est.r_tilde.norm());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(est.r_tilde);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * eig.eigenvalues().maxCoeff());
  }
}

TEST_CASE("refresh with the accumulate weights is a no-op") {
  std::mt19937_64 rng(21);
  MomentEstimates est(5);
  HistoryBuffer hist;
  CVector w;
  for (int i = 0; i < 4; ++i) {
    w = oracle::random_cvector(5, rng);
    accumulate(est, hist, oracle::random_cvector(5, rng), w);
  }
  const MomentEstimates before = est;
  refresh_current_term(est, hist, w);
  CHECK((est.r_tilde - before.r_tilde).norm() <= 1e-14 * std::max(1.0, before.r_tilde.norm()));
  CHECK((est.p_tilde - before.p_tilde).norm() <= 1e-14 * std::max(1.0, before.p_tilde.norm()));
  CHECK((est.p_tilde_y - before.p_tilde_y).norm() <=
        1e-14 * std::max(1.0, before.p_tilde_y.norm()));
}

TEST_CASE("refresh of a single-term estimator equals accumulating with the new weights") {
  std::mt19937_64 rng(31);
  const CVector x = oracle::random_cvector(6, rng);
  const CVector w_old = oracle::random_cvector(6, rng);
  const CVector w_new = oracle::random_cvector(6, rng);
  MomentEstimates refreshed(6), direct(6);
  HistoryBuffer h1, h2;
  accumulate(refreshed, h1, x, w_old);
  refresh_current_term(refreshed, h1, w_new);
  accumulate(direct, h2, x, w_new);
  CHECK(rel_err(refreshed.r_tilde, direct.r_tilde) < 1e-12);
  CHECK(rel_err(refreshed.p_tilde, direct.p_tilde) < 1e-12);
  CHECK(rel_err(refreshed.p_tilde_y, direct.p_tilde_y) < 1e-12);
  CHECK(h1.back().weights == w_new);
}

TEST_CASE("refresh only replaces the newest term") {
  std::mt19937_64 rng(41);
  MomentEstimates est(6);
  HistoryBuffer hist;
  std::vector<std::pair<CVector, CVector>> terms;
  for (int i = 0; i < 3; ++i) {
    const CVector x = oracle::random_cvector(6, rng);
    const CVector w = oracle::random_cvector(6, rng);
    accumulate(est, hist, x, w);
    terms.emplace_back(x, w);
  }
  const CVector wk = oracle::random_cvector(6, rng);
  refresh_current_term(est, hist, wk);
  terms.back().second = wk;
  check_matches(est, oracle::batch_moments(terms), 1e-12);

  SUBCASE("and is idempotent for a fixed w_k") {
    const MomentEstimates once = est;
    refresh_current_term(est, hist, wk);
    CHECK(rel_err(est.r_tilde, once.r_tilde) < 1e-14);
    CHECK(rel_err(est.p_tilde_y, once.p_tilde_y) < 1e-14);
  }
}

TEST_CASE("constant-modulus data at the matched weight gives p_tilde_y = 0") {
  // Noiseless single source with w = a / m: y = s, |y| = 1, y~ = 1.
  const int m = 8;
  CVector a(m);
  for (int j = 0; j < m; ++j) a(j) = std::polar(1.0, -oracle::kPi * 0.3 * j);
  const CVector w = a / static_cast<double>(m);
  MomentEstimates est(m);
  HistoryBuffer hist;
  std::mt19937_64 rng(2);
  for (int i = 0; i < 30; ++i) {
    const double s = (rng() & 1) ? 1.0 : -1.0;
    accumulate(est, hist, s * a, w);
  }
  CHECK(est.p_tilde_y.norm() < 1e-13);
}

TEST_CASE("estimator error paths") {
  MomentEstimates est(3);
  HistoryBuffer hist;
  CHECK_THROWS_AS(refresh_current_term(est, hist, CVector::Ones(3)), DomainError);
  CHECK_THROWS_AS(accumulate(est, hist, CVector::Ones(3), CVector::Zero(3)), DomainError);
  CHECK_THROWS_AS(accumulate(est, hist, CVector::Ones(4), CVector::Ones(4)), DimensionError);
  accumulate(est, hist, CVector::Ones(3), CVector::Ones(3));
  CHECK_THROWS_AS(refresh_current_term(est, hist, CVector::Zero(3)), DomainError);
}

TEST_CASE("history length tracks the count") {
  MomentEstimates est(2);
  HistoryBuffer hist;
  for (int i = 0; i < 7; ++i) accumulate(est, hist, CVector::Ones(2), CVector::Ones(2));
  CHECK(hist.size() == est.count);
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "pensemble/errors.hpp"
#include "pensemble/oracle.hpp"
#include "pensemble/randmat.hpp"
#include "support/stats.hpp"

using namespace pens;
namespace ts = pens::testsupport;

TEST_SUITE_BEGIN("randmat");

TEST_CASE("haar_unitary dim=1 is a pure phase") {
  RngStream rng(1, 0);
  const auto u = haar_unitary(1, rng);
  CHECK(std::abs(std::abs(u(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("haar_unitary unitarity residual below 1e-10") {
  RngStream rng(2, 0);
  for (Index dim : {1, 2, 3, 5, 8, 16, 64}) {
    for (int rep = 0; rep < 3; ++rep) {
      CHECK(unitarity_residual(haar_unitary(dim, rng)) <= 1e-10);
    }
  }
}

TEST_CASE("haar_unitary rejects dim 0") {
  RngStream rng(3, 0);
  CHECK_THROWS_AS(haar_unitary(0, rng), InvalidDimensionError);
  CHECK_THROWS_AS(haar_state(0, rng), InvalidDimensionError);
}

TEST_CASE("haar_unitary first-entry second moment matches the k=1 oracle") {
  // Independent oracle: the k=1 Haar moment operator is I/dim, so
  // E|U_00|^2 = 1/dim. Frozen value 0.25 at dim = 4.
  const auto oracle = permutation_sum_haar_moment(1, 4);
  const double expected = oracle(0, 0).real();
  CHECK(expected == doctest::Approx(0.25).epsilon(1e-12));

  RngStream rng(4, 0);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = std::norm(haar_unitary(4, rng)(0, 0));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / double(n - 1));
  CHECK(std::abs(mean - expected) <= 4.0 * se);
}

TEST_CASE("haar_unitary entries have vanishing first moment") {
  // Discriminates the phase correction: raw Householder Q has a strongly
  // sign-biased first column (E[Re U_00] ~ -0.4 at dim=2), while the Haar
  // first moment of every entry is zero.
  RngStream rng(45, 0);
  const int n = 20000;
  cplx sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx u = haar_unitary(2, rng)(0, 0);
    sum += u;
    sum_sq += std::norm(u);
  }
  const cplx mean = sum / double(n);
  const double se = std::sqrt(sum_sq / double(n) / double(n));
  CHECK(std::abs(mean) <= 4.0 * se);
}

TEST_CASE("haar_unitary |U_00|^2 is uniform at dim=2 (KS, 1% level)") {
  RngStream rng(5, 0);
  const size_t n = 100000;
  std::vector<double> xs(n);
  for (auto& x : xs) {
    x = std::norm(haar_unitary(2, rng)(0, 0));
  }
  const double d = ts::ks_statistic_uniform(xs);
  CHECK(d < ts::ks_critical_one_sample(n));
}

TEST_CASE("haar_state normalization and dim=1 phase") {
  RngStream rng(6, 0);
  for (Index dim : {1, 2, 7, 33}) {
    const auto psi = haar_state(dim, rng);
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-12);
  }
  const auto phase = haar_state(1, rng);
  CHECK(std::abs(std::abs(phase(0)) - 1.0) <= 1e-12);
}

TEST_CASE("haar_state first-component moment matches the k=1 oracle") {
  const auto oracle = permutation_sum_haar_moment(1, 8);
  const double expected = oracle(0, 0).real();  // 1/8
  RngStream rng(7, 0);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = std::norm(haar_state(8, rng)(0));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / double(n - 1));
  CHECK(std::abs(mean - expected) <= 4.0 * se);
}

TEST_CASE("haar_frame orthonormality and edge cases") {
  RngStream rng(8, 0);
  const auto f = haar_frame(2, 4, rng);
  CHECK(std::abs(f.col(0).dot(f.col(1))) <= 1e-10);
  const ComplexMatrix gram =
      f.adjoint() * f - ComplexMatrix::Identity(2, 2);
  CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);

  // Square case: a full Haar unitary's columns.
  const auto square = haar_frame(5, 5, rng);
  CHECK(unitarity_residual(square) <= 1e-10);

  // r = 1 is a single normalized vector.
  const auto single = haar_frame(1, 6, rng);
  CHECK(std::abs(single.col(0).norm() - 1.0) <= 1e-12);

  CHECK_THROWS_AS(haar_frame(5, 4, rng), InvalidDimensionError);
}

TEST_CASE("haar_frame with r=1 is distributed like haar_state") {
  RngStream rng_f(9, 0), rng_s(9, 1);
  const size_t n = 20000;
  std::vector<double> from_frame(n), from_state(n);
  for (size_t i = 0; i < n; ++i) {
    from_frame[i] = std::norm(haar_frame(1, 4, rng_f)(0, 0));
    from_state[i] = std::norm(haar_state(4, rng_s)(0));
  }
  const double d = ts::ks_statistic_two_sample(from_frame, from_state);
  CHECK(d < ts::ks_critical_two_sample(n, n));
}

TEST_CASE("reproducibility: identical stream gives identical matrices") {
  RngStream a(99, 5), b(99, 5);
  const auto ua = haar_unitary(6, a);
  const auto ub = haar_unitary(6, b);
  CHECK((ua - ub).cwiseAbs().maxCoeff() == 0.0);
}

TEST_SUITE_END();

#include "pensemble/theory.hpp"

#include <cmath>

#include "pensemble/errors.hpp"

namespace pens {

double TheoryParams::n_a_bits() const { return std::log2(double(d_A)); }

void TheoryParams::validate() const {
  if (d_A < 1 || d_B1 < 1 || q < 1) {
    throw InvalidDimensionError("TheoryParams: dimensions must be >= 1");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidDimensionError("TheoryParams: eps must lie in (0,1)");
  }
}

double log2_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  return (std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
          std::lgamma(double(n - k) + 1.0)) /
         std::log(2.0);
}

double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  if (k > n - k) k = n - k;
  double result = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= double(n - k + i);
    result /= double(i);
    if (result > 1e15) {
      // Above the integer-exact range; redo in log space.
      return std::exp2(log2_binomial(n, k));
    }
  }
  return std::round(result);
}

double f_ratio(Index k, Index d_A) {
  if (k < 1 || d_A < 1) {
    throw InvalidDimensionError("f_ratio: need k >= 1 and d_A >= 1");
  }
  const double da = double(d_A);
  return std::sqrt((1.0 + da) / (1.0 + da / double(k)));
}

double purity_recursion_step(double purity_before, Index d_A, Index d_B1) {
  const double da2 = double(d_A) * double(d_A);
  const double db2 = double(d_B1) * double(d_B1);
  return ((da2 - 1.0) * purity_before + double(d_A) * (db2 - 1.0)) /
         (da2 * db2 - 1.0);
}

double purity_theory(Index T, Index d_A, Index d_B1) {
  if (T < 0 || d_A < 1 || d_B1 < 1) {
    throw InvalidDimensionError("purity_theory: bad arguments");
  }
  const double da2 = double(d_A) * double(d_A);
  const double db2 = double(d_B1) * double(d_B1);
  const double ratio = (da2 - 1.0) / (da2 * db2 - 1.0);
  return 1.0 / double(d_A) +
         (1.0 - 1.0 / double(d_A)) * std::pow(ratio, double(T));
}

double entanglement_velocity(Index d_B1) {
  if (d_B1 < 1) {
    throw InvalidDimensionError("entanglement_velocity: d_B1 must be >= 1");
  }
  return 2.0 * std::log2(double(d_B1));
}

double design_time(Index k, const TheoryParams& params) {
  params.validate();
  if (k < 1) {
    throw InvalidDimensionError("design_time: k must be >= 1");
  }
  const double v_e = entanglement_velocity(params.d_B1);
  if (v_e == 0.0) {
    throw NoThermalizationError(
        "design_time: d_B1 = 1 gives v_E = 0, no thermalization");
  }
  const double t1 = params.n_a_bits() / v_e + 2.0 * std::log2(1.0 / params.eps) / v_e;
  const double da = double(params.d_A);
  return t1 + std::log2((1.0 + da) / (1.0 + da / double(k))) / v_e;
}

double design_time_limit(const TheoryParams& params) {
  params.validate();
  const double v_e = entanglement_velocity(params.d_B1);
  if (v_e == 0.0) {
    throw NoThermalizationError(
        "design_time_limit: d_B1 = 1 gives v_E = 0, no thermalization");
  }
  const double t1 = params.n_a_bits() / v_e + 2.0 * std::log2(1.0 / params.eps) / v_e;
  return t1 + std::log2(1.0 + double(params.d_A)) / v_e;
}

double delta1_from_entropy(double s2_bits, double n_a_bits) {
  const double gap = n_a_bits - s2_bits;
  if (gap < -1e-9) {
    throw InvalidDimensionError(
        "delta1_from_entropy: S2 exceeds N_A beyond tolerance");
  }
  if (gap <= 0.0) return 0.0;
  const double radicand = std::exp2(gap) - 1.0;
  return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

double haar_baseline_delta(Index k, Index d_A, Index d_B) {
  if (k < 1 || d_A < 1 || d_B < 1 || d_A * d_B < 2) {
    throw InvalidDimensionError("haar_baseline_delta: bad arguments");
  }
  const double dim_sym = binomial(std::uint64_t(k + d_A - 1), std::uint64_t(k));
  const double mean_sq = (double(d_A) + 1.0) /
                         (double(d_A) * double(d_B) + 1.0) * (dim_sym - 1.0);
  return std::sqrt(mean_sq);
}

double haar_mean_purity(Index d_A, Index d_B) {
  if (d_A < 1 || d_B < 1) {
    throw InvalidDimensionError("haar_mean_purity: bad arguments");
  }
  return (double(d_A) + double(d_B)) / (double(d_A) * double(d_B) + 1.0);
}

}  // namespace pens

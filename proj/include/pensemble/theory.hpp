#pragma once

#include <cstdint>

#include "pensemble/common.hpp"

namespace pens {

/// Inputs for the closed-form predictions.
struct TheoryParams {
  Index d_A = 2;
  Index d_B1 = 2;
  Index q = 1;
  double eps = 0.05;  // design threshold, in (0,1)

  double n_a_bits() const;  // N_A = log2(d_A)
  void validate() const;
};

/// binomial(n, k) as a double; switches to a log-space evaluation once the
/// exact product would leave the integer-exact range of double.
double binomial(std::uint64_t n, std::uint64_t k);
double log2_binomial(std::uint64_t n, std::uint64_t k);

/// Predicted ratio delta^(k)/delta^(1) = sqrt((1+d_A)/(1+d_A/k)).
/// Leading order in delta^(1); f(1, d) = 1 and f is increasing in k with
/// limit sqrt(1+d_A).
double f_ratio(Index k, Index d_A);

/// Gate-averaged purity of A after T steps in the infinite-bath limit:
/// 1/d_A + (1 - 1/d_A) * [(d_A^2-1)/(d_A^2 d_B1^2 - 1)]^T.
double purity_theory(Index T, Index d_A, Index d_B1);

/// One step of the purity recursion the closed form solves:
/// P -> ((d_A^2-1) P + d_A (d_B1^2-1)) / (d_A^2 d_B1^2 - 1).
double purity_recursion_step(double purity_before, Index d_A, Index d_B1);

/// Entanglement velocity v_E = 2 log2(d_B1) in bits per step.
double entanglement_velocity(Index d_B1);

/// Time for delta^(k) to drop below eps:
///   t_1 = N_A/v_E + 2 log2(1/eps)/v_E,
///   t_k = t_1 + log2((1+d_A)/(1+d_A/k))/v_E.
/// Step counts are continuous. Throws NoThermalizationError for d_B1 = 1.
double design_time(Index k, const TheoryParams& params);

/// k -> infinity limit of design_time: t_1 + log2(1+d_A)/v_E.
double design_time_limit(const TheoryParams& params);

/// delta^(1) = sqrt(2^(N_A - S2) - 1); clamped to 0 when S2 is within 1e-9
/// of N_A, an error beyond that.
double delta1_from_entropy(double s2_bits, double n_a_bits);

/// Root-mean-square design distance of the projected ensemble of a
/// Haar-random bipartite state: sqrt((d_A+1)/(d_A d_B + 1) * (binom - 1)).
/// This is the finite-size floor the circuit data saturates to.
double haar_baseline_delta(Index k, Index d_A, Index d_B);

/// Mean Tr(rho_A^2) of a Haar-random bipartite state,
/// (d_A + d_B)/(d_A d_B + 1); the stationary purity at finite bath size.
double haar_mean_purity(Index d_A, Index d_B);

}  // namespace pens

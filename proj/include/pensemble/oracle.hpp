#pragma once

#include <vector>

#include "pensemble/common.hpp"
#include "pensemble/ensemble.hpp"
#include "pensemble/rng.hpp"

namespace pens {

/// Replica-shuffling operator: sigma acts on k copies of a d-dimensional
/// space, |i_1..i_k> -> |i_{sigma^-1(1)} .. i_{sigma^-1(k)}>. Realized as a
/// d^k x d^k 0/1 matrix on demand.
struct PermutationOperator {
  Index k = 1;
  Index d = 1;
  std::vector<int> perm;  // images, 0-based: perm[j] = sigma(j)

  ComplexMatrix to_matrix() const;
};

/// Brute-force Haar moment operator on the full replica space:
/// (d-1)!/(k+d-1)! * sum over all sigma in S_k. Guarded to d^k <= 4096.
ComplexMatrix permutation_sum_haar_moment(Index k, Index d);

/// Isometry rows of the orthonormal symmetric basis in the full product
/// basis (D x d^k); embeds symmetric-basis operators as S^dag O S.
ComplexMatrix symmetric_embedding(const SymmetricBasis& basis);

/// Unique positive Hermitian square root of a PSD matrix. Eigenvalues in
/// [-1e-8, 0) are clamped to zero; anything lower is an error.
ComplexMatrix psd_sqrt(const DensityMatrix& rho);

/// Importance-weighted sample of the maximally entropic (Scrooge/GAP)
/// ensemble for a density matrix rho: phi ~ Haar, weight d*<phi|rho|phi>,
/// state sqrt(rho)|phi> normalized. The weighted first moment estimates rho
/// and the weights average to one.
struct WeightedEnsemble {
  Index d = 1;
  RealVector weights;
  ComplexMatrix states;  // d x n, unit columns

  Index n_samples() const { return weights.size(); }
};

WeightedEnsemble gap_sample(const DensityMatrix& rho, Index n, RngStream& rng);

/// Design-distance ratios Delta^(k)/Delta^(1), k = 1..k_max, of the sampled
/// GAP ensemble, with jackknife standard errors over sample blocks.
struct GapMomentRatios {
  std::vector<double> delta;        // Delta^(k), k = 1..k_max
  std::vector<double> ratio;        // Delta^(k)/Delta^(1)
  std::vector<double> ratio_stderr; // jackknife
  double delta1_stderr = 0.0;
};

GapMomentRatios gap_moment_ratio(const DensityMatrix& rho, Index k_max,
                                 Index n, RngStream& rng);

}  // namespace pens

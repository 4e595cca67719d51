#pragma once

#include <vector>

#include "pensemble/circuit.hpp"
#include "pensemble/common.hpp"

namespace pens {

/// Measurement-conditioned pure states on A with Born probabilities.
/// Outcomes are stored flat: probabilities(z) and states.col(z).
struct ProjectedEnsemble {
  Index d_A = 1;
  RealVector probabilities;  // kept outcomes, renormalized to sum 1
  ComplexMatrix states;      // d_A x n_outcomes, unit columns
  double discarded_mass = 0.0;

  Index n_outcomes() const { return probabilities.size(); }
};

/// Orthonormal basis of the permutation-symmetric sector of k copies of a
/// d-dimensional space: occupation vectors (n_0,...,n_{d-1}) with sum k, in
/// lexicographically descending order, each carrying the multinomial weight
/// sqrt(k!/prod n_i!). Dimension binomial(k+d-1, k).
struct SymmetricBasis {
  Index d = 1;
  Index k = 1;
  std::vector<std::vector<int>> occupations;
  std::vector<double> weights;

  Index size() const { return Index(occupations.size()); }

  static SymmetricBasis make(Index d, Index k);
};

/// k-th moment operator of an ensemble, expressed in the symmetric basis.
/// Hermitian, PSD, trace one.
struct MomentOperator {
  Index k = 1;
  Index d_A = 1;
  SymmetricBasis basis;
  ComplexMatrix entries;  // D x D, D = basis.size()
};

/// Born-rule projected ensemble of a tripartite state, measuring B = B1 B2
/// in the computational basis. Outcomes with probability below 1e-14 are
/// dropped; the dropped mass is recorded and the rest renormalized.
ProjectedEnsemble project(const PureState& state);

/// Moment operator rho^(k) = sum_z p(z) (|psi_z><psi_z|)^(x k) built
/// directly in the symmetric basis: the amplitude of outcome z on basis
/// element m is sqrt(k!/prod m_i!) * prod_i psi_i^(m_i). Cost
/// O(n_outcomes * D^2).
MomentOperator moment_operator(const ProjectedEnsemble& ens, Index k);

/// Haar ensemble moment operator: identity / binomial(k+d_A-1, k) on the
/// symmetric basis.
MomentOperator haar_moment(Index k, Index d_A);

/// Frame potential F^(k) = Tr[(rho^(k))^2]; bounded below by 1/D.
double frame_potential(const MomentOperator& mop);

/// Design distance Delta^(k) = sqrt(F^(k)/F_H^(k) - 1), identically the
/// normalized Frobenius distance to the Haar moment. Evaluated through the
/// cancellation-free difference form D*||rho - I/D||_F^2 (exact zero for an
/// exact design); the frame-potential radicand is still checked and values
/// below -1e-12 raise a numerical-inconsistency error.
double delta_k(const MomentOperator& mop);

/// Frobenius form ||rho - rho_H||_2 / ||rho_H||_2; the test-only cross-check
/// route for delta_k.
double delta_k_frobenius(const MomentOperator& mop);

}  // namespace pens

#pragma once

#include <cstdint>
#include <functional>

#include "pensemble/common.hpp"
#include "pensemble/randmat.hpp"
#include "pensemble/rng.hpp"

namespace pens {

struct CircuitConfig {
  Index d_A = 2;
  Index d_B1 = 2;
  Index q = 1024;  // dimension of B2
  Index t_max = 20;
  Index k_max = 7;
  Index n_realizations = 500;
  std::uint64_t master_seed = 1;

  Index bath_dim() const { return d_B1 * q; }       // d_B = d_B1 * q
  Index system_gate_dim() const { return d_A * d_B1; }
  Index total_dim() const { return d_A * d_B1 * q; }

  void validate() const;
};

/// Pure state on A x B1 x B2 with a-major flat layout:
/// amplitude index = (a * d_B1 + b1) * q + b2. Both gate applications are
/// then contiguous matrix products.
struct PureState {
  Index d_A = 1;
  Index d_B1 = 1;
  Index q = 1;
  ComplexVector amplitudes;

  Index bath_dim() const { return d_B1 * q; }
  Index total_dim() const { return d_A * d_B1 * q; }

  /// (d_A * d_B1) x q view; a system gate left-multiplies it.
  RowMatrixMap system_view();
  ConstRowMatrixMap system_view() const;

  /// d_A x (d_B1 * q) view; row a holds the B-coefficients of |a>.
  RowMatrixMap bath_view();
  ConstRowMatrixMap bath_view() const;

  double norm() const { return amplitudes.norm(); }
};

/// |0>_A |0>_B1 |0>_B2.
PureState init_state(const CircuitConfig& cfg);

/// Apply U in U(d_A * d_B1) to the system-bottleneck factor.
void apply_system_gate(PureState& state, const UnitaryMatrix& u);

/// Apply V in U(d_B1 * q) to the bath factor by dense right-multiplication
/// with V^T. Cross-validation path; guarded to small bath dimensions.
void apply_bath_gate_dense(PureState& state, const UnitaryMatrix& v);

/// Apply a Haar-random bath gate in O(d_A^2 * d_B1 * q) time.
///
/// The state, viewed as a d_A x d_B coefficient matrix M, is factorized as
/// M = C W with W holding r <= d_A orthonormal rows (r = numerical rank);
/// since a Haar V maps W to a fresh Haar frame independent of W, the state
/// is replaced by C W' with W' drawn from haar_frame. Equal in distribution
/// to the dense path, and rho_A = C C^dag is preserved exactly.
void apply_bath_gate_haar(PureState& state, RngStream& rng);

/// Reduced density matrix on A (d_A x d_A, Hermitian, PSD, trace one).
DensityMatrix reduced_density_matrix_A(const PureState& state);

struct PuritySummary {
  double purity = 1.0;  // Tr rho^2
  double s2_bits = 0.0; // -log2 purity
};

PuritySummary purity_and_renyi2(const DensityMatrix& rho);

/// Run the gate schedule V_0, U_0, V_1, U_1, ..., U_{T-1}, V_T and hand the
/// state to the observer immediately after each V_T (depth-T snapshot), for
/// T = 0..t_max. One trajectory serves all depths with shared gates.
/// Observers must be reentrant when trajectories run on several threads.
using SnapshotObserver = std::function<void(Index depth, const PureState&)>;
void evolve_and_snapshot(const CircuitConfig& cfg, RngStream& rng,
                         const SnapshotObserver& observer);

}  // namespace pens

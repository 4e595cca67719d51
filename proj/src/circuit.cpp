#include "pensemble/circuit.hpp"

#include <cmath>
#include <limits>
#include <new>
#include <vector>

#include "pensemble/errors.hpp"

namespace pens {

namespace {

constexpr Index kDenseBathGuard = 4096;
constexpr double kRankThreshold = 1e-12;

bool product_overflows(Index a, Index b) {
  if (a == 0 || b == 0) return true;
  return a > std::numeric_limits<Index>::max() / b;
}

}  // namespace

void CircuitConfig::validate() const {
  if (d_A < 1 || d_B1 < 1 || q < 1 || k_max < 1 || n_realizations < 1 ||
      t_max < 0) {
    throw InvalidDimensionError("CircuitConfig: all counts must be >= 1");
  }
  if (product_overflows(d_A, d_B1) || product_overflows(d_A * d_B1, q)) {
    throw ResourceError("CircuitConfig: d_A * d_B1 * q overflows");
  }
}

RowMatrixMap PureState::system_view() {
  return RowMatrixMap(amplitudes.data(), d_A * d_B1, q);
}

ConstRowMatrixMap PureState::system_view() const {
  return ConstRowMatrixMap(amplitudes.data(), d_A * d_B1, q);
}

RowMatrixMap PureState::bath_view() {
  return RowMatrixMap(amplitudes.data(), d_A, d_B1 * q);
}

ConstRowMatrixMap PureState::bath_view() const {
  return ConstRowMatrixMap(amplitudes.data(), d_A, d_B1 * q);
}

PureState init_state(const CircuitConfig& cfg) {
  cfg.validate();
  PureState state;
  state.d_A = cfg.d_A;
  state.d_B1 = cfg.d_B1;
  state.q = cfg.q;
  try {
    state.amplitudes = ComplexVector::Zero(cfg.total_dim());
  } catch (const std::bad_alloc&) {
    throw ResourceError("init_state: state vector does not fit in memory");
  }
  state.amplitudes(0) = 1.0;
  return state;
}

void apply_system_gate(PureState& state, const UnitaryMatrix& u) {
  const Index d_sys = state.d_A * state.d_B1;
  if (u.rows() != d_sys || u.cols() != d_sys) {
    throw DimensionMismatchError("apply_system_gate: U must act on d_A*d_B1");
  }
  auto m = state.system_view();
  m = (u * m).eval();
}

void apply_bath_gate_dense(PureState& state, const UnitaryMatrix& v) {
  const Index d_b = state.bath_dim();
  if (d_b > kDenseBathGuard) {
    throw ResourceError("apply_bath_gate_dense: bath dimension above guard");
  }
  if (v.rows() != d_b || v.cols() != d_b) {
    throw DimensionMismatchError("apply_bath_gate_dense: V must act on d_B1*q");
  }
  auto m = state.bath_view();
  m = (m * v.transpose()).eval();
}

void apply_bath_gate_haar(PureState& state, RngStream& rng) {
  const Index d_a = state.d_A;
  const Index d_b = state.bath_dim();
  auto m = state.bath_view();

  // Row-pivoted Gram-Schmidt factorization M = C * W, W r x d_B with
  // orthonormal rows. One reorthogonalization pass keeps the frame
  // orthonormal to machine precision.
  std::vector<ComplexVector> basis_rows;
  basis_rows.reserve(d_a);
  ComplexMatrix coeff = ComplexMatrix::Zero(d_a, std::min(d_a, d_b));
  std::vector<ComplexVector> residual(d_a);
  std::vector<bool> used(d_a, false);
  for (Index i = 0; i < d_a; ++i) {
    residual[i] = m.row(i).transpose();
  }

  const Index r_max = std::min(d_a, d_b);
  Index rank = 0;
  while (rank < r_max) {
    Index pivot = -1;
    double best = kRankThreshold;
    for (Index i = 0; i < d_a; ++i) {
      if (used[i]) continue;
      const double nrm = residual[i].norm();
      if (nrm > best) {
        best = nrm;
        pivot = i;
      }
    }
    if (pivot < 0) break;

    ComplexVector w = residual[pivot];
    for (Index s = 0; s < rank; ++s) {  // reorthogonalize
      w -= basis_rows[s] * basis_rows[s].dot(w);
    }
    const double wnorm = w.norm();
    if (wnorm <= kRankThreshold) {
      used[pivot] = true;
      continue;
    }
    w /= wnorm;
    basis_rows.push_back(w);
    used[pivot] = true;

    for (Index i = 0; i < d_a; ++i) {
      if (used[i] && i != pivot) continue;
      const cplx c = w.dot(residual[i]);
      coeff(i, rank) = c;
      if (i != pivot) residual[i] -= w * c;
    }
    ++rank;
  }

  if (rank == 0) {
    return;  // zero state; nothing to rotate
  }

  // Fresh Haar frame; its transpose has orthonormal rows with the same
  // distribution as W V^T for Haar V.
  const ComplexMatrix frame = haar_frame(rank, d_b, rng);
  m = coeff.leftCols(rank) * frame.transpose();
}

DensityMatrix reduced_density_matrix_A(const PureState& state) {
  auto m = state.bath_view();
  DensityMatrix rho = m * m.adjoint();
  rho = ((rho + rho.adjoint()) / 2.0).eval();  // kill rounding skew
  return rho;
}

PuritySummary purity_and_renyi2(const DensityMatrix& rho) {
  double purity = (rho * rho).trace().real();
  if (purity <= 0.0) {
    throw NumericalError("purity_and_renyi2: non-positive purity");
  }
  if (purity > 1.0 && purity <= 1.0 + 1e-12) purity = 1.0;  // rounding band
  return {purity, -std::log2(purity)};
}

void evolve_and_snapshot(const CircuitConfig& cfg, RngStream& rng,
                         const SnapshotObserver& observer) {
  cfg.validate();
  PureState state = init_state(cfg);
  apply_bath_gate_haar(state, rng);  // V_0
  observer(0, state);
  for (Index t = 0; t < cfg.t_max; ++t) {
    const UnitaryMatrix u = haar_unitary(cfg.system_gate_dim(), rng);
    apply_system_gate(state, u);
    apply_bath_gate_haar(state, rng);  // V_{t+1}
    observer(t + 1, state);
  }
}

}  // namespace pens

#include "pensemble/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "pensemble/errors.hpp"

namespace pens {

namespace {

constexpr double kOutcomeThreshold = 1e-14;

void descending_compositions(Index d, Index k, std::vector<int>& current,
                             Index slot, Index remaining,
                             std::vector<std::vector<int>>& out) {
  if (slot == d - 1) {
    current[slot] = int(remaining);
    out.push_back(current);
    return;
  }
  for (Index n = remaining; n >= 0; --n) {
    current[slot] = int(n);
    descending_compositions(d, k, current, slot + 1, remaining - n, out);
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= double(i);
  return f;
}

}  // namespace

SymmetricBasis SymmetricBasis::make(Index d, Index k) {
  if (d < 1 || k < 1) {
    throw InvalidDimensionError("SymmetricBasis: need d >= 1 and k >= 1");
  }
  SymmetricBasis basis;
  basis.d = d;
  basis.k = k;
  std::vector<int> current(d, 0);
  descending_compositions(d, k, current, 0, k, basis.occupations);
  basis.weights.reserve(basis.occupations.size());
  const double k_fact = factorial(int(k));
  for (const auto& occ : basis.occupations) {
    double denom = 1.0;
    for (int n : occ) denom *= factorial(n);
    basis.weights.push_back(std::sqrt(k_fact / denom));
  }
  return basis;
}

ProjectedEnsemble project(const PureState& state) {
  const auto m = state.bath_view();
  const Index d_b = state.bath_dim();

  RealVector p_all(d_b);
  for (Index z = 0; z < d_b; ++z) {
    p_all(z) = m.col(z).squaredNorm();
  }

  Index kept = 0;
  double kept_mass = 0.0;
  for (Index z = 0; z < d_b; ++z) {
    if (p_all(z) >= kOutcomeThreshold) {
      ++kept;
      kept_mass += p_all(z);
    }
  }
  if (kept == 0) {
    throw DegenerateStateError(
        "project: every outcome below probability threshold");
  }

  ProjectedEnsemble ens;
  ens.d_A = state.d_A;
  ens.probabilities.resize(kept);
  ens.states.resize(state.d_A, kept);
  ens.discarded_mass = std::max(0.0, 1.0 - kept_mass);

  Index j = 0;
  for (Index z = 0; z < d_b; ++z) {
    if (p_all(z) < kOutcomeThreshold) continue;
    ens.probabilities(j) = p_all(z) / kept_mass;
    ens.states.col(j) = m.col(z) / std::sqrt(p_all(z));
    ++j;
  }
  return ens;
}

MomentOperator moment_operator(const ProjectedEnsemble& ens, Index k) {
  if (k < 1) {
    throw InvalidDimensionError("moment_operator: k must be >= 1");
  }
  MomentOperator mop;
  mop.k = k;
  mop.d_A = ens.d_A;
  mop.basis = SymmetricBasis::make(ens.d_A, k);
  const Index dim = mop.basis.size();
  const Index n = ens.n_outcomes();

  // Columns of `amps` are sqrt(p_z) times the symmetric-sector amplitude
  // vector of outcome z; the moment operator is their Gram accumulation.
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  const Index chunk = std::max<Index>(1, std::min<Index>(n, 4096));
  ComplexMatrix amps(dim, chunk);
  ComplexMatrix powers(ens.d_A, k + 1);

  Index done = 0;
  while (done < n) {
    const Index batch = std::min(chunk, n - done);
    for (Index zz = 0; zz < batch; ++zz) {
      const Index z = done + zz;
      powers.col(0).setOnes();
      for (Index j = 1; j <= k; ++j) {
        powers.col(j) = powers.col(j - 1).cwiseProduct(ens.states.col(z));
      }
      const double root_p = std::sqrt(ens.probabilities(z));
      for (Index b = 0; b < dim; ++b) {
        cplx a = mop.basis.weights[size_t(b)];
        const auto& occ = mop.basis.occupations[size_t(b)];
        for (Index i = 0; i < ens.d_A; ++i) {
          if (occ[size_t(i)] != 0) a *= powers(i, occ[size_t(i)]);
        }
        amps(b, zz) = root_p * a;
      }
    }
    rho.noalias() += amps.leftCols(batch) * amps.leftCols(batch).adjoint();
    done += batch;
  }

  mop.entries = (rho + rho.adjoint()) / 2.0;
  return mop;
}

MomentOperator haar_moment(Index k, Index d_A) {
  if (k < 1 || d_A < 1) {
    throw InvalidDimensionError("haar_moment: need k >= 1 and d_A >= 1");
  }
  MomentOperator mop;
  mop.k = k;
  mop.d_A = d_A;
  mop.basis = SymmetricBasis::make(d_A, k);
  const Index dim = mop.basis.size();
  mop.entries = ComplexMatrix::Identity(dim, dim) / double(dim);
  return mop;
}

double frame_potential(const MomentOperator& mop) {
  return mop.entries.squaredNorm();
}

double delta_k(const MomentOperator& mop) {
  const Index dim = mop.basis.size();
  const double radicand_fp = frame_potential(mop) * double(dim) - 1.0;
  if (radicand_fp < -1e-12) {
    throw NumericalError("delta_k: frame potential below the Haar bound");
  }
  // Same quantity through the difference form D * ||rho - I/D||_F^2, which
  // does not cancel near zero and is exactly 0 for an exact design.
  const double inv_dim = 1.0 / double(dim);
  double sum = 0.0;
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) {
      const cplx diff =
          mop.entries(i, j) - (i == j ? cplx(inv_dim, 0.0) : cplx(0.0, 0.0));
      sum += std::norm(diff);
    }
  }
  return std::sqrt(sum * double(dim));
}

double delta_k_frobenius(const MomentOperator& mop) {
  const Index dim = mop.basis.size();
  const ComplexMatrix diff =
      mop.entries - ComplexMatrix::Identity(dim, dim) / double(dim);
  const double haar_norm = 1.0 / std::sqrt(double(dim));
  return diff.norm() / haar_norm;
}

}  // namespace pens

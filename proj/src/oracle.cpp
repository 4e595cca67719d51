#include "pensemble/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "pensemble/errors.hpp"
#include "pensemble/randmat.hpp"

namespace pens {

namespace {

constexpr Index kBruteForceGuard = 4096;

Index int_pow(Index base, Index exp) {
  Index r = 1;
  for (Index i = 0; i < exp; ++i) r *= base;
  return r;
}

// Digits of idx in base d, replica 0 first (big-endian).
void decode(Index idx, Index d, Index k, std::vector<Index>& digits) {
  for (Index t = k; t-- > 0;) {
    digits[size_t(t)] = idx % d;
    idx /= d;
  }
}

Index encode(const std::vector<Index>& digits, Index d) {
  Index idx = 0;
  for (Index digit : digits) idx = idx * d + digit;
  return idx;
}

}  // namespace

ComplexMatrix PermutationOperator::to_matrix() const {
  const Index dim = int_pow(d, k);
  if (dim > kBruteForceGuard) {
    throw ResourceError("PermutationOperator: d^k above brute-force guard");
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  std::vector<Index> in(static_cast<size_t>(k)), out(static_cast<size_t>(k));
  for (Index col = 0; col < dim; ++col) {
    decode(col, d, k, in);
    // sigma |i_1..i_k> = |i_{sigma^-1(1)}..>, i.e. out[sigma(t)] = in[t].
    for (Index t = 0; t < k; ++t) {
      out[size_t(perm[size_t(t)])] = in[size_t(t)];
    }
    m(encode(out, d), col) = 1.0;
  }
  return m;
}

ComplexMatrix permutation_sum_haar_moment(Index k, Index d) {
  if (k < 1 || d < 1) {
    throw InvalidDimensionError(
        "permutation_sum_haar_moment: need k >= 1 and d >= 1");
  }
  const Index dim = int_pow(d, k);
  if (dim > kBruteForceGuard) {
    throw ResourceError("permutation_sum_haar_moment: d^k above guard");
  }
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  std::vector<int> perm(static_cast<size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  PermutationOperator op{k, d, perm};
  do {
    op.perm = perm;
    sum += op.to_matrix();
  } while (std::next_permutation(perm.begin(), perm.end()));
  // (d-1)!/(k+d-1)! = 1/(d (d+1) ... (d+k-1))
  double norm = 1.0;
  for (Index j = 0; j < k; ++j) norm *= double(d + j);
  return sum / norm;
}

ComplexMatrix symmetric_embedding(const SymmetricBasis& basis) {
  const Index dim_full = int_pow(basis.d, basis.k);
  if (dim_full > kBruteForceGuard) {
    throw ResourceError("symmetric_embedding: d^k above guard");
  }
  const Index dim_sym = basis.size();
  ComplexMatrix s = ComplexMatrix::Zero(dim_sym, dim_full);
  std::vector<Index> digits(static_cast<size_t>(basis.k));
  std::vector<int> occ(static_cast<size_t>(basis.d));
  for (Index col = 0; col < dim_full; ++col) {
    decode(col, basis.d, basis.k, digits);
    std::fill(occ.begin(), occ.end(), 0);
    for (Index digit : digits) ++occ[size_t(digit)];
    for (Index row = 0; row < dim_sym; ++row) {
      if (basis.occupations[size_t(row)] == occ) {
        // Each arrangement enters |sym_row> with weight sqrt(prod n!/k!),
        // the reciprocal of the stored multinomial weight.
        s(row, col) = 1.0 / basis.weights[size_t(row)];
        break;
      }
    }
  }
  return s;
}

ComplexMatrix psd_sqrt(const DensityMatrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("psd_sqrt: matrix must be square");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8) {
    throw std::invalid_argument("psd_sqrt: matrix must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  RealVector evals = es.eigenvalues();
  for (Index i = 0; i < evals.size(); ++i) {
    if (evals(i) < -1e-8) {
      throw std::invalid_argument("psd_sqrt: matrix has a negative eigenvalue");
    }
    evals(i) = std::max(0.0, evals(i));
  }
  return es.eigenvectors() * evals.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

WeightedEnsemble gap_sample(const DensityMatrix& rho, Index n,
                            RngStream& rng) {
  if (n < 1) {
    throw InvalidDimensionError("gap_sample: n must be >= 1");
  }
  const Index d = rho.rows();
  const ComplexMatrix root = psd_sqrt(rho);

  WeightedEnsemble ens;
  ens.d = d;
  ens.weights.resize(n);
  ens.states.resize(d, n);
  ComplexVector phi(d), distorted(d);
  for (Index i = 0; i < n; ++i) {
    double norm_sq = 0.0;
    do {
      phi = haar_state(d, rng);
      distorted.noalias() = root * phi;
      norm_sq = distorted.squaredNorm();
    } while (norm_sq < 1e-280);  // singular-direction guard, resample
    ens.weights(i) = double(d) * norm_sq;  // d * <phi|rho|phi>
    ens.states.col(i) = distorted / std::sqrt(norm_sq);
  }
  return ens;
}

GapMomentRatios gap_moment_ratio(const DensityMatrix& rho, Index k_max,
                                 Index n, RngStream& rng) {
  if (k_max < 1) {
    throw InvalidDimensionError("gap_moment_ratio: k_max must be >= 1");
  }
  const WeightedEnsemble samples = gap_sample(rho, n, rng);
  const Index d = samples.d;

  // Split into blocks; per-block moment operators (weights as
  // probabilities) feed both the pooled estimate and the jackknife.
  const Index n_blocks = std::min<Index>(50, n);
  std::vector<double> block_weight(size_t(n_blocks), 0.0);
  // block_rho[j][k-1] = W_j * rho_k(block j)
  std::vector<std::vector<ComplexMatrix>> block_rho(static_cast<size_t>(n_blocks));

  Index start = 0;
  for (Index j = 0; j < n_blocks; ++j) {
    const Index stop = (j + 1) * n / n_blocks;
    const Index len = stop - start;
    ProjectedEnsemble block;
    block.d_A = d;
    block.states = samples.states.middleCols(start, len);
    const double w_sum = samples.weights.segment(start, len).sum();
    block.probabilities = samples.weights.segment(start, len) / w_sum;
    block_weight[size_t(j)] = w_sum;
    block_rho[size_t(j)].reserve(size_t(k_max));
    for (Index k = 1; k <= k_max; ++k) {
      block_rho[size_t(j)].push_back(w_sum *
                                     moment_operator(block, k).entries);
    }
    start = stop;
  }

  const double total_weight =
      std::accumulate(block_weight.begin(), block_weight.end(), 0.0);

  GapMomentRatios out;
  out.delta.resize(size_t(k_max));
  out.ratio.resize(size_t(k_max));
  out.ratio_stderr.assign(size_t(k_max), 0.0);

  std::vector<ComplexMatrix> total(static_cast<size_t>(k_max));
  for (Index k = 1; k <= k_max; ++k) {
    ComplexMatrix acc = block_rho[0][size_t(k - 1)];
    for (Index j = 1; j < n_blocks; ++j) acc += block_rho[size_t(j)][size_t(k - 1)];
    total[size_t(k - 1)] = acc;
    const ComplexMatrix rho_k = acc / total_weight;
    const double dim = double(rho_k.rows());
    const double radicand = rho_k.squaredNorm() * dim - 1.0;
    out.delta[size_t(k - 1)] = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
  }

  // Leave-one-block-out replicas.
  std::vector<std::vector<double>> jack_ratio(static_cast<size_t>(k_max));
  std::vector<double> jack_delta1;
  for (Index j = 0; j < n_blocks; ++j) {
    const double w = total_weight - block_weight[size_t(j)];
    std::vector<double> deltas(static_cast<size_t>(k_max));
    for (Index k = 1; k <= k_max; ++k) {
      const ComplexMatrix rho_k =
          (total[size_t(k - 1)] - block_rho[size_t(j)][size_t(k - 1)]) / w;
      const double dim = double(rho_k.rows());
      const double radicand = rho_k.squaredNorm() * dim - 1.0;
      deltas[size_t(k - 1)] = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
    }
    jack_delta1.push_back(deltas[0]);
    for (Index k = 1; k <= k_max; ++k) {
      jack_ratio[size_t(k - 1)].push_back(
          deltas[0] > 0.0 ? deltas[size_t(k - 1)] / deltas[0] : 0.0);
    }
  }

  auto jackknife_stderr = [n_blocks](const std::vector<double>& reps) {
    const double mean =
        std::accumulate(reps.begin(), reps.end(), 0.0) / double(reps.size());
    double ss = 0.0;
    for (double r : reps) ss += (r - mean) * (r - mean);
    return std::sqrt(ss * double(n_blocks - 1) / double(n_blocks));
  };

  out.delta1_stderr = jackknife_stderr(jack_delta1);
  if (out.delta[0] < 10.0 * out.delta1_stderr) {
    throw IllConditionedRatioError(
        "gap_moment_ratio: Delta^(1) below 10x its standard error");
  }
  for (Index k = 1; k <= k_max; ++k) {
    out.ratio[size_t(k - 1)] = out.delta[size_t(k - 1)] / out.delta[0];
    out.ratio_stderr[size_t(k - 1)] = jackknife_stderr(jack_ratio[size_t(k - 1)]);
  }
  return out;
}

}  // namespace pens

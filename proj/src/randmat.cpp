#include "pensemble/randmat.hpp"

#include <Eigen/QR>
#include <cmath>

#include "pensemble/errors.hpp"

namespace pens {

namespace {

ComplexMatrix ginibre(Index rows, Index cols, RngStream& rng) {
  ComplexMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      a(i, j) = rng.complex_normal();
    }
  }
  return a;
}

// Thin QR of a Ginibre matrix with the column-phase correction that makes the
// factorization canonical (R diagonal positive). Columns of the result are an
// exactly Haar-distributed orthonormal frame.
ComplexMatrix haar_frame_impl(Index r, Index dim, RngStream& rng) {
  ComplexMatrix a = ginibre(dim, r, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, r);
  const auto& qr_matrix = qr.matrixQR();
  for (Index j = 0; j < r; ++j) {
    const cplx rjj = qr_matrix(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) {
      q.col(j) *= rjj / mag;
    }
  }
  return q;
}

}  // namespace

UnitaryMatrix haar_unitary(Index dim, RngStream& rng) {
  if (dim < 1) {
    throw InvalidDimensionError("haar_unitary: dim must be >= 1");
  }
  return haar_frame_impl(dim, dim, rng);
}

ComplexVector haar_state(Index dim, RngStream& rng) {
  if (dim < 1) {
    throw InvalidDimensionError("haar_state: dim must be >= 1");
  }
  ComplexVector psi(dim);
  for (Index i = 0; i < dim; ++i) {
    psi(i) = rng.complex_normal();
  }
  const double nrm = psi.norm();
  if (nrm == 0.0) {
    // Probability-zero draw; redo rather than return garbage.
    return haar_state(dim, rng);
  }
  return psi / nrm;
}

ComplexMatrix haar_frame(Index r, Index dim, RngStream& rng) {
  if (dim < 1 || r < 1 || r > dim) {
    throw InvalidDimensionError("haar_frame: need 1 <= r <= dim");
  }
  return haar_frame_impl(r, dim, rng);
}

}  // namespace pens

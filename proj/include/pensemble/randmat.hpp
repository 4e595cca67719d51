#pragma once

#include "pensemble/common.hpp"
#include "pensemble/rng.hpp"

namespace pens {

/// Haar-distributed unitary on U(dim).
///
/// A Ginibre matrix is QR-factorized and each column of Q is multiplied by
/// the unit phase of the matching diagonal entry of R. Without the phase fix
/// the output is orthonormal but not Haar; with the fix the decomposition is
/// the canonical one (positive-diagonal R) and the distribution is exactly
/// Haar.
UnitaryMatrix haar_unitary(Index dim, RngStream& rng);

/// Haar-random pure state: normalized vector of iid complex Gaussians.
ComplexVector haar_state(Index dim, RngStream& rng);

/// r orthonormal Haar-random vectors of length dim (columns of the result).
/// The spanned subspace is Haar-distributed on the Grassmannian; r = dim
/// reduces to the columns of a Haar unitary.
ComplexMatrix haar_frame(Index r, Index dim, RngStream& rng);

}  // namespace pens

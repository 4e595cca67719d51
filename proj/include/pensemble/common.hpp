#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace pens {

using cplx = std::complex<double>;
using Index = Eigen::Index;

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Row-major view type used to reinterpret flat state vectors as matrices.
using RowMatrixXcd =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixMap = Eigen::Map<RowMatrixXcd>;
using ConstRowMatrixMap = Eigen::Map<const RowMatrixXcd>;

// A unitary matrix; unitarity is a contract of the producing operation
// (checked to 1e-10 in the test suite), not re-verified on every use.
using UnitaryMatrix = Eigen::MatrixXcd;

// Hermitian, PSD, trace-one matrix by contract.
using DensityMatrix = Eigen::MatrixXcd;

/// Max-norm residual ||U^dag U - I||_max, used by unitarity checks.
double unitarity_residual(const ComplexMatrix& u);

/// Max-norm of (m - m^dag)/2 deviations and related density-matrix checks.
bool is_valid_density_matrix(const DensityMatrix& rho, double tol = 1e-10);

}  // namespace pens

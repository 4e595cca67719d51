#include "pensemble/common.hpp"

#include <Eigen/Eigenvalues>

namespace pens {

double unitarity_residual(const ComplexMatrix& u) {
  const ComplexMatrix g =
      u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

bool is_valid_density_matrix(const DensityMatrix& rho, double tol) {
  if (rho.rows() != rho.cols()) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho.trace().real() - 1.0) > tol) return false;
  if (std::abs(rho.trace().imag()) > tol) return false;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho,
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace pens

#include "racbem/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "racbem/error.hpp"

namespace racbem {

namespace {

void check_square(const CMatrix& a) {
  require(a.rows() == a.cols() && a.rows() > 0, ErrorCode::DimensionMismatch,
          "oracle expects a non-empty square matrix");
  require(a.rows() <= kOracleMaxDim, ErrorCode::CapExceeded,
          "matrix dimension exceeds the oracle cap");
  require(a.allFinite(), ErrorCode::InvalidArgument, "matrix has non-finite entries");
}

Eigen::SelfAdjointEigenSolver<CMatrix> eig(const CMatrix& h) {
  check_square(h);
  require_hermitian(h);
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  require(es.info() == Eigen::Success, ErrorCode::Internal, "eigendecomposition failed");
  return es;
}

}  // namespace

void require_hermitian(const CMatrix& h, double tol) {
  require(h.rows() == h.cols(), ErrorCode::DimensionMismatch, "matrix is not square");
  const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
  require(dev <= tol, ErrorCode::InvalidArgument,
          "matrix is not Hermitian (deviation " + std::to_string(dev) + ")");
}

CVector basis_vector(Eigen::Index dim, Eigen::Index index) {
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

Svd svd(const CMatrix& a) {
  check_square(a);
  Eigen::BDCSVD<CMatrix> s(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  require(s.info() == Eigen::Success, ErrorCode::Internal, "SVD failed");
  return {s.matrixU(), s.singularValues(), s.matrixV()};
}

Eigen::VectorXd singular_values(const CMatrix& a) {
  check_square(a);
  Eigen::BDCSVD<CMatrix> s(a);
  return s.singularValues();
}

CMatrix matfun_right(const CMatrix& a, const std::function<double(double)>& f) {
  const Svd s = svd(a);
  require(s.sigma.maxCoeff() <= 1.0 + 1e-8, ErrorCode::InvalidArgument,
          "singular values exceed 1");
  Eigen::VectorXd fs(s.sigma.size());
  for (Eigen::Index i = 0; i < fs.size(); ++i) fs(i) = f(std::min(1.0, s.sigma(i)));
  return s.V * fs.asDiagonal() * s.V.adjoint();
}

CMatrix matfun_right(const CMatrix& a, const ChebPoly& f) {
  return matfun_right(a, [&](double x) { return f(x); });
}

CMatrix matfun_odd(const CMatrix& a, const std::function<double(double)>& f) {
  const Svd s = svd(a);
  require(s.sigma.maxCoeff() <= 1.0 + 1e-8, ErrorCode::InvalidArgument,
          "singular values exceed 1");
  Eigen::VectorXd fs(s.sigma.size());
  for (Eigen::Index i = 0; i < fs.size(); ++i) fs(i) = f(std::min(1.0, s.sigma(i)));
  return s.W * fs.asDiagonal() * s.V.adjoint();
}

CMatrix hermitian_function(const CMatrix& h, const std::function<double(double)>& f) {
  const auto es = eig(h);
  Eigen::VectorXd fl(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) fl(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().adjoint();
}

double exact_success_prob(const CMatrix& a, const std::function<double(double)>& f,
                          const CVector& b) {
  require(b.size() == a.rows(), ErrorCode::DimensionMismatch, "vector length mismatch");
  require(std::abs(b.norm() - 1.0) <= 1e-10, ErrorCode::InvalidArgument,
          "input vector is not normalized");
  return (matfun_right(a, f) * b).squaredNorm();
}

double exact_success_prob(const CMatrix& a, const ChebPoly& f, const CVector& b) {
  return exact_success_prob(a, [&](double x) { return f(x); }, b);
}

std::complex<double> exact_time_series(const CMatrix& h, const CVector& psi, double t) {
  const auto es = eig(h);
  require(psi.size() == h.rows(), ErrorCode::DimensionMismatch, "vector length mismatch");
  const CVector c = es.eigenvectors().adjoint() * psi;
  std::complex<double> s = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k)
    s += std::norm(c(k)) * std::polar(1.0, es.eigenvalues()(k) * t);
  return s;
}

double exact_spectral_measure(const CMatrix& h, const CVector& psi, double energy,
                              double eta) {
  require(eta > 0.0, ErrorCode::InvalidArgument, "eta must be positive");
  const auto es = eig(h);
  require(psi.size() == h.rows(), ErrorCode::DimensionMismatch, "vector length mismatch");
  const CVector c = es.eigenvectors().adjoint() * psi;
  double s = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double dl = es.eigenvalues()(k) - energy;
    s += std::norm(c(k)) / (dl * dl + eta * eta);
  }
  return eta / std::numbers::pi * s;
}

double exact_thermal_energy(const CMatrix& h, double beta) {
  require(beta >= 0.0, ErrorCode::InvalidArgument, "beta must be non-negative");
  const auto es = eig(h);
  const Eigen::VectorXd& l = es.eigenvalues();
  const double lmin = l.minCoeff();
  double z = 0.0, e = 0.0;
  for (Eigen::Index k = 0; k < l.size(); ++k) {
    const double w = std::exp(-beta * (l(k) - lmin));
    z += w;
    e += w * l(k);
  }
  return e / z;
}

}  // namespace racbem

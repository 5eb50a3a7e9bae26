#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "racbem/chebyshev.hpp"
#include "racbem/statevector.hpp"

namespace racbem {

/// Largest system dimension the oracle accepts (10 qubits).
inline constexpr Eigen::Index kOracleMaxDim = 1024;

struct Svd {
  CMatrix W;
  Eigen::VectorXd sigma;
  CMatrix V;  // A = W diag(sigma) V^dag
};

Svd svd(const CMatrix& a);
Eigen::VectorXd singular_values(const CMatrix& a);

/// V f(Sigma) V^dag.
CMatrix matfun_right(const CMatrix& a, const std::function<double(double)>& f);
CMatrix matfun_right(const CMatrix& a, const ChebPoly& f);
/// W f(Sigma) V^dag, what an odd-degree QSVT circuit block-encodes.
CMatrix matfun_odd(const CMatrix& a, const std::function<double(double)>& f);

/// f applied to the eigenvalues of a Hermitian matrix.
CMatrix hermitian_function(const CMatrix& h, const std::function<double(double)>& f);

/// || f>(A) |b> ||^2.
double exact_success_prob(const CMatrix& a, const std::function<double(double)>& f,
                          const CVector& b);
double exact_success_prob(const CMatrix& a, const ChebPoly& f, const CVector& b);

/// <psi| e^{i H t} |psi>.
std::complex<double> exact_time_series(const CMatrix& h, const CVector& psi, double t);
/// (eta/pi) sum_k |<v_k|psi>|^2 / ((lambda_k - E)^2 + eta^2).
double exact_spectral_measure(const CMatrix& h, const CVector& psi, double energy, double eta);
/// Tr[H e^{-beta H}] / Tr[e^{-beta H}].
double exact_thermal_energy(const CMatrix& h, double beta);

/// Throws unless max |H - H^dag| <= tol.
void require_hermitian(const CMatrix& h, double tol = 1e-10);
CVector basis_vector(Eigen::Index dim, Eigen::Index index);

}  // namespace racbem

#pragma once

#include <array>
#include <string>
#include <vector>

#include "racbem/chebyshev.hpp"

namespace racbem {

enum class Convention { Phi, Varphi };

const char* convention_name(Convention c) noexcept;
Convention convention_from_name(const std::string& name);

struct PhaseFactors {
  std::vector<double> values;
  Convention convention = Convention::Phi;
  bool symmetric = false;
  double residual = 0.0;

  int degree() const noexcept { return static_cast<int>(values.size()) - 1; }
};

/// Row-major 2x2 product e^{i phi_0 Z} prod_j [e^{i arccos(x) X} e^{i phi_j Z}].
std::array<Complex, 4> u_phi(double x, const std::vector<double>& phi);

/// Positive Chebyshev roots cos((2j - 1) pi / (4 dt)), j = 1..dt, dt = ceil((d+1)/2).
std::vector<double> objective_nodes(int d);

/// Mean squared residual of Re <0|U_phi(x_j)|0> - f(x_j) over the nodes.
double objective(const std::vector<double>& phi, const ChebPoly& f);
std::vector<double> gradient(const std::vector<double>& phi, const ChebPoly& f);

struct OptimizeOptions {
  double tol = 1e-24;
  double grad_tol = 1e-12;
  int max_iterations = 10000;
  int memory = 10;
};

struct OptimizeResult {
  PhaseFactors phases;  // phi convention, symmetric
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double node_error_bound = 0.0;  // sqrt(L dt) bounds the largest node residual
};

/// Symmetric phases for f by quasi-Newton descent on the reduced coordinates
/// (phi_0, ..., phi_{dt-1}). Throws NonConvergence when the stop rule is the
/// iteration cap and the residual is still above `tol`; the best iterate is in
/// the message.
OptimizeResult optimize(const ChebPoly& f, const OptimizeOptions& opts = {});
/// Non-throwing variant; `converged` tells whether a tolerance was met.
OptimizeResult optimize_best_effort(const ChebPoly& f, const OptimizeOptions& opts = {});

/// varphi_0 = phi_0 + pi/4, varphi_i = phi_i + pi/2, varphi_d = phi_d + pi/4.
PhaseFactors to_varphi(const PhaseFactors& phi);
PhaseFactors to_phi(const PhaseFactors& varphi);

/// Phases to hand to the QSVT circuit so that its block is V f(Sigma) V^dag
/// (W f(Sigma) V^dag for odd d) with f = Re <0|U_phi|0>. This is to_varphi
/// plus a fixed offset on the two end phases that depends on d mod 4.
PhaseFactors circuit_phases(const PhaseFactors& phi);

}  // namespace racbem

#include "racbem/phase_factors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "racbem/error.hpp"
#include "racbem/rng.hpp"

namespace racbem {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

struct Vec2 {
  Complex a, b;
};

int dtilde(int d) { return (d + 2) / 2; }

constexpr int kStallWindow = 200;
constexpr int kRestarts = 8;

void check_pair(const std::vector<double>& phi, const ChebPoly& f) {
  require(!phi.empty(), ErrorCode::InvalidArgument, "phase sequence is empty");
  const int d = static_cast<int>(phi.size()) - 1;
  require(f.lo == -1.0 && f.hi == 1.0, ErrorCode::InvalidArgument,
          "target polynomial must live on [-1, 1]");
  require(f.degree() <= d, ErrorCode::DimensionMismatch,
          "target degree " + std::to_string(f.degree()) + " exceeds phase degree " +
              std::to_string(d));
  for (std::size_t k = (d % 2 == 0) ? 1 : 0; k < f.coeffs.size(); k += 2)
    require(std::abs(f.coeffs[k]) <= 1e-12, ErrorCode::InvalidArgument,
            "target parity does not match the phase degree");
}

// Value Re<0|U|0> and, when grad != nullptr, d/dphi_k of it at one node.
double node_value(double x, const std::vector<double>& phi, double* grad) {
  const std::size_t n = phi.size();
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  // W = [[x, i s], [i s, x]], E(p) = diag(e^{ip}, e^{-ip})
  auto row_ew = [&](Vec2 l, double p) {  // l^T E(p) W
    const Complex u = l.a * std::polar(1.0, p), v = l.b * std::polar(1.0, -p);
    return Vec2{u * x + v * kI * s, u * kI * s + v * x};
  };
  if (!grad) {
    Vec2 l{1.0, 0.0};
    for (std::size_t k = 0; k + 1 < n; ++k) l = row_ew(l, phi[k]);
    return (l.a * std::polar(1.0, phi[n - 1])).real();
  }
  std::vector<Vec2> left(n), right(n);
  left[0] = {1.0, 0.0};
  for (std::size_t k = 0; k + 1 < n; ++k) left[k + 1] = row_ew(left[k], phi[k]);
  right[n - 1] = {1.0, 0.0};
  for (std::size_t k = n - 1; k > 0; --k) {  // r_{k-1} = W E(phi_k) r_k
    const Complex u = right[k].a * std::polar(1.0, phi[k]);
    const Complex v = right[k].b * std::polar(1.0, -phi[k]);
    right[k - 1] = {x * u + kI * s * v, kI * s * u + x * v};
  }
  for (std::size_t k = 0; k < n; ++k) {
    // l^T (i Z E(phi_k)) r
    const Complex d0 = kI * std::polar(1.0, phi[k]) * right[k].a;
    const Complex d1 = -kI * std::polar(1.0, -phi[k]) * right[k].b;
    grad[k] = (left[k].a * d0 + left[k].b * d1).real();
  }
  return (left[n - 1].a * std::polar(1.0, phi[n - 1])).real();
}

std::vector<double> expand(const std::vector<double>& theta, int d) {
  std::vector<double> phi(static_cast<std::size_t>(d + 1));
  for (int j = 0; j <= d; ++j)
    phi[static_cast<std::size_t>(j)] = theta[static_cast<std::size_t>(std::min(j, d - j))];
  return phi;
}

struct Eval {
  double value;
  std::vector<double> grad;  // reduced
};

Eval reduced_eval(const std::vector<double>& theta, int d, const std::vector<double>& nodes,
                  const std::vector<double>& fx) {
  const std::vector<double> phi = expand(theta, d);
  const std::size_t n = phi.size();
  std::vector<double> g(n), gfull(n, 0.0);
  double val = 0.0;
  const double dt = static_cast<double>(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double r = node_value(nodes[j], phi, g.data()) - fx[j];
    val += r * r;
    for (std::size_t k = 0; k < n; ++k) gfull[k] += 2.0 * r * g[k] / dt;
  }
  Eval e{val / dt, std::vector<double>(theta.size(), 0.0)};
  for (int j = 0; j <= d; ++j)
    e.grad[static_cast<std::size_t>(std::min(j, d - j))] += gfull[static_cast<std::size_t>(j)];
  return e;
}

// Node residuals r_j and their Jacobian in the reduced coordinates.
void residual_jacobian(const std::vector<double>& theta, int d, const std::vector<double>& nodes,
                       const std::vector<double>& fx, Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
  const std::vector<double> phi = expand(theta, d);
  const Eigen::Index m = static_cast<Eigen::Index>(nodes.size());
  r.resize(m);
  jac = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(theta.size()));
  std::vector<double> g(phi.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    r(j) = node_value(nodes[static_cast<std::size_t>(j)], phi, g.data()) -
           fx[static_cast<std::size_t>(j)];
    for (int k = 0; k <= d; ++k)
      jac(j, std::min(k, d - k)) += g[static_cast<std::size_t>(k)];
  }
}

// Levenberg-Marquardt on the square system r(theta) = 0, used when the
// quasi-Newton descent stalls in a flat valley (|f| close to 1).
double lm_solve(std::vector<double>& theta, int d, const std::vector<double>& nodes,
                const std::vector<double>& fx, double tol, int max_iterations) {
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  const double dt = static_cast<double>(nodes.size());
  const Eigen::Index n = static_cast<Eigen::Index>(theta.size());
  residual_jacobian(theta, d, nodes, fx, r, jac);
  double val = r.squaredNorm() / dt;
  double mu = 1e-3;
  std::vector<double> trial(theta.size());
  for (int it = 0; it < max_iterations && val >= tol; ++it) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 40 && !accepted; ++tries) {
      Eigen::MatrixXd a = jtj;
      for (Eigen::Index k = 0; k < n; ++k) a(k, k) += mu * std::max(jtj(k, k), 1e-12);
      const Eigen::VectorXd step = a.ldlt().solve(-jtr);
      if (!step.allFinite()) {
        mu *= 10.0;
        continue;
      }
      for (Eigen::Index k = 0; k < n; ++k)
        trial[static_cast<std::size_t>(k)] = theta[static_cast<std::size_t>(k)] + step(k);
      Eigen::VectorXd rt;
      Eigen::MatrixXd jt;
      residual_jacobian(trial, d, nodes, fx, rt, jt);
      const double vt = rt.squaredNorm() / dt;
      if (vt < val) {
        theta = trial;
        r = std::move(rt);
        jac = std::move(jt);
        val = vt;
        mu = std::max(mu / 10.0, 1e-15);
        accepted = true;
      } else {
        mu *= 10.0;
      }
    }
    if (!accepted) break;
  }
  return val;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

const char* convention_name(Convention c) noexcept {
  return c == Convention::Phi ? "phi" : "varphi";
}

Convention convention_from_name(const std::string& name) {
  if (name == "phi") return Convention::Phi;
  if (name == "varphi") return Convention::Varphi;
  fail(ErrorCode::Parse, "unknown phase convention '" + name + "'");
}

std::array<Complex, 4> u_phi(double x, const std::vector<double>& phi) {
  require(!phi.empty(), ErrorCode::InvalidArgument, "phase sequence is empty");
  require(std::abs(x) <= 1.0 + 1e-12, ErrorCode::InvalidArgument, "|x| must be at most 1");
  x = std::clamp(x, -1.0, 1.0);
  const double s = std::sqrt(1.0 - x * x);
  std::array<Complex, 4> m{std::polar(1.0, phi[0]), 0.0, 0.0, std::polar(1.0, -phi[0])};
  for (std::size_t k = 1; k < phi.size(); ++k) {
    // m <- m W E(phi_k)
    const Complex e0 = std::polar(1.0, phi[k]), e1 = std::polar(1.0, -phi[k]);
    std::array<Complex, 4> r;
    r[0] = (m[0] * x + m[1] * kI * s) * e0;
    r[1] = (m[0] * kI * s + m[1] * x) * e1;
    r[2] = (m[2] * x + m[3] * kI * s) * e0;
    r[3] = (m[2] * kI * s + m[3] * x) * e1;
    m = r;
  }
  return m;
}

std::vector<double> objective_nodes(int d) {
  require(d >= 0, ErrorCode::InvalidArgument, "degree must be non-negative");
  const int dt = dtilde(d);
  std::vector<double> x(static_cast<std::size_t>(dt));
  for (int j = 1; j <= dt; ++j)
    x[static_cast<std::size_t>(j - 1)] = std::cos((2.0 * j - 1.0) * kPi / (4.0 * dt));
  return x;
}

double objective(const std::vector<double>& phi, const ChebPoly& f) {
  check_pair(phi, f);
  const std::vector<double> nodes = objective_nodes(static_cast<int>(phi.size()) - 1);
  double acc = 0.0;
  for (double x : nodes) {
    const double r = node_value(x, phi, nullptr) - f(x);
    acc += r * r;
  }
  return acc / static_cast<double>(nodes.size());
}

std::vector<double> gradient(const std::vector<double>& phi, const ChebPoly& f) {
  check_pair(phi, f);
  const std::vector<double> nodes = objective_nodes(static_cast<int>(phi.size()) - 1);
  const std::size_t n = phi.size();
  std::vector<double> g(n), out(n, 0.0);
  const double dt = static_cast<double>(nodes.size());
  for (double x : nodes) {
    const double r = node_value(x, phi, g.data()) - f(x);
    for (std::size_t k = 0; k < n; ++k) out[k] += 2.0 * r * g[k] / dt;
  }
  return out;
}

OptimizeResult optimize_best_effort(const ChebPoly& f, const OptimizeOptions& opts) {
  const int d = f.degree();
  require(d >= 0, ErrorCode::InvalidArgument, "empty target polynomial");
  check_pair(std::vector<double>(static_cast<std::size_t>(d + 1), 0.0), f);
  require(f.grid_max_abs() <= 1.0 + 1e-12, ErrorCode::InvalidArgument,
          "target polynomial exceeds 1 in magnitude on [-1, 1]");
  const std::vector<double> nodes = objective_nodes(d);
  std::vector<double> fx(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) fx[j] = f(nodes[j]);
  const std::size_t dim = static_cast<std::size_t>(dtilde(d));

  std::vector<double> theta(dim, 0.0);
  theta[0] = kPi / 4;
  Eval cur = reduced_eval(theta, d, nodes, fx);
  std::deque<std::pair<std::vector<double>, std::vector<double>>> mem;
  OptimizeResult res;
  int it = 0;
  double checkpoint = cur.value;
  for (; it < opts.max_iterations; ++it) {
    if (cur.value < opts.tol) {
      res.converged = true;
      break;
    }
    if (inf_norm(cur.grad) < opts.grad_tol) break;  // stationary but not a solution
    // slow linear convergence (|f| close to 1): hand over to Newton
    if (it > 0 && it % kStallWindow == 0) {
      if (cur.value > 0.1 * checkpoint) break;
      checkpoint = cur.value;
    }
    // two-loop recursion
    std::vector<double> q = cur.grad;
    std::vector<double> alpha(mem.size());
    for (std::size_t i = mem.size(); i-- > 0;) {
      const auto& [s, y] = mem[i];
      alpha[i] = dot(s, q) / dot(y, s);
      for (std::size_t k = 0; k < dim; ++k) q[k] -= alpha[i] * y[k];
    }
    if (!mem.empty()) {
      const auto& [s, y] = mem.back();
      const double gamma = dot(s, y) / dot(y, y);
      for (double& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < mem.size(); ++i) {
      const auto& [s, y] = mem[i];
      const double beta = dot(y, q) / dot(y, s);
      for (std::size_t k = 0; k < dim; ++k) q[k] += s[k] * (alpha[i] - beta);
    }
    std::vector<double> p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = -q[k];
    double slope = dot(cur.grad, p);
    if (!(slope < 0.0)) {
      mem.clear();
      for (std::size_t k = 0; k < dim; ++k) p[k] = -cur.grad[k];
      slope = dot(cur.grad, p);
    }
    double step = 1.0;
    Eval next{};
    std::vector<double> trial(dim);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t k = 0; k < dim; ++k) trial[k] = theta[k] + step * p[k];
      next = reduced_eval(trial, d, nodes, fx);
      if (next.value <= cur.value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (mem.empty()) break;  // stagnated even along -grad
      mem.clear();
      continue;
    }
    std::vector<double> s(dim), y(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      s[k] = trial[k] - theta[k];
      y[k] = next.grad[k] - cur.grad[k];
    }
    if (dot(s, y) > 1e-300) {
      mem.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(mem.size()) > opts.memory) mem.pop_front();
    }
    theta = trial;
    cur = std::move(next);
  }
  if (!res.converged && cur.value < opts.tol) res.converged = true;
  if (!res.converged) {
    // damped Gauss-Newton from the stall point, the initial guess and a few
    // fixed perturbations of it (local minima exist for some targets)
    std::vector<std::vector<double>> starts{theta, std::vector<double>(dim, 0.0)};
    starts[1][0] = kPi / 4;
    Rng rng(0x5eed);
    for (int r = 0; r < kRestarts; ++r) {
      std::vector<double> v = starts[1];
      for (double& x : v) x += 0.2 * (rng.uniform() - 0.5);
      starts.push_back(std::move(v));
    }
    for (std::vector<double>& cand : starts) {
      lm_solve(cand, d, nodes, fx, opts.tol, 500);
      Eval ce = reduced_eval(cand, d, nodes, fx);
      if (ce.value < cur.value) {
        theta = std::move(cand);
        cur = std::move(ce);
      }
      if (cur.value < opts.tol) break;
    }
    res.converged = cur.value < opts.tol;
  }
  res.iterations = it;
  res.residual = cur.value;
  res.phases.values = expand(theta, d);
  res.phases.convention = Convention::Phi;
  res.phases.symmetric = true;
  res.phases.residual = cur.value;
  res.node_error_bound = std::sqrt(cur.value * static_cast<double>(nodes.size()));
  return res;
}

OptimizeResult optimize(const ChebPoly& f, const OptimizeOptions& opts) {
  OptimizeResult r = optimize_best_effort(f, opts);
  if (!r.converged) {
    std::ostringstream os;
    os << "phase optimization stopped after " << r.iterations
       << " iterations with residual " << r.residual;
    fail(ErrorCode::NonConvergence, os.str());
  }
  return r;
}

PhaseFactors to_varphi(const PhaseFactors& phi) {
  require(phi.convention == Convention::Phi, ErrorCode::InvalidArgument,
          "expected phases in the phi convention");
  require(phi.values.size() >= 2, ErrorCode::InvalidArgument,
          "convention change needs at least two phases");
  PhaseFactors out = phi;
  out.convention = Convention::Varphi;
  for (double& v : out.values) v += kPi / 2;
  out.values.front() = phi.values.front() + kPi / 4;
  out.values.back() = phi.values.back() + kPi / 4;
  return out;
}

PhaseFactors to_phi(const PhaseFactors& varphi) {
  require(varphi.convention == Convention::Varphi, ErrorCode::InvalidArgument,
          "expected phases in the varphi convention");
  require(varphi.values.size() >= 2, ErrorCode::InvalidArgument,
          "convention change needs at least two phases");
  PhaseFactors out = varphi;
  out.convention = Convention::Phi;
  for (double& v : out.values) v -= kPi / 2;
  out.values.front() = varphi.values.front() - kPi / 4;
  out.values.back() = varphi.values.back() - kPi / 4;
  return out;
}

PhaseFactors circuit_phases(const PhaseFactors& phi) {
  require(phi.convention == Convention::Phi, ErrorCode::InvalidArgument,
          "expected phases in the phi convention");
  require(!phi.values.empty(), ErrorCode::InvalidArgument, "phase sequence is empty");
  const int d = phi.degree();
  if (d == 0) {
    PhaseFactors out = phi;
    out.convention = Convention::Varphi;
    return out;
  }
  PhaseFactors v = to_varphi(phi);
  double shift = 0.0;
  if (d % 2 == 0) {
    if ((d / 2) % 2 == 1) shift = kPi / 2;
  } else {
    shift = kPi / 4;
    if (((d + 1) / 2) % 2 == 1) shift += kPi / 2;
  }
  v.values.front() += shift;
  v.values.back() += shift;
  return v;
}

}  // namespace racbem

#include "racbem/chebyshev.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "racbem/error.hpp"

namespace racbem {

namespace {

constexpr double kPi = std::numbers::pi;

double clenshaw(const std::vector<double>& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return (c.empty() ? 0.0 : c[0]) + t * b1 - b2;
}

void zero_off_parity(std::vector<double>& c, Parity p) {
  if (p == Parity::None) return;
  const std::size_t skip = p == Parity::Even ? 1 : 0;
  for (std::size_t k = skip; k < c.size(); k += 2) c[k] = 0.0;
}

// Remez works in s in [-1, 1]. For no parity x is the affine image of s on
// [a, b]; with parity y = x^2 is the affine image of s on [a^2, b^2] and the
// basis is T_k(s) (even) or x T_k(s) (odd).
struct RemezSpace {
  Parity parity;
  double a, b;    // x interval
  double ya, yb;  // y interval (parity only)
  int m;          // number of basis functions minus one

  double x_of(double s) const {
    if (parity == Parity::None) return 0.5 * (a + b) + 0.5 * (b - a) * s;
    const double y = 0.5 * (ya + yb) + 0.5 * (yb - ya) * s;
    return std::sqrt(std::max(0.0, y));
  }
  void basis(double s, double* out) const {
    const double w = parity == Parity::Odd ? x_of(s) : 1.0;
    double t0 = 1.0, t1 = s;
    out[0] = w;
    if (m >= 1) out[1] = w * s;
    for (int k = 2; k <= m; ++k) {
      const double t2 = 2.0 * s * t1 - t0;
      out[k] = w * t2;
      t0 = t1;
      t1 = t2;
    }
  }
  double eval(const Eigen::VectorXd& c, double s) const {
    std::vector<double> cc(c.data(), c.data() + m + 1);
    const double v = clenshaw(cc, s);
    return parity == Parity::Odd ? x_of(s) * v : v;
  }
};

struct Extremum {
  double s;
  double e;
};

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

}  // namespace

const char* parity_name(Parity p) noexcept {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::None: return "none";
  }
  return "none";
}

Parity parity_from_name(const std::string& name) {
  if (name == "even") return Parity::Even;
  if (name == "odd") return Parity::Odd;
  if (name == "none") return Parity::None;
  fail(ErrorCode::Parse, "unknown parity '" + name + "'");
}

double ChebPoly::operator()(double x) const {
  const double t = (hi == 1.0 && lo == -1.0) ? x : (2.0 * x - lo - hi) / (hi - lo);
  return clenshaw(coeffs, t);
}

double ChebPoly::eval(double x) const {
  const double slack = 1e-12 * std::max(1.0, hi - lo);
  require(x >= lo - slack && x <= hi + slack, ErrorCode::InvalidArgument,
          "evaluation point outside the polynomial domain");
  return (*this)(std::clamp(x, lo, hi));
}

double ChebPoly::grid_max_abs() const {
  const int n = std::max(200, 10 * std::max(1, degree()));
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = std::cos(kPi * i / (n - 1));
    m = std::max(m, std::abs(clenshaw(coeffs, t)));
  }
  return m;
}

std::vector<double> cheb_interpolate(const std::function<double(double)>& f, int n,
                                     double lo, double hi) {
  require(n >= 1, ErrorCode::InvalidArgument, "need at least one interpolation node");
  std::vector<double> fx(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double t = std::cos(kPi * (j + 0.5) / n);
    fx[static_cast<std::size_t>(j)] = f(0.5 * (lo + hi) + 0.5 * (hi - lo) * t);
  }
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += fx[static_cast<std::size_t>(j)] * std::cos(kPi * k * (j + 0.5) / n);
    c[static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 2.0) * acc / n;
  }
  return c;
}

const char* target_kind_name(TargetKind k) noexcept {
  switch (k) {
    case TargetKind::Inverse: return "inverse";
    case TargetKind::CosSqrt: return "cos_sqrt";
    case TargetKind::SinSqrt: return "sin_sqrt";
    case TargetKind::LorentzianSqrt: return "lorentzian_sqrt";
    case TargetKind::Gibbs: return "gibbs";
    case TargetKind::GibbsSqrtX: return "gibbs_sqrt_x";
    case TargetKind::OddGibbs: return "odd_gibbs";
    case TargetKind::Custom: return "custom";
  }
  return "custom";
}

double TargetFunction::operator()(double x) const {
  const double v = inner ? (*inner)(x) : x;
  double g = 0.0;
  switch (kind) {
    case TargetKind::Inverse: g = 1.0 / v; break;
    case TargetKind::CosSqrt: g = std::sqrt(std::max(0.0, (std::cos(v * t) + eta) / 2.0)); break;
    case TargetKind::SinSqrt: g = std::sqrt(std::max(0.0, (std::sin(v * t) + eta) / 2.0)); break;
    case TargetKind::LorentzianSqrt: g = eta / std::sqrt((v - energy) * (v - energy) + eta * eta); break;
    case TargetKind::Gibbs: g = std::exp(-beta * v / 2.0); break;
    case TargetKind::GibbsSqrtX: g = std::exp(-beta * v / 2.0) * std::sqrt(std::max(0.0, v)); break;
    case TargetKind::OddGibbs: g = v * std::exp(-beta * v * v / 2.0); break;
    case TargetKind::Custom: g = custom(v); break;
  }
  return g / divisor;
}

std::pair<double, double> TargetFunction::natural_domain() const {
  switch (kind) {
    case TargetKind::Inverse: return {1.0 / kappa, 1.0};
    case TargetKind::Gibbs:
    case TargetKind::GibbsSqrtX: return {0.0, 1.0};
    default: return {-1.0, 1.0};
  }
}

std::string TargetFunction::describe() const {
  std::ostringstream os;
  os << target_kind_name(kind);
  switch (kind) {
    case TargetKind::Inverse: os << "(kappa=" << kappa << ")"; break;
    case TargetKind::CosSqrt:
    case TargetKind::SinSqrt: os << "(t=" << t << ",eta=" << eta << ")"; break;
    case TargetKind::LorentzianSqrt: os << "(eta=" << eta << ",E=" << energy << ")"; break;
    case TargetKind::Gibbs:
    case TargetKind::GibbsSqrtX:
    case TargetKind::OddGibbs: os << "(beta=" << beta << ")"; break;
    case TargetKind::Custom: os << "(" << label << ")"; break;
  }
  if (divisor != 1.0) os << "/" << divisor;
  if (inner) os << " o h(a2=" << inner->a2 << ",a0=" << inner->a0 << ")";
  return os.str();
}

TargetFunction TargetFunction::inverse(double kappa) {
  require(kappa > 1.0, ErrorCode::Infeasible, "inverse target needs kappa > 1");
  TargetFunction f;
  f.kind = TargetKind::Inverse;
  f.kappa = kappa;
  return f;
}

TargetFunction TargetFunction::cos_sqrt(double t, double eta) {
  require(eta >= 1.0, ErrorCode::InvalidArgument, "eta must be at least 1");
  TargetFunction f;
  f.kind = TargetKind::CosSqrt;
  f.t = t;
  f.eta = eta;
  return f;
}

TargetFunction TargetFunction::sin_sqrt(double t, double eta) {
  require(eta >= 1.0, ErrorCode::InvalidArgument, "eta must be at least 1");
  TargetFunction f;
  f.kind = TargetKind::SinSqrt;
  f.t = t;
  f.eta = eta;
  return f;
}

TargetFunction TargetFunction::lorentzian_sqrt(double eta, double energy) {
  require(eta > 0.0, ErrorCode::InvalidArgument, "eta must be positive");
  TargetFunction f;
  f.kind = TargetKind::LorentzianSqrt;
  f.eta = eta;
  f.energy = energy;
  return f;
}

TargetFunction TargetFunction::gibbs(double beta) {
  require(beta >= 0.0, ErrorCode::InvalidArgument, "beta must be non-negative");
  TargetFunction f;
  f.kind = TargetKind::Gibbs;
  f.beta = beta;
  return f;
}

TargetFunction TargetFunction::gibbs_sqrt_x(double beta) {
  TargetFunction f = gibbs(beta);
  f.kind = TargetKind::GibbsSqrtX;
  return f;
}

TargetFunction TargetFunction::odd_gibbs(double beta) {
  TargetFunction f = gibbs(beta);
  f.kind = TargetKind::OddGibbs;
  return f;
}

TargetFunction TargetFunction::from(std::function<double(double)> fn, std::string label) {
  TargetFunction f;
  f.kind = TargetKind::Custom;
  f.custom = std::move(fn);
  f.label = std::move(label);
  return f;
}

TargetFunction TargetFunction::scaled(double by) const {
  require(by > 0.0 && std::isfinite(by), ErrorCode::InvalidArgument,
          "scale must be positive");
  TargetFunction f = *this;
  f.divisor *= by;
  return f;
}

TargetFunction TargetFunction::composed(const QuadraticH& h) const {
  require(!inner, ErrorCode::InvalidArgument, "target is already composed with h");
  TargetFunction f = *this;
  f.inner = h;
  return f;
}

RemezResult remez(const TargetFunction& t, int degree, Parity parity, double a, double b,
                  const RemezOptions& opts) {
  require(degree >= 0, ErrorCode::InvalidArgument, "degree must be non-negative");
  require(a < b && a >= -1.0 - 1e-15 && b <= 1.0 + 1e-15, ErrorCode::InvalidArgument,
          "interval must satisfy -1 <= a < b <= 1");
  RemezSpace sp{parity, a, b, 0, 0, degree};
  if (parity != Parity::None) {
    require((parity == Parity::Even) == (degree % 2 == 0), ErrorCode::InvalidArgument,
            "degree parity does not match the requested parity");
    require(a >= 0.0 || std::abs(a + b) < 1e-15, ErrorCode::InvalidArgument,
            "parity-constrained interval must be [a,b] with a >= 0 or symmetric");
    const double xa = a >= 0.0 ? a : 0.0;
    sp.a = xa;
    sp.ya = xa * xa;
    sp.yb = b * b;
    sp.m = parity == Parity::Even ? degree / 2 : (degree - 1) / 2;
  }
  const int m = sp.m;
  const int npts = m + 2;
  const int grid = opts.grid > 0 ? opts.grid : std::max(2001, 60 * npts);

  auto target_at = [&](double s) { return t(sp.x_of(s)); };
  const bool odd_at_zero = parity == Parity::Odd && sp.ya == 0.0;

  std::vector<double> ref(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i)
    ref[static_cast<std::size_t>(i)] =
        odd_at_zero ? -std::cos(kPi * (i + 0.5) / npts) : -std::cos(kPi * i / (npts - 1 > 0 ? npts - 1 : 1));
  if (npts == 1) ref[0] = 0.0;

  std::vector<double> gs(static_cast<std::size_t>(grid));
  std::vector<double> gt(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    gs[static_cast<std::size_t>(i)] = -std::cos(kPi * i / (grid - 1));
    gt[static_cast<std::size_t>(i)] = target_at(gs[static_cast<std::size_t>(i)]);
  }
  double tmax = 0.0;
  for (double v : gt) tmax = std::max(tmax, std::abs(v));
  const double abs_floor = 1e-14 * std::max(1.0, tmax);

  Eigen::VectorXd coef(m + 1);
  std::vector<double> bas(static_cast<std::size_t>(m + 1));
  RemezResult res;
  double max_err = 0.0;
  std::vector<Extremum> chosen;
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    Eigen::MatrixXd sys(npts, npts);
    Eigen::VectorXd rhs(npts);
    for (int i = 0; i < npts; ++i) {
      sp.basis(ref[static_cast<std::size_t>(i)], bas.data());
      for (int k = 0; k <= m; ++k) sys(i, k) = bas[static_cast<std::size_t>(k)];
      sys(i, m + 1) = (i % 2 == 0) ? 1.0 : -1.0;
      rhs(i) = target_at(ref[static_cast<std::size_t>(i)]);
    }
    const Eigen::VectorXd sol = sys.colPivHouseholderQr().solve(rhs);
    require(sol.allFinite(), ErrorCode::NonConvergence, "Remez linear system is singular");
    coef = sol.head(m + 1);
    const double level = std::abs(sol(m + 1));

    auto err = [&](double s) { return sp.eval(coef, s) - target_at(s); };
    std::vector<double> ge(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i)
      ge[static_cast<std::size_t>(i)] =
          sp.eval(coef, gs[static_cast<std::size_t>(i)]) - gt[static_cast<std::size_t>(i)];

    std::vector<Extremum> ext;
    for (int i = 0; i < grid; ++i) {
      const double ei = std::abs(ge[static_cast<std::size_t>(i)]);
      const bool left = i == 0 || ei >= std::abs(ge[static_cast<std::size_t>(i - 1)]);
      const bool right = i == grid - 1 || ei >= std::abs(ge[static_cast<std::size_t>(i + 1)]);
      if (!(left && right) || ei == 0.0) continue;
      double s = gs[static_cast<std::size_t>(i)];
      if (i > 0 && i < grid - 1) {
        const double lo = gs[static_cast<std::size_t>(i - 1)], hi = gs[static_cast<std::size_t>(i + 1)];
        const double sr = golden_max([&](double u) { return std::abs(err(u)); }, lo, hi);
        if (std::abs(err(sr)) > ei) s = sr;
      }
      ext.push_back({s, err(s)});
    }
    max_err = 0.0;
    for (const Extremum& e : ext) max_err = std::max(max_err, std::abs(e.e));

    if (max_err <= abs_floor) {
      res.iterations = iter;
      chosen.clear();
      for (double s : ref) chosen.push_back({s, err(s)});
      break;
    }

    // keep points at or above the levelled error, merge equal-sign runs
    std::vector<Extremum> kept;
    for (const Extremum& e : ext) {
      if (std::abs(e.e) < level * (1.0 - 1e-9)) continue;
      if (!kept.empty() && std::signbit(kept.back().e) == std::signbit(e.e)) {
        if (std::abs(e.e) > std::abs(kept.back().e)) kept.back() = e;
      } else {
        kept.push_back(e);
      }
    }
    while (static_cast<int>(kept.size()) > npts) {
      if (std::abs(kept.front().e) < std::abs(kept.back().e))
        kept.erase(kept.begin());
      else
        kept.pop_back();
    }
    if (static_cast<int>(kept.size()) == npts) {
      chosen = kept;
    } else {
      // single-point exchange toward the global maximum
      Extremum best{0.0, 0.0};
      for (const Extremum& e : ext)
        if (std::abs(e.e) > std::abs(best.e)) best = e;
      chosen.clear();
      for (double s : ref) chosen.push_back({s, err(s)});
      auto same = [](double u, double v) { return std::signbit(u) == std::signbit(v); };
      if (best.s < chosen.front().s) {
        if (same(best.e, chosen.front().e)) {
          chosen.front() = best;
        } else {
          chosen.pop_back();
          chosen.insert(chosen.begin(), best);
        }
      } else if (best.s > chosen.back().s) {
        if (same(best.e, chosen.back().e)) {
          chosen.back() = best;
        } else {
          chosen.erase(chosen.begin());
          chosen.push_back(best);
        }
      } else {
        for (std::size_t j = 0; j + 1 < chosen.size(); ++j) {
          if (best.s >= chosen[j].s && best.s <= chosen[j + 1].s) {
            if (same(best.e, chosen[j].e))
              chosen[j] = best;
            else
              chosen[j + 1] = best;
            break;
          }
        }
      }
    }
    double emin = std::abs(chosen.front().e), emax = emin;
    for (const Extremum& e : chosen) {
      emin = std::min(emin, std::abs(e.e));
      emax = std::max(emax, std::abs(e.e));
    }
    for (int i = 0; i < npts; ++i) ref[static_cast<std::size_t>(i)] = chosen[static_cast<std::size_t>(i)].s;
    res.iterations = iter;
    const bool flat = emax - emin <= opts.rel_tol * emax || emax - emin <= abs_floor;
    if (flat && std::abs(emax - max_err) <= opts.rel_tol * max_err + abs_floor) break;
    if (iter == opts.max_iterations)
      fail(ErrorCode::NonConvergence,
           "Remez did not converge in " + std::to_string(opts.max_iterations) +
               " iterations for " + t.describe());
  }

  res.error = max_err;
  for (const Extremum& e : chosen) res.reference.push_back(sp.x_of(e.s));
  std::sort(res.reference.begin(), res.reference.end());

  if (parity == Parity::None) {
    res.poly.coeffs.assign(coef.data(), coef.data() + m + 1);
    res.poly.lo = a;
    res.poly.hi = b;
  } else {
    const double ya = sp.ya, yb = sp.yb;
    auto p = [&](double x) {
      const double s = (2.0 * x * x - ya - yb) / (yb - ya);
      std::vector<double> cc(coef.data(), coef.data() + m + 1);
      const double v = clenshaw(cc, s);
      return parity == Parity::Odd ? x * v : v;
    };
    res.poly.coeffs = cheb_interpolate(p, degree + 1);
    zero_off_parity(res.poly.coeffs, parity);
  }
  res.poly.parity = parity;
  res.poly.scale = t.divisor;
  return res;
}

ChebPoly cheb_project(const TargetFunction& t, int degree, Parity parity, double lo,
                      double hi) {
  require(degree >= 0, ErrorCode::InvalidArgument, "degree must be non-negative");
  const int n = std::max(2 * (degree + 1), 256);
  std::vector<double> c = cheb_interpolate([&](double x) { return t(x); }, n, lo, hi);
  c.resize(static_cast<std::size_t>(degree + 1));
  zero_off_parity(c, parity);
  ChebPoly p;
  p.coeffs = std::move(c);
  p.parity = parity;
  p.scale = t.divisor;
  p.lo = lo;
  p.hi = hi;
  return p;
}

ChebPoly compose_quadratic(const ChebPoly& g, const QuadraticH& q) {
  const auto [rlo, rhi] = q.range();
  const double slack = 1e-12 * std::max(1.0, g.hi - g.lo);
  require(rlo >= g.lo - slack && rhi <= g.hi + slack, ErrorCode::InvalidArgument,
          "range of h leaves the domain of g");
  const int deg = 2 * std::max(0, g.degree());
  ChebPoly f;
  f.coeffs = cheb_interpolate(
      [&](double x) { return g(std::clamp(q(x), g.lo, g.hi)); }, deg + 1);
  zero_off_parity(f.coeffs, Parity::Even);
  f.parity = Parity::Even;
  f.scale = g.scale;
  return f;
}

ScaledTarget apply_scaling(const TargetFunction& t, double a, double b, double margin,
                           std::optional<double> override_scale) {
  require(a <= b, ErrorCode::InvalidArgument, "scaling interval is reversed");
  require(margin >= 0.0, ErrorCode::InvalidArgument, "margin must be non-negative");
  ScaledTarget st;
  if (override_scale) {
    require(*override_scale > 0.0, ErrorCode::InvalidArgument, "scale must be positive");
    st.scale = *override_scale;
  } else {
    const int n = 20001;
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = a + (b - a) * i / (n - 1);
      const double v = std::abs(t(x));
      require(std::isfinite(v), ErrorCode::InvalidArgument,
              "target is unbounded on the scaling interval");
      m = std::max(m, v);
    }
    require(m > 0.0, ErrorCode::InvalidArgument, "target vanishes on the scaling interval");
    st.scale = m * (1.0 + margin);
  }
  st.target = t.scaled(st.scale);
  return st;
}

double max_error(const ChebPoly& p, const TargetFunction& t, double a, double b, int points) {
  double m = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = 0.5 * (a + b) - 0.5 * (b - a) * std::cos(kPi * i / (points - 1));
    m = std::max(m, std::abs(p(x) - t(x)));
  }
  return m;
}

}  // namespace racbem

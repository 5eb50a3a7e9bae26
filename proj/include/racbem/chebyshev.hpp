#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "racbem/block_encoding.hpp"

namespace racbem {

enum class Parity { Even, Odd, None };

const char* parity_name(Parity p) noexcept;
Parity parity_from_name(const std::string& name);

/// Polynomial sum_k c_k T_k(t) with t the affine image of x in [lo, hi] onto
/// [-1, 1]. Coefficients already include the division by `scale`.
struct ChebPoly {
  std::vector<double> coeffs;
  Parity parity = Parity::None;
  double scale = 1.0;
  double lo = -1.0;
  double hi = 1.0;

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  /// Clenshaw recurrence; no domain check.
  double operator()(double x) const;
  /// Throws InvalidArgument outside [lo, hi] (1e-12 slack).
  double eval(double x) const;
  /// max |p| over a Chebyshev grid of max(10 deg, 200) points on [lo, hi].
  double grid_max_abs() const;
};

/// Samples f at `n` first-kind Chebyshev nodes of [lo, hi] and returns the
/// interpolating coefficients (degree n - 1).
std::vector<double> cheb_interpolate(const std::function<double(double)>& f, int n,
                                     double lo = -1.0, double hi = 1.0);

enum class TargetKind {
  Inverse,
  CosSqrt,
  SinSqrt,
  LorentzianSqrt,
  Gibbs,
  GibbsSqrtX,
  OddGibbs,
  Custom,
};

const char* target_kind_name(TargetKind k) noexcept;

/// Closed-form target g, optionally divided by `divisor` and precomposed with
/// a quadratic h (value g(h(x)) / divisor).
struct TargetFunction {
  TargetKind kind = TargetKind::Custom;
  double kappa = 1.0;
  double t = 0.0;
  double eta = 1.0;
  double energy = 0.0;
  double beta = 0.0;
  double divisor = 1.0;
  std::optional<QuadraticH> inner;
  std::function<double(double)> custom;
  std::string label;

  double operator()(double x) const;
  /// Domain of the raw g (before composing with h).
  std::pair<double, double> natural_domain() const;
  std::string describe() const;

  /// 1/x on [1/kappa, 1].
  static TargetFunction inverse(double kappa);
  /// sqrt((cos(x t) + eta) / 2).
  static TargetFunction cos_sqrt(double t, double eta);
  /// sqrt((sin(x t) + eta) / 2).
  static TargetFunction sin_sqrt(double t, double eta);
  /// sqrt(eta^2 / ((x - E)^2 + eta^2)).
  static TargetFunction lorentzian_sqrt(double eta, double energy);
  /// e^{-beta x / 2}.
  static TargetFunction gibbs(double beta);
  /// e^{-beta x / 2} sqrt(x).
  static TargetFunction gibbs_sqrt_x(double beta);
  /// x e^{-beta x^2 / 2}.
  static TargetFunction odd_gibbs(double beta);
  static TargetFunction from(std::function<double(double)> f, std::string label = "custom");

  TargetFunction scaled(double by) const;
  TargetFunction composed(const QuadraticH& h) const;
};

struct RemezOptions {
  int max_iterations = 100;
  double rel_tol = 1e-10;
  int grid = 0;  // 0: automatic
};

struct RemezResult {
  ChebPoly poly;
  double error = 0.0;  // max |p - t| on a dense grid of [a, b]
  int iterations = 0;
  std::vector<double> reference;  // final alternation points
};

/// Minimax approximation of degree d on [a, b]. With Even/Odd parity the
/// interval must satisfy 0 <= a (or a == -b) and the result lives on [-1, 1];
/// with no parity the result lives on [a, b].
RemezResult remez(const TargetFunction& t, int degree, Parity parity, double a, double b,
                  const RemezOptions& opts = {});

/// Chebyshev interpolation at max(2(d+1), 256) nodes truncated to degree d;
/// off-parity coefficients zeroed.
ChebPoly cheb_project(const TargetFunction& t, int degree, Parity parity = Parity::None,
                      double lo = -1.0, double hi = 1.0);

/// f(x) = g(a2 x^2 + a0) as an even polynomial of degree 2 deg g on [-1, 1].
ChebPoly compose_quadratic(const ChebPoly& g, const QuadraticH& q);

struct ScaledTarget {
  TargetFunction target;  // divided by scale
  double scale = 1.0;
};

/// scale = max |t| on a grid of [a, b] times (1 + margin), unless an explicit
/// override is given.
ScaledTarget apply_scaling(const TargetFunction& t, double a, double b, double margin = 1e-2,
                           std::optional<double> override_scale = std::nullopt);

/// max |p(x) - t(x)| over `points` Chebyshev-distributed points of [a, b].
double max_error(const ChebPoly& p, const TargetFunction& t, double a, double b,
                 int points = 4001);

}  // namespace racbem

#include "racbem/tasks.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "racbem/error.hpp"
#include "racbem/oracle.hpp"
#include "racbem/parallel.hpp"
#include "racbem/presets.hpp"
#include "racbem/random_circuit.hpp"

namespace racbem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerate = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative(double p, double exact) {
  const double d = std::abs(p - exact);
  return exact != 0.0 ? d / std::abs(exact) : d;
}

double poly_max(const ChebPoly& p, double lo, double hi) {
  const int n = 4001;
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(kPi * i / (n - 1));
    m = std::max(m, std::abs(p(x)));
  }
  return m;
}

struct Fit {
  ChebPoly poly;  // already divided by scale
  double error = 0.0;  // scaled units
  double scale = 1.0;
};

void apply_fit_scale(Fit& fit, double pmax, double lo, double hi, const PlanOptions& opts) {
  require(opts.margin >= 0.0, ErrorCode::InvalidArgument, "margin must be non-negative");
  if (opts.scale) {
    require(*opts.scale > 0.0, ErrorCode::InvalidArgument, "scale must be positive");
    fit.scale = *opts.scale;
  } else {
    require(pmax > 0.0, ErrorCode::InvalidArgument, "target polynomial vanishes");
    fit.scale = pmax * (1.0 + opts.margin);
  }
  require(pmax / fit.scale <= 1.0 + 1e-12, ErrorCode::Infeasible,
          "scaled polynomial exceeds 1 on [" + std::to_string(lo) + ", " + std::to_string(hi) +
              "]; the scale must be at least " + std::to_string(pmax));
  for (double& c : fit.poly.coeffs) c /= fit.scale;
  fit.poly.scale = fit.scale;
  fit.error /= fit.scale;
}

Fit fit_even(const TargetFunction& g, const QuadraticH& h, int degree, const PlanOptions& opts) {
  require(degree >= 0 && degree % 2 == 0, ErrorCode::InvalidArgument,
          "even plans need an even degree, got " + std::to_string(degree));
  const auto [lo, hi] = h.range();
  Fit fit;
  if (hi - lo < 1e-12) {
    // h is constant: a constant polynomial is exact
    const double c = g(0.5 * (lo + hi));
    fit.poly.coeffs = {c};
    fit.poly.lo = lo - 1e-9;
    fit.poly.hi = hi + 1e-9;
    fit.error = std::max(std::abs(g(lo) - c), std::abs(g(hi) - c));
  } else {
    RemezResult r = remez(g, degree / 2, Parity::None, lo, hi);
    fit.poly = std::move(r.poly);
    fit.error = r.error;
  }
  apply_fit_scale(fit, poly_max(fit.poly, lo, hi), lo, hi, opts);
  return fit;
}

Fit fit_odd(const TargetFunction& t, int degree, const PlanOptions& opts) {
  require(degree >= 1 && degree % 2 == 1, ErrorCode::InvalidArgument,
          "odd plans need an odd degree, got " + std::to_string(degree));
  RemezResult r = remez(t, degree, Parity::Odd, 0.0, 1.0);
  Fit fit;
  fit.poly = std::move(r.poly);
  fit.error = r.error;
  apply_fit_scale(fit, poly_max(fit.poly, 0.0, 1.0), 0.0, 1.0, opts);
  return fit;
}

void solve_phases(QsvtPlan& p) {
  const OptimizeResult r = optimize(p.f);
  p.phi = r.phases;
  p.varphi = circuit_phases(r.phases);
  p.phase_residual = r.residual;
}

QsvtPlan finish_even(const TargetFunction& g, const QuadraticH& h, int degree, Fit fit) {
  QsvtPlan p;
  p.target = g;
  p.h = h;
  p.degree = degree;
  p.scale = fit.scale;
  p.poly_error = fit.error;
  p.f = compose_quadratic(fit.poly, h);
  p.g = std::move(fit.poly);
  solve_phases(p);
  return p;
}

QsvtPlan finish_odd(const TargetFunction& t, int degree, Fit fit) {
  QsvtPlan p;
  p.target = t;
  p.h = QuadraticH::canonical();
  p.odd = true;
  p.degree = degree;
  p.scale = fit.scale;
  p.poly_error = fit.error;
  p.f = std::move(fit.poly);
  solve_phases(p);
  return p;
}

Json h_json(const QuadraticH& h) {
  return Json{{"a2", h.a2}, {"a0", h.a0}, {"phi0", h.phi0}, {"phi1", h.phi1}};
}

Json instance_params(const Instance& inst) {
  return Json{{"n_sys", inst.ua.n_sys},
              {"depth", inst.ua.circuit.depth()},
              {"p_cnot", inst.config.p_cnot}};
}

void add_sampling_params(Json& j, const SamplingConfig& s) {
  j["mode"] = s.exact ? "exact" : "sampled";
  if (!s.exact) {
    j["shots"] = s.shots;
    j["noise"] = s.noise.has_value();
    if (s.noise) j["sigma"] = s.sigma;
  }
}

void check_sampling(const SamplingConfig& s) {
  if (s.exact) return;
  require(s.seed.has_value(), ErrorCode::InvalidArgument, "sampled mode needs a seed");
  require(s.shots >= 1, ErrorCode::InvalidArgument, "sampled mode needs at least one shot");
  require(s.sigma >= 0.0 && s.sigma <= 1.0, ErrorCode::InvalidArgument,
          "sigma must lie in [0,1]");
}

BenchmarkReport base_report(const std::string& task, const Instance& inst,
                            const SamplingConfig& s) {
  BenchmarkReport r;
  r.task = task;
  r.instance_seed = inst.config.instance_seed;
  if (!s.exact) r.seed = s.seed;
  r.params = instance_params(inst);
  add_sampling_params(r.params, s);
  return r;
}

std::string csv_escape(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double norm2_after(const CMatrix& hfun, const CVector& psi) { return (hfun * psi).squaredNorm(); }

CMatrix canonical_h(const Instance& inst) {
  const CMatrix a = extract_block(inst.ua);
  return a.adjoint() * a;
}

CountsHistogram draw(const QuantumCircuit& c, std::uint64_t shots, std::span<const int> meas,
                     const StateVector& input, const SamplingConfig& s, const Rng& rng) {
  if (s.noise) return sample_noisy_counts(c, scale(*s.noise, s.sigma), shots, meas, rng, &input);
  return sample_counts(c, shots, meas, rng, &input);
}

double success_with(const QuantumCircuit& c, int m, const StateVector& input,
                    const SamplingConfig& s, const Rng& rng) {
  if (s.exact) return success_probability_exact(c, m, input);
  std::vector<int> meas(static_cast<std::size_t>(m));
  for (int q = 0; q < m; ++q) meas[static_cast<std::size_t>(q)] = q;
  return draw(c, s.shots, meas, input, s, rng).frequency(std::string(static_cast<std::size_t>(m), '0'));
}

}  // namespace

Instance make_instance(const InstanceConfig& cfg) {
  Instance inst;
  inst.config = cfg;
  inst.ua = racbem_from_circuit(generate(racbem_config(cfg.n_sys, cfg.instance_seed, cfg.p_cnot,
                                                       cfg.depth)));
  return inst;
}

Instance identity_instance(int n_sys) {
  require(n_sys >= 1, ErrorCode::InvalidArgument, "n_sys must be at least 1");
  Instance inst;
  inst.config.n_sys = n_sys;
  inst.config.instance_seed = 0;
  inst.ua = racbem_from_circuit(QuantumCircuit(n_sys + 1, "identity"));
  return inst;
}

NoiseModel default_noise(int n_total, std::uint64_t seed) {
  Rng rng(seed);
  return synth_model(device_coupling(n_total), 1e-3, 1e-2, 2e-2, rng);
}

QsvtPlan plan_even(const TargetFunction& g, const QuadraticH& h, int degree,
                   const PlanOptions& opts) {
  return finish_even(g, h, degree, fit_even(g, h, degree, opts));
}

QsvtPlan plan_odd(const TargetFunction& t, int degree, const PlanOptions& opts) {
  return finish_odd(t, degree, fit_odd(t, degree, opts));
}

QsvtPlan plan_even_to_tolerance(const TargetFunction& g, const QuadraticH& h, double tol,
                                int max_degree, const PlanOptions& opts) {
  require(tol > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (int d = 0; d <= max_degree; d += 2) {
    Fit fit = fit_even(g, h, d, opts);
    if (fit.error <= tol) return finish_even(g, h, d, std::move(fit));
    best = std::min(best, fit.error);
  }
  fail(ErrorCode::NonConvergence, "no even degree up to " + std::to_string(max_degree) +
                                      " reaches error " + num(tol) + " (best " + num(best) + ")");
}

QsvtPlan plan_odd_to_tolerance(const TargetFunction& t, double tol, int max_degree,
                               const PlanOptions& opts) {
  require(tol > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= max_degree; d += 2) {
    Fit fit = fit_odd(t, d, opts);
    if (fit.error <= tol) return finish_odd(t, d, std::move(fit));
    best = std::min(best, fit.error);
  }
  fail(ErrorCode::NonConvergence, "no odd degree up to " + std::to_string(max_degree) +
                                      " reaches error " + num(tol) + " (best " + num(best) + ")");
}

Json to_json(const QsvtPlan& p) {
  Json j{{"target", p.target.describe()},
         {"odd", p.odd},
         {"degree", p.degree},
         {"scale", p.scale},
         {"poly_error", p.poly_error},
         {"phase_residual", p.phase_residual}};
  if (!p.odd) {
    j["h"] = h_json(p.h);
    j["g"] = to_json(p.g);
  }
  j["f"] = to_json(p.f);
  j["phi"] = to_json(p.phi);
  j["varphi"] = to_json(p.varphi);
  return j;
}

Json BenchmarkReport::to_json() const {
  return Json{{"task", task},
              {"instance_seed", instance_seed},
              {"seed", seed ? Json(*seed) : Json(nullptr)},
              {"params", params},
              {"p_measured", p_measured},
              {"p_exact", p_exact},
              {"relative_error", relative_error},
              {"gate_count", gate_count},
              {"gate_budget", gate_budget},
              {"wall_time_s", wall_time_s},
              {"extra", extra}};
}

std::string csv_header() {
  return "task,instance_seed,seed,p_measured,p_exact,relative_error,gate_count,gate_budget,"
         "wall_time_s,params,extra";
}

std::string csv_row(const BenchmarkReport& r) {
  std::ostringstream os;
  os << csv_escape(r.task) << ',' << r.instance_seed << ',' << (r.seed ? std::to_string(*r.seed) : "")
     << ',' << num(r.p_measured) << ',' << num(r.p_exact) << ',' << num(r.relative_error) << ','
     << r.gate_count << ',' << r.gate_budget << ',' << num(r.wall_time_s) << ','
     << csv_escape(r.params.dump()) << ',' << csv_escape(r.extra.dump());
  return os.str();
}

std::string to_jsonl(const std::vector<BenchmarkReport>& rs) {
  std::string out;
  for (const auto& r : rs) out += r.to_json().dump() + "\n";
  return out;
}

std::string to_csv(const std::vector<BenchmarkReport>& rs) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rs) out += csv_row(r) + "\n";
  return out;
}

double measure_success(const QuantumCircuit& c, int m, const StateVector& input,
                       const SamplingConfig& s, std::uint64_t stream) {
  check_sampling(s);
  const Rng rng = s.exact ? Rng(0) : Rng(*s.seed).split(stream);
  return success_with(c, m, input, s, rng);
}

BenchmarkReport racbem_benchmark(const Instance& inst, const SamplingConfig& s) {
  check_sampling(s);
  const auto t0 = Clock::now();
  BenchmarkReport r = base_report("racbem-bench", inst, s);
  const CMatrix a = extract_block(inst.ua);
  r.p_exact = a.col(0).squaredNorm();
  r.p_measured = measure_success(inst.ua.circuit, 1, StateVector(inst.ua.circuit.n_qubits()), s, 0);
  r.relative_error = relative(r.p_measured, r.p_exact);
  r.gate_count = inst.ua.circuit.gate_total();
  r.gate_budget = inst.ua.circuit.depth() * static_cast<std::size_t>(inst.ua.circuit.n_qubits());
  if (!s.exact) {
    const double shots = static_cast<double>(s.shots);
    r.extra["mc_sigma"] = std::sqrt(r.p_exact * (1.0 - r.p_exact) / shots);
  }
  r.wall_time_s = seconds_since(t0);
  return r;
}

QsvtPlan linpack_plan(const LinpackConfig& cfg) {
  require(std::isfinite(cfg.kappa) && cfg.kappa > 1.0, ErrorCode::Infeasible,
          "kappa must exceed 1 (h is constant at kappa = 1)");
  return plan_even(TargetFunction::inverse(cfg.kappa), QuadraticH::condition(cfg.kappa),
                   cfg.degree, cfg.plan);
}

BenchmarkReport linpack_run(const Instance& inst, const LinpackConfig& cfg,
                            const SamplingConfig& s) {
  return linpack_run(inst, cfg, linpack_plan(cfg), s);
}

BenchmarkReport linpack_run(const Instance& inst, const LinpackConfig& cfg, const QsvtPlan& plan,
                            const SamplingConfig& s) {
  check_sampling(s);
  const auto t0 = Clock::now();
  BenchmarkReport r = base_report("linpack", inst, s);
  const double kappa = cfg.kappa;
  const double alpha = plan.scale;
  r.params["kappa"] = kappa;
  r.params["d"] = plan.degree;

  const QsvtCircuit qc = build_qsvt(inst.ua, plan.varphi);
  r.p_measured = measure_success(qc.be.circuit, 2, StateVector(qc.be.circuit.n_qubits()), s, 0);

  const CMatrix a = extract_block(inst.ua);
  const Eigen::Index dim = a.rows();
  const CMatrix ham = plan.h.a2 * (a.adjoint() * a) + plan.h.a0 * CMatrix::Identity(dim, dim);
  const CMatrix inv = hermitian_function(ham, [](double x) { return 1.0 / x; });
  r.p_exact = norm2_after(inv, basis_vector(dim, 0)) / (alpha * alpha);
  r.relative_error = relative(r.p_measured, r.p_exact);
  r.gate_count = qc.be.circuit.gate_total();
  r.gate_budget = qc.gate_budget;

  // errors in units of the normalized target 1/(kappa x) <= 1
  const double eps_scaled = plan.poly_error;
  const double eps = alpha * eps_scaled / kappa;
  const double ke = kappa * eps;
  const double bound = ke < 1.0 ? 2.0 * ke / (1.0 - ke) : std::numeric_limits<double>::infinity();
  const double norm = (alpha / kappa) * (alpha / kappa);
  const double lower = 1.0 / kappa > eps ? (1.0 / kappa - eps) * (1.0 / kappa - eps) : 0.0;
  const double composite = max_error(
      plan.f, plan.target.composed(plan.h).scaled(alpha), -1.0, 1.0);
  r.extra = Json{{"scale", alpha},
                 {"epsilon_scaled", eps_scaled},
                 {"epsilon_composite", composite},
                 {"epsilon", eps},
                 {"error_bound", bound},
                 {"within_bound", r.relative_error <= bound},
                 {"p_exact_normalized", r.p_exact * norm},
                 {"p_measured_normalized", r.p_measured * norm},
                 {"lower_bound", lower},
                 {"lower_bound_holds", r.p_exact * norm >= lower},
                 {"h", h_json(plan.h)},
                 {"kappa_bound", condition_bound(plan.h)},
                 {"phase_residual", plan.phase_residual}};
  if (!s.exact)
    r.extra["mc_sigma"] = std::sqrt(r.p_exact * (1.0 - r.p_exact) / static_cast<double>(s.shots));
  r.wall_time_s = seconds_since(t0);
  return r;
}

TimeSeriesConfig default_time_series(bool long_circuits) {
  TimeSeriesConfig cfg;
  const auto& rows = long_circuits ? presets::kTimeSeriesLong : presets::kTimeSeries;
  for (const auto& row : rows) {
    SeriesPoint p;
    p.t = row.t;
    p.eta_re = row.re.eta;
    p.degree_re = row.re.length - 1;
    p.scale_re = row.re.scale;
    p.eta_im = row.im.eta;
    p.degree_im = row.im.length - 1;
    p.scale_im = row.im.scale;
    cfg.points.push_back(p);
  }
  return cfg;
}

TimeSeriesResult time_series_run(const Instance& inst, const TimeSeriesConfig& cfg,
                                  const SamplingConfig& s) {
  check_sampling(s);
  require(!cfg.points.empty(), ErrorCode::InvalidArgument, "time grid is empty");
  const CMatrix ham = canonical_h(inst);
  const CVector psi = basis_vector(ham.rows(), 0);
  const QuadraticH h = QuadraticH::canonical();
  const std::size_t n = cfg.points.size();

  std::vector<BenchmarkReport> reports(2 * n);
  std::vector<double> s_part(2 * n), s_part_exact(2 * n);
  parallel_for(2 * n, [&](std::size_t k) {
    const auto t0 = Clock::now();
    const SeriesPoint& pt = cfg.points[k / 2];
    const bool re = k % 2 == 0;
    const double eta = re ? pt.eta_re : pt.eta_im;
    const TargetFunction g =
        re ? TargetFunction::cos_sqrt(pt.t, eta) : TargetFunction::sin_sqrt(pt.t, eta);
    PlanOptions po;
    po.scale = re ? pt.scale_re : pt.scale_im;
    po.margin = cfg.margin;
    const QsvtPlan plan = plan_even(g, h, re ? pt.degree_re : pt.degree_im, po);
    const QsvtCircuit qc = build_qsvt(inst.ua, plan.varphi);

    BenchmarkReport& r = reports[k];
    r = base_report("timeseries", inst, s);
    r.params["t"] = pt.t;
    r.params["part"] = re ? "re" : "im";
    r.params["eta"] = eta;
    r.params["d"] = plan.degree;
    r.p_measured = measure_success(qc.be.circuit, 2, StateVector(qc.be.circuit.n_qubits()), s, k);
    const CMatrix gh = hermitian_function(ham, [&](double x) { return g(x) / plan.scale; });
    r.p_exact = norm2_after(gh, psi);
    r.relative_error = relative(r.p_measured, r.p_exact);
    r.gate_count = qc.be.circuit.gate_total();
    r.gate_budget = qc.gate_budget;

    const std::complex<double> ex = exact_time_series(ham, psi, pt.t);
    s_part[k] = 2.0 * plan.scale * plan.scale * r.p_measured - eta;
    s_part_exact[k] = re ? ex.real() : ex.imag();
    r.extra = Json{{"s", s_part[k]},
                   {"s_exact", s_part_exact[k]},
                   {"abs_error", std::abs(s_part[k] - s_part_exact[k])},
                   {"scale", plan.scale},
                   {"poly_error", plan.poly_error},
                   {"phase_residual", plan.phase_residual}};
    r.wall_time_s = seconds_since(t0);
  });

  TimeSeriesResult out;
  out.reports = std::move(reports);
  for (std::size_t i = 0; i < n; ++i) {
    out.s.emplace_back(s_part[2 * i], s_part[2 * i + 1]);
    out.s_exact.emplace_back(s_part_exact[2 * i], s_part_exact[2 * i + 1]);
  }
  return out;
}

SpectralConfig default_spectral(bool long_circuits) {
  SpectralConfig cfg;
  const auto& rows = long_circuits ? presets::kSpectralLong : presets::kSpectral;
  for (const auto& row : rows) {
    cfg.energies.push_back(row.energy);
    cfg.degrees.push_back(row.length - 1);
  }
  cfg.scale = rows.front().scale;
  return cfg;
}

SpectralResult spectral_run(const Instance& inst, const SpectralConfig& cfg,
                            const SamplingConfig& s) {
  check_sampling(s);
  require(cfg.eta > 0.0, ErrorCode::InvalidArgument, "eta must be positive");
  require(!cfg.energies.empty(), ErrorCode::InvalidArgument, "energy grid is empty");
  require(cfg.degrees.size() == cfg.energies.size(), ErrorCode::DimensionMismatch,
          "one degree per energy is required");
  const CMatrix ham = canonical_h(inst);
  const CVector psi = basis_vector(ham.rows(), 0);
  const QuadraticH h = QuadraticH::canonical();
  const std::size_t n = cfg.energies.size();

  SpectralResult out;
  out.reports.resize(n);
  out.s.resize(n);
  out.s_exact.resize(n);
  out.amplitude_deviation.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const auto t0 = Clock::now();
    const double e = cfg.energies[k];
    const TargetFunction g = TargetFunction::lorentzian_sqrt(cfg.eta, e);
    PlanOptions po;
    po.scale = cfg.scale;
    po.margin = cfg.margin;
    const QsvtPlan plan = plan_even(g, h, cfg.degrees[k], po);
    const QsvtCircuit qc = build_qsvt(inst.ua, plan.varphi);

    BenchmarkReport& r = out.reports[k];
    r = base_report("spectral", inst, s);
    r.params["E"] = e;
    r.params["eta"] = cfg.eta;
    r.params["d"] = plan.degree;
    r.p_measured = measure_success(qc.be.circuit, 2, StateVector(qc.be.circuit.n_qubits()), s, k);
    const CMatrix gh = hermitian_function(ham, [&](double x) { return g(x) / plan.scale; });
    r.p_exact = norm2_after(gh, psi);
    r.relative_error = relative(r.p_measured, r.p_exact);
    r.gate_count = qc.be.circuit.gate_total();
    r.gate_budget = qc.gate_budget;

    const double c = plan.scale * plan.scale / (cfg.eta * kPi);
    out.s[k] = c * r.p_measured;
    out.s_exact[k] = exact_spectral_measure(ham, psi, e, cfg.eta);
    out.amplitude_deviation[k] =
        std::abs(std::sqrt(std::max(0.0, r.p_measured)) - std::sqrt(r.p_exact));
    r.extra = Json{{"s", out.s[k]},
                   {"s_exact", out.s_exact[k]},
                   {"abs_error", std::abs(out.s[k] - out.s_exact[k])},
                   {"amplitude_deviation", out.amplitude_deviation[k]},
                   {"scale", plan.scale},
                   {"poly_error", plan.poly_error},
                   {"phase_residual", plan.phase_residual}};
    if (!s.exact)
      r.extra["mc_sigma_s"] =
          c * std::sqrt(r.p_exact * (1.0 - r.p_exact) / static_cast<double>(s.shots));
    r.wall_time_s = seconds_since(t0);
  });
  return out;
}

MettsResult metts_run(const Instance& inst, const MettsConfig& cfg, const SamplingConfig& s) {
  check_sampling(s);
  require(cfg.beta >= 0.0 && std::isfinite(cfg.beta), ErrorCode::InvalidArgument,
          "beta must be non-negative");
  require(cfg.steps >= 1 && cfg.chains >= 1, ErrorCode::InvalidArgument,
          "steps and chains must be at least 1");
  require(cfg.max_collapse_attempts >= 1, ErrorCode::InvalidArgument,
          "collapse attempts must be at least 1");
  const auto t0 = Clock::now();
  const int n = inst.ua.n_sys;
  const std::uint64_t dim = std::uint64_t{1} << n;
  const CMatrix ham = canonical_h(inst);
  const QuadraticH h = QuadraticH::canonical();

  MettsResult out;
  const TargetFunction tn = TargetFunction::odd_gibbs(cfg.beta);
  const TargetFunction td = TargetFunction::gibbs(cfg.beta);
  out.numerator = cfg.degree_num ? plan_odd(tn, *cfg.degree_num)
                                 : plan_odd_to_tolerance(tn, cfg.tol);
  out.denominator = cfg.degree_den ? plan_even(td, h, *cfg.degree_den)
                                   : plan_even_to_tolerance(td, h, cfg.tol);
  const QsvtCircuit qn = build_qsvt(inst.ua, out.numerator.varphi, true);
  const QsvtCircuit qd = build_qsvt(inst.ua, out.denominator.varphi);
  const int width = qd.be.circuit.n_qubits();
  const double sn2 = out.numerator.scale * out.numerator.scale;
  const double sd2 = out.denominator.scale * out.denominator.scale;
  const std::array<int, 2> ancillas{0, 1};

  // exact mode: energies and collapse distributions per basis state
  struct Row {
    double p_num = 0.0;
    double p_den = 0.0;
    std::vector<double> cdf;
  };
  std::vector<Row> rows;
  if (s.exact) {
    rows.resize(dim);
    parallel_for(dim, [&](std::size_t i) {
      const StateVector in = StateVector::basis(width, i);
      rows[i].p_num = prefix_zero_probability(apply(qn.be.circuit, in), 2);
      const StateVector sd = apply(qd.be.circuit, in);
      rows[i].p_den = prefix_zero_probability(sd, 2);
      if (rows[i].p_den < kDegenerate) return;
      const Collapse col = postselect_collapse(sd, ancillas);
      std::vector<double> p(col.state.dim());
      for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::norm(col.state[j]);
      rows[i].cdf = cumulative(p);
    });
  }

  std::vector<int> all(static_cast<std::size_t>(width));
  for (int q = 0; q < width; ++q) all[static_cast<std::size_t>(q)] = q;
  const std::uint64_t seed = s.seed.value_or(0);

  std::vector<std::vector<MettsStep>> chains(cfg.chains);
  parallel_for(cfg.chains, [&](std::size_t c) {
    Rng rng = Rng(seed).split(c);
    std::uint64_t i = cfg.random_start ? rng.below(dim) : 0;
    auto& steps = chains[c];
    steps.reserve(cfg.steps);
    for (std::size_t k = 0; k < cfg.steps; ++k) {
      MettsStep st;
      st.chain = c;
      st.step = k;
      st.state = i;
      const StateVector in = StateVector::basis(width, i);
      if (s.exact) {
        st.p_num = rows[i].p_num;
        st.p_den = rows[i].p_den;
      } else {
        st.p_num = success_with(qn.be.circuit, 2, in, s, Rng(rng.next_u64()));
        st.p_den = success_with(qd.be.circuit, 2, in, s, Rng(rng.next_u64()));
      }
      st.flagged = st.p_den < kDegenerate;
      if (!st.flagged) st.energy = (sn2 * st.p_num) / (sd2 * st.p_den);

      st.next = i;
      if (s.exact) {
        st.collapse_attempts = 1;
        if (!rows[i].cdf.empty()) st.next = sample_index(rows[i].cdf, rng.uniform());
      } else {
        for (int a = 0; a < cfg.max_collapse_attempts; ++a) {
          st.collapse_attempts = a + 1;
          const CountsHistogram one = draw(qd.be.circuit, 1, all, in, s, Rng(rng.next_u64()));
          const std::string& bits = one.counts.begin()->first;
          if (bits[0] == '0' && bits[1] == '0') {
            st.next = std::stoull(bits.substr(2), nullptr, 2);
            break;
          }
        }
      }
      steps.push_back(st);
      i = st.next;
    }
  });

  double sum = 0.0;
  std::size_t used = 0, flagged = 0, failed_collapses = 0;
  for (const auto& chain : chains)
    for (const MettsStep& st : chain) {
      if (st.flagged) {
        ++flagged;
      } else {
        sum += st.energy;
        ++used;
      }
      if (!s.exact && st.collapse_attempts == cfg.max_collapse_attempts && st.next == st.state)
        ++failed_collapses;
      out.trace.steps.push_back(st);
      out.trace.cma.push_back(used ? sum / static_cast<double>(used) : 0.0);
    }
  out.estimate = used ? sum / static_cast<double>(used) : std::numeric_limits<double>::quiet_NaN();
  out.exact = exact_thermal_energy(ham, cfg.beta);

  BenchmarkReport r = base_report("metts", inst, s);
  r.seed = seed;
  r.params["beta"] = cfg.beta;
  r.params["steps"] = cfg.steps;
  r.params["chains"] = cfg.chains;
  r.params["d_num"] = out.numerator.degree;
  r.params["d_den"] = out.denominator.degree;
  r.p_measured = out.estimate;
  r.p_exact = out.exact;
  r.relative_error = relative(out.estimate, out.exact);
  r.gate_count = qn.be.circuit.gate_total() + qd.be.circuit.gate_total();
  r.gate_budget = qn.gate_budget + qd.gate_budget;
  r.extra = Json{{"quantity", "energy"},
                 {"estimate", out.estimate},
                 {"exact", out.exact},
                 {"flagged_samples", flagged},
                 {"failed_collapses", failed_collapses},
                 {"scale_num", out.numerator.scale},
                 {"scale_den", out.denominator.scale},
                 {"poly_error_num", out.numerator.poly_error},
                 {"poly_error_den", out.denominator.poly_error}};
  r.wall_time_s = seconds_since(t0);
  out.reports.push_back(std::move(r));
  return out;
}

}  // namespace racbem

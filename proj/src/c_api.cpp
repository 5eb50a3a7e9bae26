#include "racbem/racbem.h"

#include <cstring>
#include <string>

#include "racbem/error.hpp"
#include "racbem/io.hpp"
#include "racbem/parallel.hpp"
#include "racbem/random_circuit.hpp"
#include "racbem/tasks.hpp"

struct rb_coupling {
  racbem::CouplingMap map;
};
struct rb_circuit {
  racbem::QuantumCircuit circuit;
};
struct rb_noise {
  racbem::NoiseModel model;
};
struct rb_poly {
  racbem::ChebPoly poly;
};

namespace {

using racbem::ErrorCode;
using racbem::Json;
using racbem::require;

thread_local std::string tl_error;

rb_status to_status(ErrorCode c) { return static_cast<rb_status>(static_cast<int>(c)); }

template <typename F>
rb_status guard(F&& fn) {
  try {
    fn();
    tl_error.clear();
    return RB_OK;
  } catch (const racbem::Error& e) {
    tl_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    tl_error = std::string("JSON schema: ") + e.what();
    return RB_SCHEMA;
  } catch (const std::bad_alloc&) {
    tl_error = "out of memory";
    return RB_CAP_EXCEEDED;
  } catch (const std::exception& e) {
    tl_error = e.what();
    return RB_INTERNAL;
  } catch (...) {
    tl_error = "unknown exception";
    return RB_INTERNAL;
  }
}

void need(const void* p, const char* name) {
  if (!p) racbem::fail(ErrorCode::InvalidArgument, std::string("null pointer: ") + name);
}

char* dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

// ---- task configuration -------------------------------------------------

template <typename T>
T opt(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    racbem::fail(ErrorCode::Schema, std::string("config field '") + key + "' has the wrong type");
  }
}

std::vector<double> num_list(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  try {
    return v.get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    racbem::fail(ErrorCode::Schema, std::string("config field '") + key + "' must be a number or list");
  }
}

std::vector<int> int_list(const Json& j, const char* key) {
  std::vector<int> out;
  for (double v : num_list(j, key)) {
    require(v == std::floor(v), ErrorCode::Schema, std::string("'") + key + "' must hold integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

int parse_depth(const Json& cfg) {
  if (!cfg.contains("depth") || cfg["depth"].is_null()) return 0;
  const Json& d = cfg["depth"];
  if (d.is_string()) {
    require(d.get<std::string>() == "auto", ErrorCode::Schema, "depth must be an integer or \"auto\"");
    return 0;
  }
  const int v = opt<int>(cfg, "depth", 0);
  require(v >= 1, ErrorCode::InvalidArgument, "depth must be at least 1");
  return v;
}

const std::vector<std::string> kKnownKeys = {
    "n", "instance_seed", "instances", "p_cnot", "depth", "exact", "shots", "seed", "sigma",
    "noise", "noise_seed", "jobs", "kappa", "d", "scale", "margin", "t", "eta", "eta_re",
    "eta_im", "d_re", "d_im", "preset", "energies", "beta", "steps", "chains", "random_start",
    "tol", "d_num", "d_den", "samples"};

struct Common {
  racbem::InstanceConfig inst;
  int instances = 1;
  racbem::SamplingConfig sampling;
  Json noise_spec;  // null, "synth" or a model
  std::uint64_t noise_seed = 0;
};

Common parse_common(Json& cfg) {
  require(cfg.is_object(), ErrorCode::Schema, "config must be a JSON object");
  for (const auto& [k, v] : cfg.items()) {
    (void)v;
    require(std::find(kKnownKeys.begin(), kKnownKeys.end(), k) != kKnownKeys.end(),
            ErrorCode::Schema, "unknown config field '" + k + "'");
  }
  Common c;
  c.inst.n_sys = opt<int>(cfg, "n", 3);
  c.inst.instance_seed = opt<std::uint64_t>(cfg, "instance_seed", 1);
  c.inst.p_cnot = opt<double>(cfg, "p_cnot", 0.5);
  c.inst.depth = parse_depth(cfg);
  c.instances = opt<int>(cfg, "instances", 1);
  require(c.instances >= 1, ErrorCode::InvalidArgument, "instances must be at least 1");
  if (cfg.contains("jobs")) racbem::set_num_threads(opt<unsigned>(cfg, "jobs", 0));

  auto& s = c.sampling;
  s.shots = opt<std::uint64_t>(cfg, "shots", 8192);
  s.exact = opt<bool>(cfg, "exact", false) || s.shots == 0;
  if (cfg.contains("seed") && !cfg["seed"].is_null()) s.seed = cfg["seed"].get<std::uint64_t>();
  require(s.exact || s.seed.has_value(), ErrorCode::InvalidArgument,
          "sampled mode needs a seed");
  s.sigma = opt<double>(cfg, "sigma", 1.0);
  c.noise_spec = cfg.value("noise", Json(nullptr));
  c.noise_seed = opt<std::uint64_t>(cfg, "noise_seed", s.seed.value_or(0));
  if (!c.noise_spec.is_null() && !c.noise_spec.is_string())
    s.noise = racbem::noise_from_json(c.noise_spec);
  else if (c.noise_spec.is_string())
    require(c.noise_spec.get<std::string>() == "synth", ErrorCode::Schema,
            "noise must be a model object or \"synth\"");

  cfg["n"] = c.inst.n_sys;
  cfg["instance_seed"] = c.inst.instance_seed;
  cfg["p_cnot"] = c.inst.p_cnot;
  if (!cfg.contains("depth")) cfg["depth"] = "auto";
  cfg["exact"] = s.exact;
  cfg["shots"] = s.exact ? 0 : s.shots;
  if (s.noise || c.noise_spec.is_string()) cfg["sigma"] = s.sigma;
  return c;
}

// synthetic models are built for the width of the circuit that is sampled
racbem::SamplingConfig sampling_for(const Common& c, int n_total) {
  racbem::SamplingConfig s = c.sampling;
  if (!s.exact && c.noise_spec.is_string()) s.noise = racbem::default_noise(n_total, c.noise_seed);
  return s;
}

racbem::Instance instance_k(const Common& c, int k) {
  racbem::InstanceConfig ic = c.inst;
  ic.instance_seed += static_cast<std::uint64_t>(k);
  return racbem::make_instance(ic);
}

racbem::SamplingConfig reseed(racbem::SamplingConfig s, int k) {
  if (s.seed && k > 0) s.seed = racbem::Rng(*s.seed).split(static_cast<std::uint64_t>(k)).next_u64();
  return s;
}

struct TaskOutput {
  std::vector<racbem::BenchmarkReport> reports;
  Json artifacts = Json::object();
};

TaskOutput run_bench(Json& cfg) {
  // n may be a list; the sweep runs every width
  const std::vector<int> ns = cfg.contains("n") ? int_list(cfg, "n") : std::vector<int>{3};
  require(!ns.empty(), ErrorCode::Schema, "'n' must not be empty");
  cfg["n"] = ns[0];
  Common c = parse_common(cfg);
  if (ns.size() > 1) cfg["n"] = ns;
  TaskOutput out;
  Json circuits = Json::array();
  for (int n : ns) {
    c.inst.n_sys = n;
    for (int k = 0; k < c.instances; ++k) {
      const racbem::Instance inst = instance_k(c, k);
      const racbem::SamplingConfig s = reseed(sampling_for(c, n + 1), k);
      out.reports.push_back(racbem::racbem_benchmark(inst, s));
      circuits.push_back(racbem::to_json(inst.ua.circuit));
    }
  }
  out.artifacts["circuits"] = circuits;
  return out;
}

TaskOutput run_linpack(Json& cfg) {
  Common c = parse_common(cfg);
  // kappa and d come as a pair; the default pair is kappa 2 with d 4
  if (cfg.contains("kappa") != cfg.contains("d"))
    racbem::fail(racbem::ErrorCode::InvalidArgument, "kappa and d must be given together");
  racbem::LinpackConfig lc;
  lc.kappa = opt<double>(cfg, "kappa", 2.0);
  lc.degree = opt<int>(cfg, "d", 4);
  if (cfg.contains("scale") && !cfg["scale"].is_null()) lc.plan.scale = cfg["scale"].get<double>();
  lc.plan.margin = opt<double>(cfg, "margin", 1e-2);
  cfg["kappa"] = lc.kappa;
  cfg["d"] = lc.degree;
  const racbem::QsvtPlan plan = racbem::linpack_plan(lc);
  TaskOutput out;
  for (int k = 0; k < c.instances; ++k) {
    const racbem::SamplingConfig s = reseed(sampling_for(c, c.inst.n_sys + 2), k);
    out.reports.push_back(racbem::linpack_run(instance_k(c, k), lc, plan, s));
  }
  out.artifacts["plan"] = racbem::to_json(plan);
  return out;
}

TaskOutput run_timeseries(Json& cfg) {
  Common c = parse_common(cfg);
  const std::string preset = opt<std::string>(cfg, "preset", "short");
  require(preset == "short" || preset == "long", ErrorCode::Schema,
          "preset must be \"short\" or \"long\"");
  racbem::TimeSeriesConfig tc = racbem::default_time_series(preset == "long");
  tc.margin = opt<double>(cfg, "margin", 1e-2);
  if (cfg.contains("t")) {
    // custom grid: scales come from the fitted polynomials
    const auto ts = num_list(cfg, "t");
    auto per = [&](const char* key, std::size_t i, double def) {
      if (!cfg.contains(key)) return def;
      const auto v = num_list(cfg, key);
      require(v.size() == 1 || v.size() == ts.size(), ErrorCode::Schema,
              std::string("'") + key + "' must have one entry or one per t");
      return v.size() == 1 ? v[0] : v[i];
    };
    tc.points.clear();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      racbem::SeriesPoint p;
      p.t = ts[i];
      const double eta = per("eta", i, 1.0);
      p.eta_re = per("eta_re", i, eta);
      p.eta_im = per("eta_im", i, eta);
      const double d = per("d", i, 4);
      p.degree_re = static_cast<int>(per("d_re", i, d));
      p.degree_im = static_cast<int>(per("d_im", i, d));
      tc.points.push_back(p);
    }
  }
  cfg["preset"] = preset;
  const racbem::Instance inst = instance_k(c, 0);
  const racbem::TimeSeriesResult r =
      racbem::time_series_run(inst, tc, sampling_for(c, c.inst.n_sys + 2));
  TaskOutput out;
  out.reports = r.reports;
  Json series = Json::array();
  for (std::size_t i = 0; i < r.s.size(); ++i)
    series.push_back(Json{{"t", tc.points[i].t},
                          {"s_re", r.s[i].real()},
                          {"s_im", r.s[i].imag()},
                          {"s_exact_re", r.s_exact[i].real()},
                          {"s_exact_im", r.s_exact[i].imag()},
                          {"abs_error", std::abs(r.s[i] - r.s_exact[i])}});
  out.artifacts["series"] = series;
  return out;
}

TaskOutput run_spectral(Json& cfg) {
  Common c = parse_common(cfg);
  const std::string preset = opt<std::string>(cfg, "preset", "short");
  require(preset == "short" || preset == "long", ErrorCode::Schema,
          "preset must be \"short\" or \"long\"");
  racbem::SpectralConfig sc = racbem::default_spectral(preset == "long");
  if (cfg.contains("energies")) {
    sc.energies = num_list(cfg, "energies");
    sc.scale.reset();
  }
  if (cfg.contains("d")) {
    const auto ds = int_list(cfg, "d");
    require(ds.size() == 1 || ds.size() == sc.energies.size(), ErrorCode::Schema,
            "'d' must have one entry or one per energy");
    sc.degrees.assign(sc.energies.size(), ds[0]);
    if (ds.size() > 1) sc.degrees = ds;
  } else if (sc.degrees.size() != sc.energies.size()) {
    sc.degrees.assign(sc.energies.size(), 10);
  }
  sc.eta = opt<double>(cfg, "eta", 0.1);
  if (cfg.contains("scale")) sc.scale = opt<double>(cfg, "scale", 1.0);
  sc.margin = opt<double>(cfg, "margin", 1e-2);
  cfg["preset"] = preset;
  cfg["eta"] = sc.eta;
  const racbem::SpectralResult r =
      racbem::spectral_run(instance_k(c, 0), sc, sampling_for(c, c.inst.n_sys + 2));
  TaskOutput out;
  out.reports = r.reports;
  Json series = Json::array();
  for (std::size_t i = 0; i < r.s.size(); ++i)
    series.push_back(Json{{"E", sc.energies[i]},
                          {"s", r.s[i]},
                          {"s_exact", r.s_exact[i]},
                          {"amplitude_deviation", r.amplitude_deviation[i]}});
  out.artifacts["series"] = series;
  return out;
}

std::string trace_csv(const racbem::MettsTrace& t) {
  // doubles use the same shortest round-trip form as the JSON artifacts
  std::string out = "index,chain,step,state,energy,next,flagged,cma\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    out += std::to_string(i) + ',' + std::to_string(s.chain) + ',' + std::to_string(s.step) + ',' +
           std::to_string(s.state) + ',' + Json(s.energy).dump() + ',' + std::to_string(s.next) +
           ',' + (s.flagged ? '1' : '0') + ',' + Json(t.cma[i]).dump() + '\n';
  }
  return out;
}

TaskOutput run_metts(Json& cfg) {
  if (!cfg.contains("n")) cfg["n"] = 2;
  Common c = parse_common(cfg);
  racbem::MettsConfig mc;
  mc.beta = opt<double>(cfg, "beta", 1.0);
  mc.steps = opt<std::size_t>(cfg, "steps", 500);
  mc.chains = opt<std::size_t>(cfg, "chains", 1);
  mc.random_start = opt<bool>(cfg, "random_start", false);
  mc.tol = opt<double>(cfg, "tol", 1e-4);
  if (cfg.contains("d_num")) mc.degree_num = opt<int>(cfg, "d_num", 1);
  if (cfg.contains("d_den")) mc.degree_den = opt<int>(cfg, "d_den", 0);
  cfg["beta"] = mc.beta;
  cfg["steps"] = mc.steps;
  cfg["chains"] = mc.chains;
  racbem::SamplingConfig s = sampling_for(c, c.inst.n_sys + 2);
  if (!s.seed) s.seed = 0;
  cfg["seed"] = *s.seed;
  const racbem::MettsResult r = racbem::metts_run(instance_k(c, 0), mc, s);
  TaskOutput out;
  out.reports = r.reports;
  out.artifacts["estimate"] = r.estimate;
  out.artifacts["exact"] = r.exact;
  out.artifacts["numerator"] = racbem::to_json(r.numerator);
  out.artifacts["denominator"] = racbem::to_json(r.denominator);
  out.artifacts["trace_csv"] = trace_csv(r.trace);
  return out;
}

struct StatsOutput {
  std::string jsonl, csv;
  Json artifacts;
};

StatsOutput run_sv_stats(Json& cfg) {
  Common c = parse_common(cfg);
  const auto samples = opt<std::size_t>(cfg, "samples", 100);
  const std::uint64_t seed = c.sampling.seed.value_or(c.inst.instance_seed);
  const racbem::GeneratorConfig tmpl =
      racbem::racbem_config(c.inst.n_sys, 0, c.inst.p_cnot, c.inst.depth);
  const racbem::SpreadStats st = racbem::sv_spread_stats(samples, c.inst.n_sys, tmpl, seed);
  cfg["samples"] = samples;
  Json rec{{"task", "sv-stats"}, {"n_sys", c.inst.n_sys}, {"depth", tmpl.depth},
           {"p_cnot", c.inst.p_cnot}, {"seed", seed}, {"samples", st.samples},
           {"mean", st.mean}, {"stddev", st.stddev}, {"min", st.min}, {"max", st.max},
           {"config", cfg}};
  StatsOutput out;
  out.jsonl = rec.dump() + "\n";
  out.csv = "# config " + cfg.dump() + "\nsample,spread\n";
  char buf[64];
  for (std::size_t i = 0; i < st.spreads.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, st.spreads[i]);
    out.csv += buf;
  }
  out.artifacts = Json{{"config", cfg}, {"spreads", st.spreads}};
  return out;
}

racbem::TargetFunction target_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::Schema, "target must be a JSON object");
  const std::string kind = opt<std::string>(j, "kind", "");
  using racbem::TargetFunction;
  if (kind == "inverse") return TargetFunction::inverse(opt<double>(j, "kappa", 2.0));
  if (kind == "cos_sqrt") return TargetFunction::cos_sqrt(opt<double>(j, "t", 1.0), opt<double>(j, "eta", 1.0));
  if (kind == "sin_sqrt") return TargetFunction::sin_sqrt(opt<double>(j, "t", 1.0), opt<double>(j, "eta", 1.0));
  if (kind == "lorentzian_sqrt")
    return TargetFunction::lorentzian_sqrt(opt<double>(j, "eta", 0.1), opt<double>(j, "E", 0.0));
  if (kind == "gibbs") return TargetFunction::gibbs(opt<double>(j, "beta", 1.0));
  if (kind == "gibbs_sqrt_x") return TargetFunction::gibbs_sqrt_x(opt<double>(j, "beta", 1.0));
  if (kind == "odd_gibbs") return TargetFunction::odd_gibbs(opt<double>(j, "beta", 1.0));
  racbem::fail(ErrorCode::Schema, "unknown target kind '" + kind + "'");
}

}  // namespace

extern "C" {

const char* rb_version(void) { return "1.0.0"; }

const char* rb_last_error(void) { return tl_error.c_str(); }

const char* rb_status_name(rb_status status) {
  if (status == RB_OK) return "ok";
  switch (status) {
    case RB_INVALID_ARGUMENT:
    case RB_DIMENSION_MISMATCH:
    case RB_CAP_EXCEEDED:
    case RB_DEGENERATE_POSTSELECTION:
    case RB_NON_CONVERGENCE:
    case RB_INFEASIBLE:
    case RB_IO:
    case RB_PARSE:
    case RB_SCHEMA:
    case RB_INTERNAL:
      return racbem::error_code_name(static_cast<ErrorCode>(status));
    default:
      return "unknown";
  }
}

void rb_string_free(char* s) { delete[] s; }

rb_status rb_set_num_threads(unsigned n) {
  return guard([&] { racbem::set_num_threads(n); });
}

rb_status rb_coupling_bundled(const char* name, rb_coupling** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = new rb_coupling{racbem::bundled_coupling(name)};
  });
}

rb_status rb_coupling_from_json(const char* json, rb_coupling** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new rb_coupling{racbem::coupling_from_json(racbem::parse_json(json))};
  });
}

rb_status rb_coupling_to_json(const rb_coupling* c, char** out) {
  return guard([&] {
    need(c, "coupling");
    need(out, "out");
    *out = dup(racbem::to_json(c->map).dump(2) + "\n");
  });
}

void rb_coupling_free(rb_coupling* c) { delete c; }

rb_status rb_circuit_generate(const rb_coupling* map, double p_cnot, int depth, uint64_t seed,
                              rb_circuit** out) {
  return guard([&] {
    need(map, "map");
    need(out, "out");
    require(depth >= 1, ErrorCode::InvalidArgument, "depth must be at least 1");
    racbem::GeneratorConfig cfg;
    cfg.coupling = map->map;
    cfg.p_cnot = p_cnot;
    cfg.depth = depth;
    cfg.seed = seed;
    *out = new rb_circuit{racbem::generate(cfg)};
  });
}

rb_status rb_circuit_racbem(int n_sys, double p_cnot, int depth, uint64_t seed, rb_circuit** out) {
  return guard([&] {
    need(out, "out");
    require(depth >= 0, ErrorCode::InvalidArgument, "depth must be non-negative");
    *out = new rb_circuit{racbem::generate(racbem::racbem_config(n_sys, seed, p_cnot, depth))};
  });
}

rb_status rb_circuit_from_json(const char* json, rb_circuit** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new rb_circuit{racbem::circuit_from_json(racbem::parse_json(json))};
  });
}

rb_status rb_circuit_to_json(const rb_circuit* c, char** out) {
  return guard([&] {
    need(c, "circuit");
    need(out, "out");
    *out = dup(racbem::to_json(c->circuit).dump(2) + "\n");
  });
}

rb_status rb_circuit_to_text(const rb_circuit* c, char** out) {
  return guard([&] {
    need(c, "circuit");
    need(out, "out");
    *out = dup(racbem::to_text(c->circuit));
  });
}

rb_status rb_circuit_info(const rb_circuit* c, int* n_qubits, size_t* depth, size_t* gate_count) {
  return guard([&] {
    need(c, "circuit");
    if (n_qubits) *n_qubits = c->circuit.n_qubits();
    if (depth) *depth = c->circuit.depth();
    if (gate_count) *gate_count = c->circuit.gate_total();
  });
}

rb_status rb_circuit_validate(const rb_circuit* c, const rb_coupling* map, size_t* violations) {
  return guard([&] {
    need(c, "circuit");
    need(map, "map");
    need(violations, "violations");
    *violations = racbem::validate(c->circuit, map->map).size();
  });
}

rb_status rb_circuit_block(const rb_circuit* c, double* out, size_t len) {
  return guard([&] {
    need(c, "circuit");
    need(out, "out");
    const racbem::BlockEncoding be = racbem::racbem_from_circuit(c->circuit);
    const racbem::CMatrix a = racbem::extract_block(be);
    const std::size_t want = 2 * static_cast<std::size_t>(a.rows() * a.cols());
    require(len == want, ErrorCode::DimensionMismatch,
            "output buffer must hold " + std::to_string(want) + " doubles");
    std::size_t p = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        out[p++] = a(i, k).real();
        out[p++] = a(i, k).imag();
      }
  });
}

rb_status rb_circuit_success_probability(const rb_circuit* c, int m, double* p) {
  return guard([&] {
    need(c, "circuit");
    need(p, "p");
    require(m >= 1 && m <= c->circuit.n_qubits(), ErrorCode::InvalidArgument,
            "m must lie in [1, n_qubits]");
    *p = racbem::success_probability_exact(c->circuit, m, racbem::StateVector(c->circuit.n_qubits()));
  });
}

rb_status rb_circuit_sample(const rb_circuit* c, const rb_noise* noise, double sigma,
                            uint64_t shots, const int* measured, size_t n_measured, uint64_t seed,
                            char** counts_json) {
  return guard([&] {
    need(c, "circuit");
    need(measured, "measured");
    need(counts_json, "counts_json");
    const std::span<const int> meas(measured, n_measured);
    const racbem::Rng rng(seed);
    const racbem::CountsHistogram h =
        noise ? racbem::sample_noisy_counts(c->circuit, racbem::scale(noise->model, sigma), shots,
                                            meas, rng)
              : racbem::sample_counts(c->circuit, shots, meas, rng);
    *counts_json = dup(racbem::to_json(h).dump() + "\n");
  });
}

void rb_circuit_free(rb_circuit* c) { delete c; }

rb_status rb_noise_from_json(const char* json, rb_noise** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new rb_noise{racbem::noise_from_json(racbem::parse_json(json))};
  });
}

rb_status rb_noise_synth(int n_total, uint64_t seed, rb_noise** out) {
  return guard([&] {
    need(out, "out");
    *out = new rb_noise{racbem::default_noise(n_total, seed)};
  });
}

rb_status rb_noise_scale(const rb_noise* m, double sigma, rb_noise** out) {
  return guard([&] {
    need(m, "model");
    need(out, "out");
    *out = new rb_noise{racbem::scale(m->model, sigma)};
  });
}

rb_status rb_noise_to_json(const rb_noise* m, char** out) {
  return guard([&] {
    need(m, "model");
    need(out, "out");
    *out = dup(racbem::to_json(m->model).dump(2) + "\n");
  });
}

void rb_noise_free(rb_noise* m) { delete m; }

rb_status rb_remez(const char* target_json, int degree, const char* parity, double a, double b,
                   rb_poly** out, double* error) {
  return guard([&] {
    need(target_json, "target_json");
    need(parity, "parity");
    need(out, "out");
    const racbem::TargetFunction t = target_from_json(racbem::parse_json(target_json));
    const racbem::RemezResult r =
        racbem::remez(t, degree, racbem::parity_from_name(parity), a, b);
    *out = new rb_poly{r.poly};
    if (error) *error = r.error;
  });
}

rb_status rb_poly_from_json(const char* json, rb_poly** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new rb_poly{racbem::poly_from_json(racbem::parse_json(json))};
  });
}

rb_status rb_poly_to_json(const rb_poly* p, char** out) {
  return guard([&] {
    need(p, "poly");
    need(out, "out");
    *out = dup(racbem::to_json(p->poly).dump(2) + "\n");
  });
}

rb_status rb_poly_eval(const rb_poly* p, double x, double* y) {
  return guard([&] {
    need(p, "poly");
    need(y, "y");
    *y = p->poly.eval(x);
  });
}

rb_status rb_poly_degree(const rb_poly* p, int* degree) {
  return guard([&] {
    need(p, "poly");
    need(degree, "degree");
    *degree = p->poly.degree();
  });
}

void rb_poly_free(rb_poly* p) { delete p; }

rb_status rb_phase_factors(const rb_poly* f, char** out) {
  return guard([&] {
    need(f, "poly");
    need(out, "out");
    const racbem::OptimizeResult r = racbem::optimize(f->poly);
    racbem::PhaseFactors phi = r.phases;
    phi.residual = r.residual;
    racbem::PhaseFactors varphi = racbem::circuit_phases(phi);
    varphi.residual = r.residual;
    Json j{{"phi", racbem::to_json(phi)},
           {"varphi", racbem::to_json(varphi)},
           {"iterations", r.iterations},
           {"node_error_bound", r.node_error_bound}};
    *out = dup(j.dump(2) + "\n");
  });
}

rb_status rb_task_run(const char* task, const char* config_json, char** jsonl, char** csv,
                      char** artifacts) {
  return guard([&] {
    need(task, "task");
    const std::string name(task);
    Json cfg = config_json && *config_json ? racbem::parse_json(config_json) : Json::object();
    if (name == "sv-stats") {
      StatsOutput s = run_sv_stats(cfg);
      put(jsonl, s.jsonl);
      put(csv, s.csv);
      put(artifacts, s.artifacts.dump(2) + "\n");
      return;
    }
    TaskOutput out;
    if (name == "racbem-bench") out = run_bench(cfg);
    else if (name == "linpack") out = run_linpack(cfg);
    else if (name == "timeseries") out = run_timeseries(cfg);
    else if (name == "spectral") out = run_spectral(cfg);
    else if (name == "metts") out = run_metts(cfg);
    else racbem::fail(ErrorCode::InvalidArgument, "unknown task '" + name + "'");

    std::string lines;
    for (const auto& r : out.reports) {
      Json j = r.to_json();
      j["config"] = cfg;
      lines += j.dump() + "\n";
    }
    Json art{{"task", name}, {"config", cfg}};
    for (auto& [k, v] : out.artifacts.items()) art[k] = v;
    put(jsonl, lines);
    put(csv, "# config " + cfg.dump() + "\n" + racbem::to_csv(out.reports));
    put(artifacts, art.dump(2) + "\n");
  });
}

}  // extern "C"

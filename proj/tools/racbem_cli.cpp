#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "racbem/racbem.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kUsage = 64;

// Module errors carry an rb_status; the CLI raises the same codes for its own
// file handling.
struct CliError {
  rb_status status;
  std::string message;
};

void check(rb_status st) {
  if (st != RB_OK) throw CliError{st, rb_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  rb_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{RB_IO, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw CliError{RB_PARSE, what + ": " + e.what()};
  }
}

struct Output {
  fs::path dir;

  void write(const std::string& name, const std::string& content) const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path dst = dir / name;
    const fs::path tmp = dir / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw CliError{RB_IO, "cannot write " + tmp.string()};
      out << content;
      if (!out.flush()) throw CliError{RB_IO, "cannot write " + tmp.string()};
    }
    fs::rename(tmp, dst, ec);
    if (ec) throw CliError{RB_IO, "cannot rename to " + dst.string() + ": " + ec.message()};
  }
};

// Flags collected into a JSON object; they override the config file.
struct Flags {
  Json values = Json::object();
  std::string config_path;
  std::string out_dir;

  template <typename T>
  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    app->add_option_function<T>(flag, [this, key](const T& v) { values[key] = v; }, help);
  }

  void add_list(CLI::App* app, const std::string& flag, const std::string& key,
                const std::string& help) {
    app->add_option_function<std::vector<double>>(
           flag, [this, key](const std::vector<double>& v) { values[key] = v; }, help)
        ->delimiter(',');
  }

  void add_bool(CLI::App* app, const std::string& flag, const std::string& key,
                const std::string& help) {
    app->add_flag_callback(flag, [this, key] { values[key] = true; }, help);
  }

  Json merged() const {
    Json cfg = Json::object();
    if (!config_path.empty()) {
      cfg = parse(read_file(config_path), config_path);
      if (!cfg.is_object()) throw CliError{RB_SCHEMA, "config file must hold a JSON object"};
    }
    for (const auto& [k, v] : values.items()) cfg[k] = v;
    // a single --n is a scalar in the config
    if (cfg.contains("n") && cfg["n"].is_array() && cfg["n"].size() == 1) cfg["n"] = cfg["n"][0];
    return cfg;
  }

  Output output() const {
    if (!out_dir.empty()) return {out_dir};
    const char* env = std::getenv("RACBEM_OUT_DIR");
    return {env && *env ? env : "."};
  }
};

void add_io(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON config file; flags take precedence");
  app->add_option("--out", f.out_dir, "Output directory (default $RACBEM_OUT_DIR or .)");
}

void add_jobs(CLI::App* app) {
  app->add_option_function<unsigned>(
      "--jobs", [](unsigned n) { check(rb_set_num_threads(n)); },
      "Worker threads (default: all cores)");
}

// "depth": "auto" or an integer
void add_depth(CLI::App* app, Flags& f) {
  app->add_option_function<std::string>(
      "--depth",
      [&f](const std::string& v) {
        if (v == "auto") {
          f.values["depth"] = "auto";
          return;
        }
        try {
          std::size_t pos = 0;
          const int d = std::stoi(v, &pos);
          if (pos != v.size()) throw std::invalid_argument(v);
          f.values["depth"] = d;
        } catch (const std::exception&) {
          throw CLI::ValidationError("--depth", "must be an integer or auto");
        }
      },
      "Circuit depth or auto");
}

void add_common(CLI::App* app, Flags& f) {
  add_io(app, f);
  add_jobs(app);
  app->add_option_function<std::vector<int>>(
         "--n", [&f](const std::vector<int>& v) { f.values["n"] = v; },
         "System qubits (comma separated list for racbem-bench)")
      ->delimiter(',');
  f.add<std::uint64_t>(app, "--instance-seed", "instance_seed", "Seed of the random U_A");
  f.add<double>(app, "--p-cnot", "p_cnot", "CNOT probability per slot (default 0.5)");
  add_depth(app, f);
  f.add_bool(app, "--exact", "exact", "Exact statevector probabilities");
  f.add<std::uint64_t>(app, "--shots", "shots", "Shots per probability (default 8192; 0 = exact)");
  f.add<std::uint64_t>(app, "--seed", "seed", "Sampling seed (required unless exact)");
  f.add<double>(app, "--sigma", "sigma", "Noise scale (default 1)");
  app->add_option_function<std::string>(
      "--noise",
      [&f](const std::string& v) {
        f.values["noise"] = v == "synth" ? Json("synth") : parse(read_file(v), v);
      },
      "Noise model JSON file, or synth");
  f.add<std::uint64_t>(app, "--noise-seed", "noise_seed", "Seed of the synthetic noise model");
}

void emit_task(const std::string& task, const Flags& f) {
  const Json cfg = f.merged();
  char* jsonl = nullptr;
  char* csv = nullptr;
  char* art = nullptr;
  check(rb_task_run(task.c_str(), cfg.dump().c_str(), &jsonl, &csv, &art));
  const Output out = f.output();
  const std::string lines = take(jsonl);
  const std::string table = take(csv);
  Json artifacts = parse(take(art), "artifacts");
  if (artifacts.contains("trace_csv")) {
    out.write("metts_trace.csv", artifacts["trace_csv"].get<std::string>());
    artifacts.erase("trace_csv");
  }
  out.write(task + ".jsonl", lines);
  out.write(task + ".csv", table);
  out.write(task + ".json", artifacts.dump(2) + "\n");
  std::cout << lines;
}

struct Handle {
  rb_circuit* c = nullptr;
  rb_coupling* m = nullptr;
  rb_poly* p = nullptr;
  ~Handle() {
    rb_circuit_free(c);
    rb_coupling_free(m);
    rb_poly_free(p);
  }
};

void run_generate(const Flags& f) {
  const Json cfg = f.merged();
  const double p_cnot = cfg.value("p_cnot", 0.5);
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
  int depth = 0;
  if (cfg.contains("depth") && !cfg["depth"].is_string()) depth = cfg["depth"].get<int>();
  Handle h;
  Json rec{{"task", "generate"}};
  if (cfg.contains("coupling")) {
    const std::string which = cfg["coupling"].get<std::string>();
    if (which == "t5" || which == "ladder15")
      check(rb_coupling_bundled(which.c_str(), &h.m));
    else
      check(rb_coupling_from_json(read_file(which).c_str(), &h.m));
    if (depth <= 0) throw CliError{RB_INVALID_ARGUMENT, "--coupling needs an explicit --depth"};
    check(rb_circuit_generate(h.m, p_cnot, depth, seed, &h.c));
    std::size_t violations = 0;
    check(rb_circuit_validate(h.c, h.m, &violations));
    rec["violations"] = violations;
  } else {
    int n = 3;
    if (cfg.contains("n")) n = cfg["n"].get<int>();
    check(rb_circuit_racbem(n, p_cnot, depth, seed, &h.c));
  }
  int nq = 0;
  std::size_t d = 0, gates = 0;
  check(rb_circuit_info(h.c, &nq, &d, &gates));
  char* json = nullptr;
  check(rb_circuit_to_json(h.c, &json));
  const Output out = f.output();
  out.write("circuit.json", take(json));
  rec["n_qubits"] = nq;
  rec["depth"] = d;
  rec["gate_count"] = gates;
  rec["config"] = cfg;
  out.write("generate.jsonl", rec.dump() + "\n");
  std::cout << rec.dump() << "\n";
}

void run_remez(const Flags& f) {
  Json cfg = f.merged();
  const std::string kind = cfg.value("kind", std::string("inverse"));
  Json target{{"kind", kind}};
  for (const char* k : {"kappa", "t", "eta", "E", "beta"})
    if (cfg.contains(k)) target[k] = cfg[k];
  const int degree = cfg.value("d", 4);
  const std::string parity = cfg.value("parity", std::string("none"));
  const double a = cfg.value("a", kind == "inverse" ? 1.0 / cfg.value("kappa", 2.0) : 0.0);
  const double b = cfg.value("b", 1.0);
  Handle h;
  double err = 0.0;
  check(rb_remez(target.dump().c_str(), degree, parity.c_str(), a, b, &h.p, &err));
  char* json = nullptr;
  check(rb_poly_to_json(h.p, &json));
  const Output out = f.output();
  out.write("poly.json", take(json));
  const Json rec{{"task", "remez"}, {"target", target}, {"degree", degree}, {"parity", parity},
                 {"interval", {a, b}}, {"error", err}, {"config", cfg}};
  out.write("remez.jsonl", rec.dump() + "\n");
  std::cout << rec.dump() << "\n";
}

void run_phase_factors(const Flags& f, const std::string& poly_path) {
  const Json cfg = f.merged();
  const std::string path = !poly_path.empty() ? poly_path : cfg.value("poly", std::string());
  if (path.empty()) throw CliError{RB_INVALID_ARGUMENT, "phase-factors needs --poly"};
  Handle h;
  check(rb_poly_from_json(read_file(path).c_str(), &h.p));
  char* res = nullptr;
  check(rb_phase_factors(h.p, &res));
  const Json r = parse(take(res), "phase factors");
  const Output out = f.output();
  out.write("phases.json", r["phi"].dump(2) + "\n");
  out.write("circuit_phases.json", r["varphi"].dump(2) + "\n");
  int degree = 0;
  check(rb_poly_degree(h.p, &degree));
  const Json rec{{"task", "phase-factors"},
                 {"degree", degree},
                 {"residual", r["phi"]["residual"]},
                 {"iterations", r["iterations"]},
                 {"node_error_bound", r["node_error_bound"]},
                 {"config", cfg}};
  out.write("phase-factors.jsonl", rec.dump() + "\n");
  std::cout << rec.dump() << "\n";
}

void error_record(int code, const std::string& kind, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"code", code}, {"message", message}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RACBEM benchmark suite"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rb_version());

  Flags f;
  std::function<void()> action;

  auto* gen = app.add_subcommand("generate", "Random circuit (RACBEM instance or coupling map)");
  add_io(gen, f);
  f.add<std::vector<int>>(gen, "--n", "n", "System qubits of the RACBEM instance");
  f.add<std::string>(gen, "--coupling", "coupling", "t5, ladder15 or a coupling JSON file");
  f.add<double>(gen, "--p-cnot", "p_cnot", "CNOT probability per slot");
  add_depth(gen, f);
  f.add<std::uint64_t>(gen, "--seed", "seed", "Generator seed");
  gen->callback([&] { action = [&] { run_generate(f); }; });

  auto* rz = app.add_subcommand("remez", "Minimax polynomial fit");
  add_io(rz, f);
  f.add<std::string>(rz, "--target", "kind",
                     "inverse, cos_sqrt, sin_sqrt, lorentzian_sqrt, gibbs, gibbs_sqrt_x, odd_gibbs");
  f.add<double>(rz, "--kappa", "kappa", "Condition number");
  f.add<double>(rz, "--t", "t", "Time");
  f.add<double>(rz, "--eta", "eta", "Shift or broadening");
  f.add<double>(rz, "--E", "E", "Energy");
  f.add<double>(rz, "--beta", "beta", "Inverse temperature");
  f.add<int>(rz, "--d", "d", "Degree");
  f.add<std::string>(rz, "--parity", "parity", "even, odd or none");
  f.add<double>(rz, "--a", "a", "Interval start");
  f.add<double>(rz, "--b", "b", "Interval end");
  rz->callback([&] { action = [&] { run_remez(f); }; });

  std::string poly_path;
  auto* pf = app.add_subcommand("phase-factors", "Symmetric phase factors for a polynomial");
  add_io(pf, f);
  pf->add_option("--poly", poly_path, "Polynomial JSON file");
  pf->callback([&] { action = [&] { run_phase_factors(f, poly_path); }; });

  auto task = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, f);
    sub->callback([&f, &action, name] { action = [&f, name] { emit_task(name, f); }; });
    return sub;
  };

  auto* bench = task("racbem-bench", "Success probability of RACBEM instances");
  f.add<int>(bench, "--instances", "instances", "Consecutive instance seeds per width");

  auto* lp = task("linpack", "Inverse of the instance matrix via QSVT");
  f.add<double>(lp, "--kappa", "kappa", "Condition number (pair with --d; default pair 2, 4)");
  f.add<int>(lp, "--d", "d", "Even QSVT degree");
  f.add<double>(lp, "--scale", "scale", "Scale factor override");
  f.add<double>(lp, "--margin", "margin", "Relative scale margin");
  f.add<int>(lp, "--instances", "instances", "Consecutive instance seeds");

  auto* ts = task("timeseries", "Time-correlation series");
  f.add<std::string>(ts, "--preset", "preset", "short or long circuits");
  f.add_list(ts, "--t", "t", "Times (comma separated)");
  f.add_list(ts, "--eta", "eta", "Shift per time or one for all");
  f.add_list(ts, "--d", "d", "Degree per time or one for all");
  f.add<double>(ts, "--margin", "margin", "Relative scale margin");

  auto* sp = task("spectral", "Spectral measure");
  f.add<std::string>(sp, "--preset", "preset", "short or long circuits");
  f.add_list(sp, "--energies", "energies", "Energies (comma separated)");
  f.add_list(sp, "--d", "d", "Degree per energy or one for all");
  f.add<double>(sp, "--eta", "eta", "Broadening (default 0.1)");
  f.add<double>(sp, "--scale", "scale", "Shared scale factor");
  f.add<double>(sp, "--margin", "margin", "Relative scale margin");

  auto* mt = task("metts", "Thermal energy by METTS");
  f.add<double>(mt, "--beta", "beta", "Inverse temperature");
  f.add<std::size_t>(mt, "--steps", "steps", "Steps per chain");
  f.add<std::size_t>(mt, "--chains", "chains", "Independent chains");
  f.add_bool(mt, "--random-start", "random_start", "Uniform random initial states");
  f.add<double>(mt, "--tol", "tol", "Polynomial error target");
  f.add<int>(mt, "--d-num", "d_num", "Numerator degree (odd)");
  f.add<int>(mt, "--d-den", "d_den", "Denominator degree (even)");

  auto* sv = task("sv-stats", "Singular-value spread of random RACBEMs");
  f.add<std::size_t>(sv, "--samples", "samples", "Circuits to sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_record(kUsage, "usage", e.what());
    return kUsage;
  } catch (const CliError& e) {
    error_record(e.status, rb_status_name(e.status), e.message);
    return e.status;
  }

  try {
    action();
  } catch (const CliError& e) {
    error_record(e.status, rb_status_name(e.status), e.message);
    return e.status;
  } catch (const std::exception& e) {
    error_record(RB_INTERNAL, "internal", e.what());
    return RB_INTERNAL;
  }
  return 0;
}

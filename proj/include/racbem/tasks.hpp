#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "racbem/io.hpp"
#include "racbem/noise.hpp"
#include "racbem/qsvt.hpp"

namespace racbem {

/// Which random circuit a task runs on.
struct InstanceConfig {
  int n_sys = 3;
  std::uint64_t instance_seed = 1;
  double p_cnot = 0.5;
  int depth = 0;  // 0: default_depth(n_sys)
};

/// How success probabilities are obtained. Exact mode reads them off the
/// statevector; sampled mode draws `shots` shots, through `noise` scaled by
/// `sigma` when a model is given.
struct SamplingConfig {
  bool exact = true;
  std::uint64_t shots = 8192;
  std::optional<std::uint64_t> seed;  // required when !exact
  double sigma = 1.0;
  std::optional<NoiseModel> noise;
};

struct Instance {
  InstanceConfig config;
  BlockEncoding ua;
};

Instance make_instance(const InstanceConfig& cfg);
/// U_A = identity on n_sys + 1 qubits (an empty circuit), so A = I.
Instance identity_instance(int n_sys);

/// Synthetic device model over device_coupling(n_total) with the default
/// rates (1e-3 one-qubit, 1e-2 CNOT, 2e-2 readout).
NoiseModel default_noise(int n_total, std::uint64_t seed);

/// A polynomial ready for the QSVT circuit.
struct QsvtPlan {
  TargetFunction target;  // raw g (before scaling)
  QuadraticH h;
  bool odd = false;       // odd in x, used without h
  int degree = 0;         // QSVT degree d (length - 1)
  double scale = 1.0;
  ChebPoly g;             // g / scale on the h range (even plans only)
  ChebPoly f;             // block function on [-1, 1]
  double poly_error = 0.0;  // max |f - target / scale| in scaled units
  PhaseFactors phi;
  PhaseFactors varphi;
  double phase_residual = 0.0;
};

struct PlanOptions {
  std::optional<double> scale;  // overrides the fitted maximum
  double margin = 1e-2;
};

/// Even plan: minimax g of degree d/2 on the range of h, divided by the scale,
/// composed with h. d must be even.
QsvtPlan plan_even(const TargetFunction& g, const QuadraticH& h, int degree,
                   const PlanOptions& opts = {});
/// Odd plan: minimax odd polynomial of degree d on [0, 1], block W f V^dag.
QsvtPlan plan_odd(const TargetFunction& t, int degree, const PlanOptions& opts = {});
/// Smallest even degree (up to max_degree) whose scaled error is <= tol.
QsvtPlan plan_even_to_tolerance(const TargetFunction& g, const QuadraticH& h, double tol,
                                int max_degree = 60, const PlanOptions& opts = {});
QsvtPlan plan_odd_to_tolerance(const TargetFunction& t, double tol, int max_degree = 61,
                               const PlanOptions& opts = {});

Json to_json(const QsvtPlan& p);

struct BenchmarkReport {
  std::string task;
  std::uint64_t instance_seed = 0;
  std::optional<std::uint64_t> seed;
  Json params = Json::object();
  double p_measured = 0.0;
  double p_exact = 0.0;
  double relative_error = 0.0;
  std::size_t gate_count = 0;
  std::size_t gate_budget = 0;
  double wall_time_s = 0.0;
  Json extra = Json::object();

  Json to_json() const;
};

std::string csv_header();
std::string csv_row(const BenchmarkReport& r);
std::string to_jsonl(const std::vector<BenchmarkReport>& rs);
std::string to_csv(const std::vector<BenchmarkReport>& rs);

/// Probability that the m lowest qubits read 0 after `c` on `input`.
double measure_success(const QuantumCircuit& c, int m, const StateVector& input,
                       const SamplingConfig& s, std::uint64_t stream);

/// || A |0^n> ||^2 for the instance itself.
BenchmarkReport racbem_benchmark(const Instance& inst, const SamplingConfig& s);

struct LinpackConfig {
  double kappa = 2.0;
  int degree = 4;
  PlanOptions plan;
};

/// Solver plan for 1/x on h_kappa; throws Infeasible when kappa <= 1.
QsvtPlan linpack_plan(const LinpackConfig& cfg);
BenchmarkReport linpack_run(const Instance& inst, const LinpackConfig& cfg,
                            const SamplingConfig& s);
BenchmarkReport linpack_run(const Instance& inst, const LinpackConfig& cfg,
                            const QsvtPlan& plan, const SamplingConfig& s);

struct SeriesPoint {
  double t = 0.0;
  double eta_re = 1.0;
  int degree_re = 2;
  std::optional<double> scale_re;
  double eta_im = 1.0;
  int degree_im = 2;
  std::optional<double> scale_im;
};

struct TimeSeriesConfig {
  std::vector<SeriesPoint> points;
  double margin = 1e-2;
};

/// Default grid t = 1..10 with the preset lengths and scales.
TimeSeriesConfig default_time_series(bool long_circuits = false);

struct TimeSeriesResult {
  std::vector<BenchmarkReport> reports;  // real and imaginary part per point
  std::vector<std::complex<double>> s;
  std::vector<std::complex<double>> s_exact;
};

/// Canonical H = A^dag A, |psi> = |0^n>.
TimeSeriesResult time_series_run(const Instance& inst, const TimeSeriesConfig& cfg,
                                 const SamplingConfig& s);

struct SpectralConfig {
  std::vector<double> energies;
  std::vector<int> degrees;  // one per energy
  double eta = 0.1;
  std::optional<double> scale;
  double margin = 1e-2;
};

SpectralConfig default_spectral(bool long_circuits = false);

struct SpectralResult {
  std::vector<BenchmarkReport> reports;
  std::vector<double> s;
  std::vector<double> s_exact;
  /// | sqrt(p) - sqrt(p_exact) | per energy, bounded by the polynomial error.
  std::vector<double> amplitude_deviation;
};

SpectralResult spectral_run(const Instance& inst, const SpectralConfig& cfg,
                            const SamplingConfig& s);

struct MettsConfig {
  double beta = 1.0;
  std::size_t steps = 500;
  std::size_t chains = 1;
  bool random_start = false;
  double tol = 1e-4;  // polynomial error target for both circuits
  std::optional<int> degree_num;
  std::optional<int> degree_den;
  int max_collapse_attempts = 100;
};

struct MettsStep {
  std::size_t chain = 0;
  std::size_t step = 0;
  std::uint64_t state = 0;
  double energy = 0.0;
  std::uint64_t next = 0;
  double p_num = 0.0;
  double p_den = 0.0;
  bool flagged = false;  // p_den below threshold, energy left out of the CMA
  int collapse_attempts = 0;
};

struct MettsTrace {
  std::vector<MettsStep> steps;
  std::vector<double> cma;  // cumulative moving average over all steps
};

struct MettsResult {
  MettsTrace trace;
  double estimate = 0.0;
  double exact = 0.0;
  QsvtPlan numerator;
  QsvtPlan denominator;
  std::vector<BenchmarkReport> reports;  // one summary row
};

/// Minimally entangled typical thermal states on the canonical H = A^dag A.
MettsResult metts_run(const Instance& inst, const MettsConfig& cfg,
                      const SamplingConfig& s);

}  // namespace racbem

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "racbem/error.hpp"
#include "racbem/oracle.hpp"
#include "racbem/tasks.hpp"

using namespace racbem;

namespace {

SamplingConfig exact_mode() { return SamplingConfig{}; }

SamplingConfig sampled(std::uint64_t seed, std::uint64_t shots = 8192) {
  SamplingConfig s;
  s.exact = false;
  s.seed = seed;
  s.shots = shots;
  return s;
}

CMatrix gram(const Instance& inst) {
  const CMatrix a = extract_block(inst.ua);
  return a.adjoint() * a;
}

// T(i -> j) = |<j| e^{-beta H / 2} |i>|^2 / <i| e^{-beta H} |i>
Eigen::MatrixXd metts_transitions(const CMatrix& h, double beta) {
  const CMatrix g = hermitian_function(h, [beta](double x) { return std::exp(-beta * x / 2); });
  Eigen::MatrixXd t(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const double norm = g.col(i).squaredNorm();
    for (Eigen::Index j = 0; j < h.rows(); ++j) t(i, j) = std::norm(g(j, i)) / norm;
  }
  return t;
}

}  // namespace

TEST(Tasks, EvenPlanIsConsistent) {
  const QsvtPlan p = linpack_plan(LinpackConfig{4.0, 8, {}});
  EXPECT_EQ(p.degree, 8);
  EXPECT_FALSE(p.odd);
  EXPECT_LE(p.f.grid_max_abs(), 1.0);
  EXPECT_LT(p.phase_residual, 1e-20);
  const TargetFunction scaled = p.target.composed(p.h).scaled(p.scale);
  EXPECT_NEAR(max_error(p.f, scaled, -1.0, 1.0), p.poly_error, 1e-6 * p.poly_error + 1e-14);
  EXPECT_GT(p.scale, 4.0);  // 1/x reaches kappa at the left end
}

TEST(Tasks, OddPlanIsConsistent) {
  const QsvtPlan p = plan_odd(TargetFunction::odd_gibbs(2.0), 7);
  EXPECT_TRUE(p.odd);
  EXPECT_EQ(p.f.parity, Parity::Odd);
  EXPECT_LT(p.phase_residual, 1e-20);
  const QsvtPlan q = plan_odd_to_tolerance(TargetFunction::odd_gibbs(2.0), 1e-4);
  EXPECT_LE(q.poly_error, 1e-4);
  EXPECT_EQ(q.degree % 2, 1);
}

TEST(Tasks, PlanScaleOverrideAndInfeasibility) {
  LinpackConfig cfg{2.0, 4, {}};
  cfg.plan.scale = 3.0;
  EXPECT_DOUBLE_EQ(linpack_plan(cfg).scale, 3.0);
  cfg.plan.scale = 1.0;  // 1/x reaches 2 > scale
  EXPECT_THROW(linpack_plan(cfg), Error);
  EXPECT_THROW(linpack_plan(LinpackConfig{1.0, 4, {}}), Error);
  EXPECT_THROW(linpack_plan(LinpackConfig{2.0, 3, {}}), Error);
}

TEST(Tasks, IdentityBenchmark) {
  const BenchmarkReport r = racbem_benchmark(identity_instance(2), exact_mode());
  EXPECT_NEAR(r.p_exact, 1.0, 1e-14);
  EXPECT_NEAR(r.p_measured, 1.0, 1e-14);
}

TEST(Tasks, SampledModeNeedsSeed) {
  const Instance inst = make_instance(InstanceConfig{2, 3});
  SamplingConfig s;
  s.exact = false;
  EXPECT_THROW(racbem_benchmark(inst, s), Error);
  s.seed = 1;
  s.sigma = 1.5;
  EXPECT_THROW(racbem_benchmark(inst, s), Error);
}

TEST(Tasks, ExactModeIgnoresSeed) {
  const Instance inst = make_instance(InstanceConfig{3, 4});
  SamplingConfig a = exact_mode(), b = exact_mode();
  a.seed = 1;
  b.seed = 99;
  b.sigma = 0.0;
  EXPECT_EQ(linpack_run(inst, LinpackConfig{}, a).p_measured,
            linpack_run(inst, LinpackConfig{}, b).p_measured);
}

TEST(Tasks, SampledBenchmarkTracksExact) {
  const Instance inst = make_instance(InstanceConfig{3, 5});
  const BenchmarkReport r = racbem_benchmark(inst, sampled(3, 20000));
  const double sd = std::sqrt(r.p_exact * (1 - r.p_exact) / 20000.0);
  EXPECT_NEAR(r.p_measured, r.p_exact, 5 * sd);
  EXPECT_EQ(r.seed, 3u);
}

TEST(Tasks, LinpackWithinBound) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const BenchmarkReport r =
        linpack_run(make_instance(InstanceConfig{3, seed}), LinpackConfig{2.0, 6, {}}, exact_mode());
    EXPECT_TRUE(r.extra.at("within_bound").get<bool>()) << seed;
    EXPECT_TRUE(r.extra.at("lower_bound_holds").get<bool>()) << seed;
    EXPECT_LE(r.gate_count, r.gate_budget);
  }
}

TEST(Tasks, TimeSeriesAtZeroIsOne) {
  TimeSeriesConfig cfg;
  SeriesPoint p;
  p.t = 0.0;
  cfg.points = {p};
  const TimeSeriesResult r = time_series_run(make_instance(InstanceConfig{2, 6}), cfg, exact_mode());
  ASSERT_EQ(r.s.size(), 1u);
  EXPECT_NEAR(std::abs(r.s[0] - std::complex<double>(1.0, 0.0)), 0.0, 1e-10);
  EXPECT_EQ(r.reports.size(), 2u);
}

TEST(Tasks, SpectralDeviationWithinPolynomialError) {
  SpectralConfig cfg;
  cfg.energies = {0.0, 0.3, 0.6};
  cfg.degrees = {10, 10, 10};
  const SpectralResult r = spectral_run(make_instance(InstanceConfig{2, 7}), cfg, exact_mode());
  ASSERT_EQ(r.s.size(), 3u);
  for (std::size_t k = 0; k < r.s.size(); ++k) {
    EXPECT_GE(r.s[k], 0.0);
    EXPECT_LE(r.amplitude_deviation[k],
              r.reports[k].extra.at("poly_error").get<double>() + 1e-12);
  }
}

TEST(Tasks, MettsTraceEndsAtEstimate) {
  MettsConfig cfg;
  cfg.steps = 200;
  cfg.chains = 2;
  SamplingConfig s = exact_mode();
  s.seed = 3;
  const MettsResult r = metts_run(make_instance(InstanceConfig{2, 3}), cfg, s);
  ASSERT_EQ(r.trace.steps.size(), 400u);
  EXPECT_DOUBLE_EQ(r.trace.cma.back(), r.estimate);
  EXPECT_EQ(r.reports.size(), 1u);
  const MettsResult again = metts_run(make_instance(InstanceConfig{2, 3}), cfg, s);
  EXPECT_EQ(again.trace.cma, r.trace.cma);
}

TEST(Tasks, MettsTransitionsFollowImaginaryTimeCollapse) {
  // first instance whose collapse chain is irreducible
  const double beta = 2.0;
  Instance inst;
  Eigen::MatrixXd t;
  for (std::uint64_t seed = 2;; ++seed) {
    ASSERT_LT(seed, 40u);
    inst = make_instance(InstanceConfig{2, seed});
    t = metts_transitions(gram(inst), beta);
    Eigen::MatrixXd reach = (t.array() > 1e-9).cast<double>().matrix();
    reach += Eigen::MatrixXd::Identity(4, 4);
    if ((reach * reach * reach).minCoeff() > 0.0) break;
  }
  MettsConfig cfg;
  cfg.beta = beta;
  cfg.steps = 10000;
  cfg.chains = 2;
  SamplingConfig s = exact_mode();
  s.seed = 11;
  const MettsResult r = metts_run(inst, cfg, s);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(4, 4);
  for (const MettsStep& st : r.trace.steps)
    counts(static_cast<Eigen::Index>(st.state), static_cast<Eigen::Index>(st.next)) += 1.0;
  // Pearson statistic per row; cells expecting fewer than 5 are pooled
  double chi2 = 0.0;
  int dof = 0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    const double visits = counts.row(i).sum();
    double pool_obs = 0.0, pool_exp = 0.0;
    int cells = 0;
    for (Eigen::Index j = 0; j < 4; ++j) {
      const double e = visits * t(i, j);
      if (e < 5.0) {
        pool_obs += counts(i, j);
        pool_exp += e;
        continue;
      }
      chi2 += (counts(i, j) - e) * (counts(i, j) - e) / e;
      ++cells;
    }
    if (pool_exp > 0.0) {
      chi2 += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
      ++cells;
    }
    if (cells > 1) dof += cells - 1;
  }
  ASSERT_GT(dof, 0);
  const boost::math::chi_squared dist(dof);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 1e-3) << "chi2 " << chi2;
}

TEST(Tasks, ReportSerialization) {
  const BenchmarkReport r = racbem_benchmark(make_instance(InstanceConfig{2, 1}), exact_mode());
  const Json j = r.to_json();
  for (const char* k : {"task", "instance_seed", "seed", "params", "p_measured", "p_exact",
                        "relative_error", "gate_count", "gate_budget", "wall_time_s", "extra"})
    EXPECT_TRUE(j.contains(k)) << k;
  const std::string csv = to_csv({r, r});
  EXPECT_EQ(csv.rfind(csv_header(), 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(to_jsonl({r, r}).size(), 2 * (j.dump().size() + 1));
}

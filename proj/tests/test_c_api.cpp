#include <gtest/gtest.h>

#include <json.hpp>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "racbem/racbem.h"

using Json = nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  rb_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(rb_version(), "");
  EXPECT_STREQ(rb_status_name(RB_OK), "ok");
  EXPECT_STREQ(rb_status_name(RB_SCHEMA), "schema");
  EXPECT_STREQ(rb_status_name(static_cast<rb_status>(99)), "unknown");
}

TEST(CApi, NullPointersAreRejected) {
  EXPECT_EQ(rb_circuit_racbem(2, 0.5, 0, 1, nullptr), RB_INVALID_ARGUMENT);
  EXPECT_NE(std::string(rb_last_error()).find("null"), std::string::npos);
  EXPECT_EQ(rb_circuit_to_json(nullptr, nullptr), RB_INVALID_ARGUMENT);
  rb_circuit_free(nullptr);  // no-op
}

TEST(CApi, CircuitLifecycle) {
  rb_circuit* c = nullptr;
  ASSERT_EQ(rb_circuit_racbem(2, 0.5, 0, 7, &c), RB_OK);
  EXPECT_STREQ(rb_last_error(), "");
  int nq = 0;
  size_t depth = 0, gates = 0;
  ASSERT_EQ(rb_circuit_info(c, &nq, &depth, &gates), RB_OK);
  EXPECT_EQ(nq, 3);
  EXPECT_EQ(depth, 7u);
  EXPECT_GT(gates, 0u);

  char* json = nullptr;
  ASSERT_EQ(rb_circuit_to_json(c, &json), RB_OK);
  const std::string text = take(json);
  rb_circuit* back = nullptr;
  ASSERT_EQ(rb_circuit_from_json(text.c_str(), &back), RB_OK);
  ASSERT_EQ(rb_circuit_to_json(back, &json), RB_OK);
  EXPECT_EQ(take(json), text);

  char* txt = nullptr;
  ASSERT_EQ(rb_circuit_to_text(c, &txt), RB_OK);
  EXPECT_NE(take(txt).find("QUBITS 3"), std::string::npos);
  rb_circuit_free(back);
  rb_circuit_free(c);
}

TEST(CApi, BlockAndSuccessProbability) {
  rb_circuit* c = nullptr;
  ASSERT_EQ(rb_circuit_racbem(2, 0.5, 0, 3, &c), RB_OK);
  std::vector<double> buf(31);
  EXPECT_EQ(rb_circuit_block(c, buf.data(), buf.size()), RB_DIMENSION_MISMATCH);
  buf.resize(32);
  ASSERT_EQ(rb_circuit_block(c, buf.data(), buf.size()), RB_OK);
  // P(ancilla 0 | input 0) is the squared norm of block column 0
  double col0 = 0.0;
  for (int r = 0; r < 4; ++r) col0 += buf[8 * r] * buf[8 * r] + buf[8 * r + 1] * buf[8 * r + 1];
  double p = 0.0;
  ASSERT_EQ(rb_circuit_success_probability(c, 1, &p), RB_OK);
  EXPECT_NEAR(p, col0, 1e-13);
  EXPECT_EQ(rb_circuit_success_probability(c, 4, &p), RB_INVALID_ARGUMENT);
  rb_circuit_free(c);
}

TEST(CApi, CouplingGenerateValidate) {
  rb_coupling* m = nullptr;
  EXPECT_EQ(rb_coupling_bundled("nope", &m), RB_INVALID_ARGUMENT);
  ASSERT_EQ(rb_coupling_bundled("t5", &m), RB_OK);
  rb_circuit* c = nullptr;
  EXPECT_EQ(rb_circuit_generate(m, 0.5, 0, 1, &c), RB_INVALID_ARGUMENT);
  ASSERT_EQ(rb_circuit_generate(m, 0.5, 12, 1, &c), RB_OK);
  size_t violations = 1;
  ASSERT_EQ(rb_circuit_validate(c, m, &violations), RB_OK);
  EXPECT_EQ(violations, 0u);
  char* json = nullptr;
  ASSERT_EQ(rb_coupling_to_json(m, &json), RB_OK);
  EXPECT_EQ(Json::parse(take(json)).at("n_qubits"), 5);
  EXPECT_EQ(rb_coupling_from_json("{\"n_qubits\": 2, \"edges\": [[0, 5]]}", &m), RB_INVALID_ARGUMENT);
  rb_circuit_free(c);
  rb_coupling_free(m);
}

TEST(CApi, SamplingWithAndWithoutNoise) {
  rb_circuit* c = nullptr;
  ASSERT_EQ(rb_circuit_racbem(2, 0.5, 0, 5, &c), RB_OK);
  const int meas[] = {0, 1, 2};
  char* counts = nullptr;
  ASSERT_EQ(rb_circuit_sample(c, nullptr, 1.0, 500, meas, 3, 4, &counts), RB_OK);
  const Json ideal = Json::parse(take(counts));
  EXPECT_EQ(ideal.at("shots"), 500);
  rb_noise* noise = nullptr;
  ASSERT_EQ(rb_noise_synth(3, 2, &noise), RB_OK);
  ASSERT_EQ(rb_circuit_sample(c, noise, 0.0, 500, meas, 3, 4, &counts), RB_OK);
  EXPECT_EQ(Json::parse(take(counts)), ideal);  // sigma 0 is noiseless
  EXPECT_EQ(rb_circuit_sample(c, noise, 2.0, 500, meas, 3, 4, &counts), RB_INVALID_ARGUMENT);
  rb_noise* half = nullptr;
  ASSERT_EQ(rb_noise_scale(noise, 0.5, &half), RB_OK);
  char* json = nullptr;
  ASSERT_EQ(rb_noise_to_json(half, &json), RB_OK);
  EXPECT_EQ(Json::parse(take(json)).at("schema"), 1);
  EXPECT_EQ(rb_noise_from_json("{\"schema\": 7}", &half), RB_SCHEMA);
  rb_noise_free(half);
  rb_noise_free(noise);
  rb_circuit_free(c);
}

TEST(CApi, RemezAndPhaseFactors) {
  rb_poly* p = nullptr;
  double err = 0.0;
  ASSERT_EQ(rb_remez("{\"kind\": \"odd_gibbs\", \"beta\": 1}", 5, "odd", 0.0, 1.0, &p, &err), RB_OK);
  EXPECT_GT(err, 0.0);
  EXPECT_LT(err, 1e-2);
  double y = 0.0;
  ASSERT_EQ(rb_poly_eval(p, 0.5, &y), RB_OK);
  EXPECT_NEAR(y, 0.5 * std::exp(-0.125), err + 1e-12);
  int degree = 0;
  ASSERT_EQ(rb_poly_degree(p, &degree), RB_OK);
  EXPECT_EQ(degree, 5);
  char* out = nullptr;
  ASSERT_EQ(rb_phase_factors(p, &out), RB_OK);
  const Json j = Json::parse(take(out));
  EXPECT_EQ(j.at("phi").at("values").size(), 6u);
  EXPECT_EQ(j.at("varphi").at("convention"), "varphi");
  EXPECT_LT(j.at("phi").at("residual").get<double>(), 1e-20);
  EXPECT_EQ(rb_remez("{\"kind\": \"bogus\"}", 4, "even", 0.0, 1.0, &p, &err), RB_SCHEMA);
  EXPECT_EQ(rb_remez("{", 4, "even", 0.0, 1.0, &p, &err), RB_PARSE);
  rb_poly_free(p);
}

TEST(CApi, TaskRunEchoesConfig) {
  char* jsonl = nullptr;
  char* csv = nullptr;
  char* art = nullptr;
  ASSERT_EQ(rb_task_run("linpack", R"({"kappa": 2, "d": 2, "n": 3, "exact": true, "seed": 7})",
                        &jsonl, &csv, &art),
            RB_OK)
      << rb_last_error();
  const Json rec = Json::parse(take(jsonl));
  EXPECT_TRUE(rec.contains("relative_error"));
  EXPECT_EQ(rec.at("config").at("kappa"), 2.0);
  EXPECT_EQ(rec.at("config").at("depth"), "auto");
  EXPECT_EQ(take(csv).rfind("# config ", 0), 0u);
  EXPECT_TRUE(Json::parse(take(art)).contains("plan"));
}

TEST(CApi, TaskRunErrors) {
  EXPECT_EQ(rb_task_run("nope", "{}", nullptr, nullptr, nullptr), RB_INVALID_ARGUMENT);
  EXPECT_EQ(rb_task_run("linpack", "{\"kapa\": 2}", nullptr, nullptr, nullptr), RB_SCHEMA);
  EXPECT_EQ(rb_task_run("linpack", "{\"n\": \"three\", \"exact\": true}", nullptr, nullptr, nullptr),
            RB_SCHEMA);
  EXPECT_EQ(rb_task_run("linpack", "[1", nullptr, nullptr, nullptr), RB_PARSE);
  EXPECT_EQ(rb_task_run("linpack", "{\"n\": 3}", nullptr, nullptr, nullptr), RB_INVALID_ARGUMENT);
  EXPECT_EQ(rb_task_run("linpack", "{\"kappa\": 1, \"d\": 2, \"exact\": true}", nullptr, nullptr,
                        nullptr),
            RB_INFEASIBLE);
  EXPECT_EQ(rb_task_run("linpack", "{\"kappa\": 5, \"exact\": true}", nullptr, nullptr, nullptr),
            RB_INVALID_ARGUMENT);
}

TEST(CApi, ErrorMessageIsThreadLocal) {
  EXPECT_EQ(rb_task_run("nope", "{}", nullptr, nullptr, nullptr), RB_INVALID_ARGUMENT);
  std::string other = "unset";
  std::thread t([&] { other = rb_last_error(); });
  t.join();
  EXPECT_EQ(other, "");
  EXPECT_STRNE(rb_last_error(), "");
}

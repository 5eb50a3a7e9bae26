#include <gtest/gtest.h>

#include <cmath>

#include "racbem/block_encoding.hpp"
#include "racbem/error.hpp"
#include "racbem/random_circuit.hpp"
#include "test_util.hpp"

using namespace racbem;
using testutil::CMatrix;

namespace {

BlockEncoding instance(int n, std::uint64_t seed) {
  return racbem_from_circuit(generate(racbem_config(n, seed)));
}

// Upper-left 2^n x 2^n block of the dense oracle unitary.
CMatrix oracle_block(const QuantumCircuit& c, int m) {
  const Eigen::Index d = Eigen::Index{1} << (c.n_qubits() - m);
  return testutil::full_circuit(c).topLeftCorner(d, d);
}

}  // namespace

TEST(BlockEncoding, ExtractBlockMatchesUnitary) {
  for (int n = 1; n <= 4; ++n) {
    const BlockEncoding be = instance(n, 3 + static_cast<std::uint64_t>(n));
    EXPECT_EQ(be.n_sys, n);
    EXPECT_EQ(be.m, 1);
    EXPECT_LT(testutil::max_abs(extract_block(be) - oracle_block(be.circuit, 1)), 1e-12);
  }
}

TEST(BlockEncoding, QuadraticFromPhasesRoundTrip) {
  for (double phi0 : {0.1, 0.7, 1.3})
    for (double phi1 : {-0.9, 0.2, 1.1}) {
      const QuadraticH h = QuadraticH::from_phases(phi0, phi1);
      EXPECT_NEAR(h.a2, -2 * std::sin(2 * phi0) * std::sin(phi1), 1e-15);
      EXPECT_NEAR(h.a0, std::cos(2 * phi0 - phi1), 1e-15);
      const QuadraticH back = QuadraticH::from_coefficients(h.a2, h.a0);
      EXPECT_NEAR(back.a2, h.a2, 1e-12);
      EXPECT_NEAR(back.a0, h.a0, 1e-12);
    }
}

TEST(BlockEncoding, QuadraticPresets) {
  const QuadraticH c = QuadraticH::canonical();
  EXPECT_NEAR(c.a2, 1.0, 1e-14);
  EXPECT_NEAR(c.a0, 0.0, 1e-14);
  const QuadraticH k = QuadraticH::condition(5.0);
  EXPECT_NEAR(k.a2, 0.8, 1e-14);
  EXPECT_NEAR(k.a0, 0.2, 1e-14);
  EXPECT_NEAR(k.range().first, 0.2, 1e-14);
  EXPECT_NEAR(k.range().second, 1.0, 1e-14);
  EXPECT_NEAR(condition_bound(k), 5.0, 1e-12);
  EXPECT_THROW(QuadraticH::from_coefficients(0.5, 1.2), Error);
  EXPECT_THROW(QuadraticH::from_coefficients(0.8, 0.4), Error);
}

TEST(BlockEncoding, HermitianBlockIsQuadraticInA) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const BlockEncoding ua = instance(2, seed);
    const CMatrix a = extract_block(ua);
    const QuadraticH h = QuadraticH::from_phases(0.4, -0.7);
    const BlockEncoding hb = build_hracbem(ua, h.phi0, h.phi1);
    EXPECT_EQ(hb.m, 2);
    const CMatrix want = h.a2 * a.adjoint() * a + h.a0 * CMatrix::Identity(4, 4);
    EXPECT_LT(testutil::max_abs(oracle_block(hb.circuit, 2) - want), 1e-12) << seed;
  }
}

TEST(BlockEncoding, CanonicalBlockIsGram) {
  const BlockEncoding ua = instance(3, 11);
  const CMatrix a = extract_block(ua);
  const BlockEncoding hb = build_canonical_hracbem(ua);
  EXPECT_LT(testutil::max_abs(extract_block(hb) - a.adjoint() * a), 1e-12);
}

TEST(BlockEncoding, ControlledRotationIsOpenControlled) {
  QuantumCircuit c(2);
  append_controlled_rotation(c, 0, 1, 0.3);
  EXPECT_EQ(c.gate_total(), 7u);
  const CMatrix u = testutil::full_circuit(c);
  const std::complex<double> i(0, 1);
  // index = 2 q0 + q1; ancilla q1 = 0 gives e^{+i theta Z} on q0
  EXPECT_LT(testutil::max_abs(u - u.diagonal().asDiagonal().toDenseMatrix()), 1e-14);
  EXPECT_NEAR(std::abs(u(0, 0) - std::exp(i * 0.3)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(u(2, 2) - std::exp(-i * 0.3)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(u(1, 1) - std::exp(-i * 0.3)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(u(3, 3) - std::exp(i * 0.3)), 0.0, 1e-13);
}

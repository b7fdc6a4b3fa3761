#include <doctest.h>

#include <cmath>

#include "pentadot/encoding.hpp"

using namespace pentadot;

TEST_CASE("valence-bond states") {
  const SectorBasis b(5, 2, 2);
  const SparseOperator s2 = assemble_s2(b);
  const SparseOperator n0 = number_operator(b, 0);
  for (const Pairing* p : {&kPairingA_a, &kPairingA_b, &kPairingA_c}) {
    const ValenceBondState v = vb_state(*p, b);
    CHECK(v.vector.norm() == doctest::Approx(1.0));
    CHECK(std::abs(s2.expectation(v.vector)) < 1e-13);
    CHECK(std::abs(n0.expectation(v.vector)) < 1e-15);
  }
  const Eigen::VectorXcd a = vb_state(kPairingA_a, b).vector;
  const Eigen::VectorXcd bb = vb_state(kPairingA_b, b).vector;
  const Eigen::VectorXcd c = vb_state(kPairingA_c, b).vector;
  CHECK(std::abs(a.dot(bb)) == doctest::Approx(0.5));
  CHECK(std::abs(a.dot(c)) == doctest::Approx(0.5));
  CHECK(std::abs(bb.dot(c)) == doctest::Approx(0.5));
  // The three pairings span only two dimensions.
  CHECK((a - (bb - c)).norm() < 1e-14);

  const ValenceBondGeometry geo = valence_bond_geometry(b);
  CHECK(std::abs(geo.smallest_gram_eigenvalue) < 1e-14);
  CHECK(geo.one_state_norm == doctest::Approx(std::sqrt(3.0)));
  CHECK(std::abs((bb + c).dot(a)) < 1e-14);

  // With the center doubly occupied the same geometry holds in (3,3).
  const ValenceBondGeometry six = valence_bond_geometry(SectorBasis(5, 3, 3), {0});
  CHECK(six.one_state_norm == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("singlet bond sign convention") {
  // (i<j): +|up_i dn_j>, -|dn_i up_j>, with creation operators by ascending dot.
  const SectorBasis b(2, 1, 1);
  const Eigen::VectorXcd v = vb_state({{0, 1}}, b).vector;
  const std::size_t ud = b.index(FockState{0b01, 0b10}).value();
  const std::size_t du = b.index(FockState{0b10, 0b01}).value();
  CHECK(std::abs(v(ud) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(v(du) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(vb_state({{1, 0}}, b).vector.isApprox(v));
}

TEST_CASE("invalid matchings are rejected") {
  const SectorBasis b(5, 2, 2);
  CHECK_THROWS_AS(vb_state({{1, 2}, {2, 3}}, b), std::invalid_argument);
  CHECK_THROWS_AS(vb_state({{1, 1}, {3, 4}}, b), std::invalid_argument);
  CHECK_THROWS_AS(vb_state({{1, 7}, {3, 4}}, b), std::invalid_argument);
  CHECK_THROWS_AS(vb_state({{1, 2}}, b), std::invalid_argument);
  CHECK_THROWS_AS(vb_state({{1, 2}, {3, 4}}, SectorBasis(5, 3, 3), {1}), std::invalid_argument);
}

TEST_CASE("encoded single qubit") {
  const QubitSetup q = encode_single_qubit(five_dot(-1, 8, 0));
  const Eigen::MatrixXcd& v = q.encoded.vectors;
  REQUIRE(q.encoded.rank() == 2);
  CHECK(q.encoded.basis_tag == "fock:5:2:2");
  CHECK((v.adjoint() * v - Eigen::Matrix2cd::Identity()).norm() < 1e-12);
  CHECK(q.idle_energy == doctest::Approx(-2.48939598971).epsilon(1e-10));

  // Both vectors lie in the ground space.
  const Eigen::MatrixXcd g = q.ground.ground_vectors();
  for (int k = 0; k < 2; ++k) {
    CHECK((g * (g.adjoint() * v.col(k)) - v.col(k)).norm() < 1e-10);
    CHECK(std::abs(q.s2.expectation(v.col(k))) < 1e-10);
  }

  const SparseOperator p12 = exchange_parity(transposition(5, 1, 2), q.basis);
  const SparseOperator p34 = exchange_parity(transposition(5, 3, 4), q.basis);
  CHECK(p12.expectation(v.col(0)) == doctest::Approx(-1.0));
  CHECK(p34.expectation(v.col(0)) == doctest::Approx(-1.0));
  CHECK(p12.expectation(v.col(1)) == doctest::Approx(1.0));
  CHECK(p34.expectation(v.col(1)) == doctest::Approx(1.0));
  CHECK(q.encoded.gauge.parity_values[0] == std::vector<int>{-1, -1});
  CHECK(q.encoded.gauge.parity_values[1] == std::vector<int>{1, 1});

  // Phase convention: real positive overlaps with the valence-bond references.
  const Eigen::VectorXcd a = vb_state(kPairingA_a, q.basis).vector;
  const cplx o0 = a.dot(v.col(0));
  CHECK(std::abs(o0.imag()) < 1e-12);
  CHECK(o0.real() == doctest::Approx(0.6100262101).epsilon(1e-9));
  CHECK(q.encoded.gauge.reference_overlaps[0] == doctest::Approx(0.6100262101).epsilon(1e-9));
  const Eigen::VectorXcd r1 = vb_state(kPairingA_b, q.basis).vector + vb_state(kPairingA_c, q.basis).vector;
  const cplx o1 = r1.dot(v.col(1));
  CHECK(std::abs(o1.imag()) < 1e-12);
  CHECK(o1.real() > 0.0);

  // Projected onto the ground space, the valence-bond picture is close to the encoded one.
  const Eigen::VectorXcd pa = g * (g.adjoint() * a);
  CHECK(std::abs(pa.dot(v.col(0))) / pa.norm() > 0.9);
}

TEST_CASE("six-electron encoding") {
  const QubitSetup q = encode_single_qubit(five_dot(-1, 8, 0), 6);
  REQUIRE(q.encoded.rank() == 2);
  CHECK(q.encoded.basis_tag == "fock:5:3:3");
  CHECK(q.idle_energy == doctest::Approx(5.51060401029).epsilon(1e-10));
  CHECK(q.ground.ground().spin == doctest::Approx(0.0));
  CHECK_THROWS_AS(encode_single_qubit(five_dot(-1, 8, 0), 5), std::invalid_argument);
}

TEST_CASE("gauge is independent of the solver seed") {
  SolverOptions o;
  o.dense_threshold = 0;
  o.seed = 5;
  const QubitSetup a = encode_single_qubit(five_dot(-1, 8, 0), 4, o);
  o.seed = 77777;
  const QubitSetup b = encode_single_qubit(five_dot(-1, 8, 0), 4, o);
  CHECK((a.encoded.vectors - b.encoded.vectors).norm() < 1e-8);
  const QubitSetup d = encode_single_qubit(five_dot(-1, 8, 0));
  CHECK((a.encoded.vectors - d.encoded.vectors).norm() < 1e-8);
}

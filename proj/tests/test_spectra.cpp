#include <doctest.h>

#include <cmath>

#include "pentadot/spectra.hpp"

using namespace pentadot;

namespace {

SolverOptions force_lanczos(std::uint64_t seed = 20031) {
  SolverOptions o;
  o.dense_threshold = 0;
  o.seed = seed;
  return o;
}

Eigen::MatrixXcd projector(const Eigen::MatrixXcd& v) { return v * v.adjoint(); }

}  // namespace

TEST_CASE("diagonal operator") {
  CsrMatrix m(4, 4);
  m.insert(0, 0) = 3.0;
  m.insert(1, 1) = -1.0;
  m.insert(2, 2) = 2.0;
  m.insert(3, 3) = 0.5;
  m.makeCompressed();
  const Spectrum s = lowest_k(SparseOperator(m, "diag"), 2);
  CHECK(s.method == "dense");
  CHECK(s.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(0.5));
  CHECK(std::abs(s.eigenvectors(1, 0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(lowest_k(SparseOperator(m, "diag"), 5), std::invalid_argument);
}

TEST_CASE("five-dot (2,2) sector: twofold singlet ground state") {
  const SectorBasis b(5, 2, 2);
  const SparseOperator h = assemble_hubbard(five_dot(-1, 8, 0), b);
  const Spectrum s = lowest_k(h, 3);
  REQUIRE(s.eigenvalues.size() == 3);
  CHECK(s.eigenvalues[0] == doctest::Approx(-2.48939598971).epsilon(1e-10));
  CHECK(s.eigenvalues[1] - s.eigenvalues[0] < 1e-10);
  CHECK(s.eigenvalues[2] - s.eigenvalues[1] == doctest::Approx(0.11288064597910585).epsilon(1e-8));
  for (double r : s.residuals) CHECK(r < 1e-10);
  CHECK((s.eigenvectors.adjoint() * s.eigenvectors - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-12);

  for (auto [u, d] : {std::pair{2, 2}, {3, 3}}) {
    const SectorBasis bb(5, u, d);
    const DegeneracyReport rep = classify_ground_space(assemble_hubbard(five_dot(-1, 8, 0), bb), assemble_s2(bb), 6);
    CHECK(rep.ground().multiplicity == 2);
    CHECK(rep.ground().spin == doctest::Approx(0.0));
    CHECK(rep.ground().pure_spin);
    CHECK(rep.gap_to_next > 0.1);
    CHECK_FALSE(rep.ambiguous);
    CHECK(rep.ground_vectors().cols() == 2);
  }
}

TEST_CASE("Heisenberg clusters") {
  const SparseOperator h = assemble_heisenberg(uniform_couplings(4, 1.0), 4);
  const DegeneracyReport rep = classify_ground_space(h, assemble_spin_s2(4), 16);
  REQUIRE(rep.clusters.size() == 3);
  CHECK(rep.clusters[0].multiplicity == 2);
  CHECK(rep.clusters[1].multiplicity == 9);
  CHECK(rep.clusters[2].multiplicity == 5);
  CHECK(rep.clusters[0].spin == doctest::Approx(0.0));
  CHECK(rep.clusters[1].spin == doctest::Approx(1.0));
  CHECK(rep.clusters[2].spin == doctest::Approx(2.0));
  CHECK(rep.clusters[2].complete);
  CHECK(spin_from_s2(0.75) == doctest::Approx(0.5));
  CHECK(spin_from_s2(6.0) == doctest::Approx(2.0));
}

TEST_CASE("Lanczos agrees with dense diagonalization on every five-dot sector") {
  const DeviceGraph g = five_dot(-1, 8, 0.3, -0.5);
  for (int u = 0; u <= 5; ++u) {
    for (int d = 0; d <= 5; ++d) {
      const SectorBasis b(5, u, d);
      const SparseOperator h = assemble_hubbard(g, b);
      const std::size_t k = std::min<std::size_t>(b.size(), 4);
      const Spectrum dense = lowest_k_dense(h, k);
      for (std::uint64_t seed : {20031ull, 1ull, 2ull, 3ull}) {
        const Spectrum lz = lowest_k_lanczos(h, k, force_lanczos(seed));
        REQUIRE(lz.eigenvalues.size() == k);
        for (std::size_t i = 0; i < k; ++i) CHECK(std::abs(lz.eigenvalues[i] - dense.eigenvalues[i]) < 1e-9);
        for (double r : lz.residuals) CHECK(r <= 1e-10);
        const auto kk = static_cast<Eigen::Index>(k);
        CHECK((lz.eigenvectors.adjoint() * lz.eigenvectors - Eigen::MatrixXcd::Identity(kk, kk)).norm() < 1e-10);
      }
    }
  }
}

TEST_CASE("Lanczos on a sector above the dense threshold") {
  const DeviceGraph g = two_qubit_device(-1, 8, 0, default_coupling_edges());
  const SectorBasis b(10, 2, 2);  // dim 2025
  const SparseOperator h = assemble_hubbard(g, b);
  const Spectrum lz = lowest_k(h, 3);
  CHECK(lz.method == "lanczos");
  const Spectrum dense = lowest_k_dense(h, 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(lz.eigenvalues[i] - dense.eigenvalues[i]) < 1e-9);
}

TEST_CASE("eigenvalues and degenerate projectors do not depend on the seed") {
  const SectorBasis b(5, 2, 2);
  const SparseOperator h = assemble_hubbard(five_dot(-1, 8, 0), b);
  const Spectrum a = lowest_k_lanczos(h, 2, force_lanczos(1));
  const Spectrum c = lowest_k_lanczos(h, 2, force_lanczos(987654321));
  CHECK(a.seed == 1);
  CHECK(c.seed == 987654321);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a.eigenvalues[i] - c.eigenvalues[i]) < 1e-10);
  CHECK((projector(a.eigenvectors) - projector(c.eigenvectors)).norm() < 1e-8);
}

TEST_CASE("exhausted matvec budget raises SolverError") {
  const SectorBasis b(5, 2, 2);
  const SparseOperator h = assemble_hubbard(five_dot(-1, 8, 0), b);
  SolverOptions o = force_lanczos();
  o.max_matvecs = 5;
  try {
    lowest_k_lanczos(h, 2, o);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.best_residual() > 0.0);
  }
}

TEST_CASE("classify rejects a mismatched S^2 operator") {
  const SparseOperator h = assemble_hubbard(five_dot(-1, 8, 0), SectorBasis(5, 2, 2));
  CHECK_THROWS_AS(classify_ground_space(h, assemble_s2(SectorBasis(5, 3, 1)), 3), std::invalid_argument);
}

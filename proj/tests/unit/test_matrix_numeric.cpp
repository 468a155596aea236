#include "doctest.h"

#include <cmath>

#include "fdalg/errors.hpp"
#include "fdalg/matrix_numeric.hpp"
#include "fdalg/parallel.hpp"
#include "oracles.hpp"

using namespace fdalg;

namespace {

BlockStructure bs(std::vector<int> v) { return BlockStructure(std::move(v)); }

double max_abs(const CMatrix& m) { return static_cast<double>(m.cwiseAbs().maxCoeff()); }

// Block unitary of B1: an independent Haar unitary in each block of the model.
CMatrix block_unitary(const EmbeddedAlgebra& e, Rng& rng) {
  const int m = e.structure().block_sum();
  CMatrix w = CMatrix::Zero(m, m);
  int pos = 0;
  for (int j = 0; j < e.structure().size(); ++j) {
    const int b = e.structure()[j];
    w.block(pos, pos, b, b) = haar_unitary(b, rng);
    pos += b;
  }
  return embed_block_diagonal(e.structure(), e.mult(), w);
}

}  // namespace

TEST_CASE("realize") {
  const auto c2 = realize(EmbeddedAlgebra(2, bs({1, 1}), {1, 1}));
  REQUIRE(c2.generators.size() == 2);
  CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  CHECK(max_abs(c2.generators[0] - p0) == 0.0);
  CHECK(max_abs(c2.generators[1] - p1) == 0.0);

  const auto m2 = realize(EmbeddedAlgebra(4, bs({2}), {2}));
  CHECK(m2.dim() == 4);
  CHECK(commutant_dim(m2.generators) == 4);
  CHECK(closure_defect(m2) < 1e-15);

  const auto scalars = realize(EmbeddedAlgebra(3, bs({1}), {3}));
  REQUIRE(scalars.dim() == 1);
  CHECK(max_abs(scalars.basis[0] - CMatrix::Identity(3, 3) / std::sqrt(3.0L)) < 1e-15);
}

TEST_CASE("realized bases are orthonormal and generators generate") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& e : enumerate_embedded_algebras(n)) {
      const auto r = realize(e);
      const CMatrix q = r.basis_matrix();
      CHECK(max_abs(q.adjoint() * q - CMatrix::Identity(q.cols(), q.cols())) < 1e-15);
      CHECK(r.dim() == e.structure().algebra_dim());
      // The commutant of the generators equals the commutant of the whole basis.
      CHECK(commutant_dim(r.generators) == commutant_dim(r.basis));
    }
}

TEST_CASE("numeric commutant dimension equals sum of squared multiplicities up to N = 6") {
  for (int n = 1; n <= 6; ++n)
    for (const auto& e : enumerate_embedded_algebras(n)) {
      const auto rc = relative_commutant(e.as_matrix());
      CHECK_MESSAGE(commutant_dim(realize(e).generators) == rc.algebra_dim(), e.to_string());
    }
}

TEST_CASE("haar_unitary") {
  const auto u1 = haar_unitary(1, std::uint64_t{3});
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0L) < 1e-15L);
  const auto a = haar_unitary(5, std::uint64_t{99});
  const auto b = haar_unitary(5, std::uint64_t{99});
  CHECK(max_abs(a - b) == 0.0);
  CHECK(unitarity_defect(a) <= 1e-12);
  CHECK_THROWS_AS(haar_unitary(0, std::uint64_t{1}), DomainError);

  // First and second moments: E[u11] = 0 and E|u11|^2 = 1/n.
  const int n = 3, samples = 10000;
  Complex mean = 0;
  Real second = 0;
  for (int i = 0; i < samples; ++i) {
    Rng rng = make_rng(17, Stream::haar, static_cast<std::uint64_t>(i));
    const auto u = haar_unitary(n, rng);
    mean += u(0, 0);
    second += std::norm(u(0, 0));
  }
  CHECK(static_cast<double>(std::abs(mean / Real(samples))) < 0.05);
  CHECK(static_cast<double>(second / samples) == doctest::Approx(1.0 / n).epsilon(0.05));
}

TEST_CASE("local_unitary stays within the radius") {
  Rng rng(4);
  const CMatrix center = haar_unitary(4, rng);
  for (double r : {1e-3, 0.1, 1.0}) {
    const auto u = local_unitary(center, r, rng);
    CHECK(unitarity_defect(u) <= 1e-12);
    CHECK(operator_norm(u - center) <= r);
  }
  CHECK_THROWS_AS(local_unitary(center, 0.0, rng), DomainError);
}

TEST_CASE("commutant_basis") {
  const int n = 3;
  std::vector<CMatrix> units;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      CMatrix e = CMatrix::Zero(n, n);
      e(a, b) = 1;
      units.push_back(e);
    }
  CHECK(commutant_dim(units) == 1);
  const std::vector<CMatrix> id = {CMatrix::Identity(n, n)};
  CHECK(commutant_dim(id) == n * n);
  const auto comm = commutant_basis(realize(EmbeddedAlgebra(4, bs({2}), {2})).generators);
  CHECK(comm.dim() == 4);
  CHECK(closure_defect(comm) < 1e-12);
  CHECK_THROWS_AS(commutant_basis(std::span<const CMatrix>{}), DomainError);
}

TEST_CASE("intersect") {
  const auto c2 = realize(EmbeddedAlgebra(2, bs({1, 1}), {1, 1}));
  CHECK(intersect(c2, c2).dim() == 2);
  const auto rotated = conjugate(c2, oracle::rotation(M_PI / 4));
  CHECK(intersect(c2, rotated).dim() == 1);

  const auto m2m2 = realize(EmbeddedAlgebra(4, bs({2, 2}), {1, 1}));
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto u = haar_unitary(4, s);
    const auto moved = conjugate(m2m2, u);
    const int d = intersect(m2m2, moved).dim();
    CHECK(d >= 2);
    CHECK(d == intersect(moved, m2m2).dim());
  }
  CHECK_THROWS_AS(intersect(c2, m2m2), ShapeError);
}

TEST_CASE("intersection dimension is invariant under B1's own unitaries") {
  const std::vector<std::pair<EmbeddedAlgebra, EmbeddedAlgebra>> pairs = {
      {EmbeddedAlgebra(4, bs({2}), {2}), EmbeddedAlgebra(4, bs({2}), {2})},
      {EmbeddedAlgebra(4, bs({2, 2}), {1, 1}), EmbeddedAlgebra(4, bs({2, 2}), {1, 1})},
      {EmbeddedAlgebra(6, bs({3, 3}), {1, 1}), EmbeddedAlgebra(6, bs({2, 2, 2}), {1, 1, 1})},
  };
  Rng rng(21);
  for (const auto& [b1, b2] : pairs) {
    const auto r1 = realize(b1), r2 = realize(b2);
    for (int i = 0; i < 5; ++i) {
      const auto u = haar_unitary(b1.ambient_dim(), rng);
      const auto w = block_unitary(b1, rng);
      CHECK(intersect(r1, conjugate(r2, u)).dim() == intersect(r1, conjugate(r2, w * u)).dim());
    }
  }
}

TEST_CASE("nullspace rank decisions") {
  CMatrix sys = CMatrix::Zero(3, 3);
  sys(0, 0) = 1;
  sys(1, 1) = 1;
  RankDecision rd;
  const auto ns = nullspace(sys, 3, {}, &rd);
  CHECK(ns.cols() == 1);
  CHECK(rd.nullity == 1);
  CHECK(rd.singular_values.size() == 3);

  // A singular value a few times the tolerance trips the stability guard.
  CMatrix close = CMatrix::Zero(2, 2);
  close(0, 0) = 1;
  close(1, 1) = 4.0L * 4 * std::numeric_limits<double>::epsilon();
  CHECK_THROWS_AS(nullspace(close, 2, {}, nullptr), NumericalInstability);
  NumericOptions loose;
  loose.check_rank_gap = false;
  CHECK(nullspace(close, 2, loose, nullptr).cols() == 0);
  NumericOptions explicit_tol;
  explicit_tol.tolerance = 1e-3;
  CHECK(nullspace(close, 2, explicit_tol, nullptr).cols() == 1);
}

TEST_CASE("density_experiment") {
  const EmbeddedAlgebra m2x2(4, bs({2}), {2});
  const auto s = density_experiment(m2x2, m2x2, 200, 1);
  CHECK(s.trivial_count == 200);
  CHECK(s.dims_histogram.at(1) == 200);

  LocalMode local{CMatrix::Identity(4, 4), 1e-3};
  const auto l = density_experiment(m2x2, m2x2, 200, 1, local);
  CHECK(l.trivial_count == 200);
  CHECK(l.radius == 1e-3);

  const EmbeddedAlgebra m2m2(4, bs({2, 2}), {1, 1});
  const auto neg = density_experiment(m2m2, m2m2, 200, 1);
  CHECK(neg.trivial_count == 0);
  CHECK(neg.min_dim() == 2);
  int total = 0;
  for (const auto& [d, c] : neg.dims_histogram) total += c;
  CHECK(total == 200);

  CHECK_THROWS_AS(density_experiment(m2x2, m2x2, 0, 1), DomainError);
  CHECK_THROWS_AS(density_experiment(m2x2, m2x2, 5, 1, LocalMode{CMatrix::Identity(4, 4), -1.0}), DomainError);
}

TEST_CASE("density_experiment is independent of the thread count") {
  const EmbeddedAlgebra m2m2(4, bs({2, 2}), {1, 1});
  const EmbeddedAlgebra m2x2(4, bs({2}), {2});
  const auto a = density_experiment(m2m2, m2x2, 40, 77, std::nullopt, {}, 1);
  const auto b = density_experiment(m2m2, m2x2, 40, 77, std::nullopt, {}, 4);
  CHECK(a.sample_dims == b.sample_dims);
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  std::vector<int> out(10, 0);
  CHECK_THROWS_WITH(parallel_for(10, 3,
                                 [&](std::size_t i) {
                                   if (i == 4 || i == 7) throw std::runtime_error(std::to_string(i));
                                   out[i] = 1;
                                 }),
                    "4");
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, Stream::haar, 0) != derive_seed(1, Stream::density, 0));
  CHECK(derive_seed(1, Stream::haar, 0) != derive_seed(1, Stream::haar, 1));
  CHECK(derive_seed(5, Stream::dpi, 9) == derive_seed(5, Stream::dpi, 9));
}

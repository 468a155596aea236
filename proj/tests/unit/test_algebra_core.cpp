#include "doctest.h"

#include <algorithm>
#include <set>

#include "fdalg/algebra_core.hpp"
#include "fdalg/errors.hpp"
#include "fdalg/matrix_numeric.hpp"
#include "oracles.hpp"

using namespace fdalg;

namespace {

BlockStructure bs(std::vector<int> v) { return BlockStructure(std::move(v)); }

std::vector<EmbeddedAlgebra> all_up_to(int n_max) {
  std::vector<EmbeddedAlgebra> out;
  for (int n = 1; n <= n_max; ++n)
    for (auto& e : enumerate_embedded_algebras(n)) out.push_back(e);
  return out;
}

}  // namespace

TEST_CASE("block structure dimensions") {
  const auto b = bs({2, 3, 1});
  CHECK(b.algebra_dim() == 14);
  CHECK(b.unitary_dim() == 14);
  CHECK(b.center_dim() == 3);
  CHECK(b.block_sum() == 6);
  CHECK_FALSE(b.is_abelian());
  CHECK(bs({1, 1}).is_abelian());
  CHECK(BlockStructure::full(3).is_simple());
  CHECK(b.sorted() == bs({3, 2, 1}));
  CHECK(b != bs({3, 2, 1}));
  CHECK(b.isomorphic(bs({1, 2, 3})));
  CHECK_THROWS_AS(bs({}), DomainError);
  CHECK_THROWS_AS(bs({2, 0}), DomainError);
}

TEST_CASE("multiplicity matrix predicates") {
  MultiplicityMatrix mu(bs({1, 1}), bs({2, 2}), {2, 0, 1, 1});
  CHECK(mu.unital());
  CHECK(mu.injective());
  CHECK(mu.sum_of_squares() == 6);
  MultiplicityMatrix zero_col(bs({1, 1}), bs({2, 2}), {2, 0, 2, 0});
  CHECK(zero_col.unital());
  CHECK_FALSE(zero_col.injective());
  MultiplicityMatrix bad(bs({1, 1}), bs({2}), {1, 2});
  CHECK_FALSE(bad.unital());
}

TEST_CASE("embedded algebra invariants") {
  CHECK_NOTHROW(EmbeddedAlgebra(7, bs({2, 3}), {2, 1}));
  CHECK_THROWS_AS(EmbeddedAlgebra(6, bs({2, 3}), {2, 1}), DomainError);
  CHECK_THROWS_AS(EmbeddedAlgebra(3, bs({2, 3}), {0, 1}), DomainError);
  CHECK_THROWS(EmbeddedAlgebra(4, bs({2}), {1, 1}));
  CHECK_FALSE(EmbeddedAlgebra(2, bs({2}), {1}).is_proper());
  CHECK(EmbeddedAlgebra(4, bs({2}), {2}).is_proper());
}

TEST_CASE("compose_multiplicities") {
  SUBCASE("identity outer") {
    MultiplicityMatrix outer(bs({3}), bs({3}), {1});
    MultiplicityMatrix inner(bs({1, 1}), bs({3}), {1, 2});
    CHECK(compose_multiplicities(outer, inner).entries() == std::vector<int>{1, 2});
  }
  SUBCASE("M3 inside M6 carrying C^2") {
    MultiplicityMatrix outer(bs({3}), bs({6}), {2});
    MultiplicityMatrix inner(bs({1, 1}), bs({3}), {1, 2});
    const auto c = compose_multiplicities(outer, inner);
    CHECK(c.entries() == std::vector<int>{2, 4});
    CHECK(c.source() == bs({1, 1}));
    CHECK(c.target() == bs({6}));
    CHECK(c.unital());
    // independent dot product
    CHECK(c.at(0, 0) * 1 + c.at(0, 1) * 1 == 6);
  }
  SUBCASE("block ranks of the realized composite") {
    // Realize C^2 -> M3 -> M6 numerically and read the rank of each minimal projection.
    const EmbeddedAlgebra m3(6, bs({3}), {2});
    const auto cls = make_class(m3, MultiplicityMatrix(bs({1, 1}), bs({3}), {1, 2}));
    const auto real = realize_class(cls);
    std::vector<int> ranks;
    for (const auto& g : real.generators) ranks.push_back(static_cast<int>(std::lround(static_cast<double>(g.trace().real()))));
    std::sort(ranks.begin(), ranks.end());
    CHECK(ranks == std::vector<int>{2, 4});
  }
  SUBCASE("mismatch") {
    MultiplicityMatrix outer(bs({3}), bs({6}), {2});
    MultiplicityMatrix inner(bs({1, 1}), bs({2}), {1, 1});
    CHECK_THROWS_AS(compose_multiplicities(outer, inner), ShapeError);
  }
}

TEST_CASE("relative_commutant and center_restriction") {
  CHECK(relative_commutant(EmbeddedAlgebra(4, bs({2}), {2}).as_matrix()) == bs({2}));
  CHECK(relative_commutant(MultiplicityMatrix(bs({1, 1}), bs({1, 1}), {1, 0, 0, 1})) == bs({1, 1}));
  CHECK(relative_commutant(EmbeddedAlgebra(4, bs({1, 1}), {2, 2}).as_matrix()) == bs({2, 2}));
  CHECK_THROWS_AS(relative_commutant(MultiplicityMatrix(bs({1, 1}), bs({2}), {1, 2})), DomainError);

  const auto c = center_restriction(EmbeddedAlgebra(7, bs({2, 3}), {2, 1}));
  CHECK(c.structure() == bs({1, 1}));
  CHECK(c.mult() == std::vector<int>{4, 3});
  CHECK(c.ambient_dim() == 7);
  CHECK(center_restriction(EmbeddedAlgebra(5, bs({1, 1, 1}), {1, 2, 2})).mult() == std::vector<int>{1, 2, 2});
  CHECK(center_restriction(EmbeddedAlgebra(6, bs({3}), {2})).mult() == std::vector<int>{6});
}

TEST_CASE("center_restriction matches ranks of realized central projections") {
  for (const auto& e : all_up_to(6)) {
    const auto c = center_restriction(e);
    const auto real = realize(e);
    // Central projection j is the sum of the diagonal units of block j.
    int offset = 0;
    for (int j = 0; j < e.structure().size(); ++j) {
      const int b = e.structure()[j];
      CMatrix p = CMatrix::Zero(e.structure().block_sum(), e.structure().block_sum());
      for (int a = 0; a < b; ++a) p(offset + a, offset + a) = 1;
      offset += b;
      CHECK(oracle::numeric_rank(embed_block_diagonal(e.structure(), e.mult(), p)) == c.mult()[static_cast<std::size_t>(j)]);
    }
  }
}

TEST_CASE("enumerate_unital_embeddings") {
  CHECK(enumerate_unital_embeddings(bs({1}), bs({2})).size() == 1);
  CHECK(enumerate_unital_embeddings(bs({1}), bs({2}))[0].entries() == std::vector<int>{2});
  const auto c2m2 = enumerate_unital_embeddings(bs({1, 1}), bs({2}));
  REQUIRE(c2m2.size() == 1);
  CHECK(c2m2[0].entries() == std::vector<int>{1, 1});

  const auto list = enumerate_unital_embeddings(bs({1, 1}), bs({2, 2}));
  std::set<std::vector<int>> got;
  for (const auto& m : list) got.insert(m.entries());
  CHECK(got.count({1, 1, 1, 1}));
  CHECK(got.count({2, 0, 0, 2}));
  CHECK(got.count({0, 2, 2, 0}));
  CHECK(got.count({2, 0, 1, 1}));
  CHECK(list.size() == 7);  // 3 x 3 row choices minus the two with a zero column
}

TEST_CASE("enumerate_unital_embeddings agrees with brute force") {
  for (const auto& b : oracle::candidate_structures(5, 5))
    for (const auto& c : oracle::candidate_structures(b.block_sum(), 5)) {
      const auto got = enumerate_unital_embeddings(c, b);
      const auto want = oracle::brute_embeddings(c, b);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].entries() == want[i]);
    }
}

TEST_CASE("enumerate_embedded_algebras counts") {
  // Multisets of (block, multiplicity) pairs with sum of products n.
  const std::vector<std::size_t> expected = {1, 3, 5, 11, 17, 34};
  for (int n = 1; n <= 6; ++n) CHECK(enumerate_embedded_algebras(n).size() == expected[static_cast<std::size_t>(n - 1)]);
}

TEST_CASE("subalgebra classes: small cases") {
  const EmbeddedAlgebra m2x2(4, bs({2}), {2});
  const auto cls = enumerate_subalgebra_classes(m2x2);
  REQUIRE(cls.size() == 3);
  CHECK(cls[0].structure == bs({1}));
  CHECK(cls[1].structure == bs({1, 1}));
  CHECK(cls[1].embedding.entries() == std::vector<int>{1, 1});
  CHECK(cls[2].structure == bs({2}));
  CHECK(enumerate_subalgebra_classes(EmbeddedAlgebra(3, bs({1}), {3})).size() == 1);

  const auto mm = enumerate_subalgebra_classes(EmbeddedAlgebra(4, bs({2, 2}), {1, 1}));
  CHECK(mm.size() == 15);
  std::set<std::vector<int>> structures;
  for (const auto& c : mm) structures.insert(std::vector<int>(c.structure.blocks().begin(), c.structure.blocks().end()));
  for (auto want : std::vector<std::vector<int>>{{1}, {1, 1}, {1, 1, 1}, {1, 1, 1, 1}, {2}, {2, 1, 1}, {2, 2}})
    CHECK(structures.count(want));
}

TEST_CASE("subalgebra class counts agree with permutation-minimum recount") {
  for (const auto& e : all_up_to(6)) {
    const auto cls = enumerate_subalgebra_classes(e);
    CHECK_MESSAGE(static_cast<int>(cls.size()) == oracle::brute_class_count(e.structure()), e.to_string());
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (const auto& c : cls) {
      CHECK(c.canonical);
      CHECK(c.embedding.unital());
      CHECK(c.embedding.injective());
      const auto am = c.ambient_mult();
      CHECK(std::all_of(am.begin(), am.end(), [](int m) { return m >= 1; }));
      CHECK(canonicalize(c.embedding) == c.embedding);
      seen.insert({std::vector<int>(c.structure.blocks().begin(), c.structure.blocks().end()), c.embedding.entries()});
    }
    CHECK(seen.size() == cls.size());
  }
}

TEST_CASE("canonicalize is a complete invariant for block permutations") {
  const BlockStructure b = bs({3, 2});
  for (const auto& c : oracle::candidate_structures(b.block_sum(), 3)) {
    const auto embs = oracle::brute_embeddings(c, b);
    for (const auto& x : embs) CHECK(oracle::group_sort(c, b.size(), x) == oracle::perm_min(c, b.size(), x));
    for (const auto& x : embs)
      for (const auto& y : embs) {
        const bool same = oracle::perm_min(c, b.size(), x) == oracle::perm_min(c, b.size(), y);
        const bool canon = canonicalize(MultiplicityMatrix(c, b, x)) == canonicalize(MultiplicityMatrix(c, b, y));
        CHECK(same == canon);
      }
  }
}

TEST_CASE("class_leq") {
  const EmbeddedAlgebra m2x2(4, bs({2}), {2});
  const auto cls = enumerate_subalgebra_classes(m2x2);
  for (const auto& c : cls) CHECK(class_leq(cls[0], c));
  CHECK(class_leq(cls[1], cls[2]));
  CHECK_FALSE(class_leq(cls[2], cls[1]));
  const auto other = enumerate_subalgebra_classes(EmbeddedAlgebra(4, bs({2, 2}), {1, 1}));
  CHECK_THROWS_AS(class_leq(cls[0], other[0]), DomainError);
}

TEST_CASE("class_leq is a partial order on parents up to N = 4") {
  for (const auto& e : all_up_to(4)) {
    const auto cls = enumerate_subalgebra_classes(e);
    const auto n = cls.size();
    std::vector<std::vector<char>> leq(n, std::vector<char>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) leq[i][j] = class_leq(cls[i], cls[j]);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(leq[i][i]);
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) CHECK_FALSE((leq[i][j] && leq[j][i]));
        for (std::size_t k = 0; k < n; ++k)
          if (leq[i][j] && leq[j][k]) CHECK(leq[i][k]);
      }
    }
  }
}

TEST_CASE("compatible_embeddings") {
  const EmbeddedAlgebra m2x2(4, bs({2}), {2});
  const auto c2 = enumerate_subalgebra_classes(m2x2)[1];
  const auto list = compatible_embeddings(c2, m2x2);
  REQUIRE(list.size() == 1);
  CHECK(list[0].entries() == std::vector<int>{1, 1});

  const EmbeddedAlgebra m3x2(6, bs({3}), {2});
  const EmbeddedAlgebra m2x3(6, bs({2}), {3});
  const auto c = make_class(m3x2, MultiplicityMatrix(bs({1, 1}), bs({3}), {1, 2}));
  CHECK(compatible_embeddings(c, m2x3).empty());

  for (const auto& b2 : enumerate_embedded_algebras(6)) {
    const auto unit = enumerate_subalgebra_classes(m3x2)[0];
    CHECK(compatible_embeddings(unit, b2).size() == 1);
  }
}

TEST_CASE("compatible embeddings imply the gcd bound for simple pairs") {
  for (int n = 1; n <= 8; ++n)
    for (int k1 = 1; k1 <= n; ++k1)
      for (int k2 = 1; k2 <= n; ++k2) {
        if (n % k1 || n % k2) continue;
        const EmbeddedAlgebra b1(n, bs({k1}), {n / k1});
        const EmbeddedAlgebra b2(n, bs({k2}), {n / k2});
        for (const auto& c : enumerate_subalgebra_classes(b1))
          if (!compatible_embeddings(c, b2).empty()) CHECK(gcd_embedding_bound(c.structure, k1, k2));
      }
}

TEST_CASE("gcd_embedding_bound") {
  CHECK_FALSE(gcd_embedding_bound(bs({1, 1}), 3, 2));
  CHECK(gcd_embedding_bound(bs({1, 1}), 4, 6));
  CHECK(gcd_embedding_bound(bs({2}), 2, 2));
  CHECK_FALSE(gcd_embedding_bound(bs({3}), 6, 4));
  CHECK(gcd_embedding_bound(bs({1}), 5, 7));
}

TEST_CASE("composition is associative and unital on small embeddings") {
  const std::vector<BlockStructure> shapes = oracle::candidate_structures(4, 4);
  int triples = 0;
  for (const auto& a : shapes)
    for (const auto& b : shapes) {
      const auto ab = enumerate_unital_embeddings(a, b);
      if (ab.empty()) continue;
      for (const auto& c : shapes) {
        const auto bc = enumerate_unital_embeddings(b, c);
        if (bc.empty()) continue;
        const BlockStructure d = BlockStructure::full(c.block_sum() * 1);
        const auto cd = enumerate_unital_embeddings(c, d);
        for (const auto& x : ab)
          for (const auto& y : bc)
            for (const auto& z : cd) {
              CHECK(compose_multiplicities(z, compose_multiplicities(y, x)) ==
                    compose_multiplicities(compose_multiplicities(z, y), x));
              CHECK(compose_multiplicities(y, x).unital());
              ++triples;
            }
      }
    }
  CHECK(triples > 0);
}

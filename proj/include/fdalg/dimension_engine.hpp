#pragma once

// Integer dimension counts for classes of subalgebras and the sets of
// unitaries that carry a subalgebra into a second one. Everything here is
// exact integer arithmetic except the two small optimization lemmas at the end.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdalg/algebra_core.hpp"

namespace fdalg {

struct DimReport {
  int stab_dim = 0;
  int class_dim = 0;
  std::vector<int> orbit_dims;  // one per compatible embedding into B2
  std::optional<int> d_value;   // absent when no compatible embedding exists
  int ambient_sq = 0;
};

/// dim Stab(B1, B) = dim U(B) + dim U(B1 ∩ B') - dim U(C(B)).
int stab_dim(const EmbeddedAlgebra& b1, const SubalgebraClass& b);

/// dim [B]_{B1} = dim U(B1) - dim U(B' ∩ B1) + dim U(C(B)) - dim U(B).
int class_dim(const EmbeddedAlgebra& b1, const SubalgebraClass& b);

/// Dimension dim U(B') + dim U(B2) - dim U(B2 ∩ u*B'u) for each compatible embedding.
std::vector<int> orbit_dims(const EmbeddedAlgebra& b1, const SubalgebraClass& b, const EmbeddedAlgebra& b2);

/// Largest entry of orbit_dims(), computed over embeddings reduced modulo
/// permutations of interchangeable blocks of b2 (same size, same multiplicity).
std::optional<int> max_orbit_dim(const EmbeddedAlgebra& b1, const SubalgebraClass& b, const EmbeddedAlgebra& b2);

/// class_dim + max orbit dimension; absent when B does not fit into B2.
std::optional<int> d_value(const EmbeddedAlgebra& b1, const SubalgebraClass& b, const EmbeddedAlgebra& b2);

DimReport dim_report(const EmbeddedAlgebra& b1, const SubalgebraClass& b, const EmbeddedAlgebra& b2);

enum class Verdict {
  trivial,          // B = C, d(B) = N^2 by construction
  below_bound,      // abelian B != C with d(B) < N^2
  violation,        // an audited inequality failed
  no_embedding,     // Y(B2; B) is empty
  dominated_by_c2,  // simple nonabelian B with d(B) <= d(C) for every C = C^2 inside B
  not_audited,
};

std::string to_string(Verdict v);

struct ClassAudit {
  SubalgebraClass cls;
  int stab_dim = 0;
  int class_dim = 0;
  std::optional<int> max_orbit_dim;
  std::optional<int> d_value;
  /// For simple nonabelian classes: the smallest d(C) over C = C^2 inside B.
  std::optional<int> min_d_c2;
  Verdict verdict = Verdict::not_audited;
};

struct Thm41Report {
  int hypothesis_case = 0;  // 1..4, or 0 when not covered
  int ambient_sq = 0;
  bool simple_route_applies = false;  // dim U(B1) + dim U(B2) <= N^2
  std::vector<ClassAudit> rows;
  int audited = 0;
  int violations = 0;

  bool covered() const noexcept { return hypothesis_case != 0; }
  bool holds() const noexcept { return covered() && violations == 0; }
};

/// Which of the four density hypotheses (B1, B2) satisfies, in the given order; 0 if none.
int classify_theorem41(const EmbeddedAlgebra& b1, const EmbeddedAlgebra& b2);

/// Per-class ledger of d values with the inequalities behind the density theorem audited.
Thm41Report check_theorem41(const EmbeddedAlgebra& b1, const EmbeddedAlgebra& b2);

struct LagrangeResult {
  double minimum = 0.0;
  std::vector<double> minimizer;
};

/// min { sum x_j^2 / r_j : sum x_j = 1 } = 1 / sum r_j, attained at x_j = r_j / sum r.
LagrangeResult lagrange_min(std::span<const double> r);

/// max of 2xy - (1 + 1/k^2) y^2 - x^2/2 over [0,1] x [0,1/2], which is 1/4 - 1/(4k^2).
double box_max(int k);

/// The objective maximized by box_max().
double box_objective(int k, double x, double y);

}  // namespace fdalg

#include "fdalg/dimension_engine.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "fdalg/errors.hpp"

namespace fdalg {

namespace {

void require_parent(const EmbeddedAlgebra& b1, const SubalgebraClass& b) {
  if (b.parent != b1) throw DomainError("subalgebra class does not belong to " + b1.to_string());
}

int sum_sq(std::span<const int> v) {
  int s = 0;
  for (int x : v) s += x * x;
  return s;
}

// Smallest sum of squared entries over compatible embeddings, with rows of b2
// that are interchangeable (same block size and multiplicity) kept in
// non-increasing lexicographic order.
std::optional<int> min_compatible_sum_sq(const SubalgebraClass& b, const EmbeddedAlgebra& b2) {
  if (b.parent.ambient_dim() != b2.ambient_dim())
    throw ShapeError("B1 and B2 must live in the same ambient M_N");
  const auto& c = b.structure;
  const auto& t = b2.structure();
  const std::size_t rows = static_cast<std::size_t>(t.size());
  const std::size_t cols = static_cast<std::size_t>(c.size());
  std::vector<int> budget = b.ambient_mult();

  std::vector<int> prev_same(rows, -1);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t p = i; p-- > 0;)
      if (t[static_cast<int>(p)] == t[static_cast<int>(i)] && b2.mult()[p] == b2.mult()[i]) {
        prev_same[i] = static_cast<int>(p);
        break;
      }

  std::vector<std::vector<int>> chosen(rows, std::vector<int>(cols, 0));
  int best = std::numeric_limits<int>::max();
  int acc = 0;

  std::function<void(std::size_t, std::size_t, int)> rec = [&](std::size_t i, std::size_t j, int row_left) {
    if (acc >= best) return;
    if (i == rows) {
      if (std::all_of(budget.begin(), budget.end(), [](int r) { return r == 0; })) best = acc;
      return;
    }
    if (j == cols) {
      if (row_left != 0) return;
      if (prev_same[i] >= 0 && chosen[i] > chosen[static_cast<std::size_t>(prev_same[i])]) return;
      rec(i + 1, 0, i + 1 < rows ? t[static_cast<int>(i + 1)] : 0);
      return;
    }
    const int m2 = b2.mult()[i];
    const int size = c[static_cast<int>(j)];
    for (int v = 0; v * size <= row_left && v * m2 <= budget[j]; ++v) {
      chosen[i][j] = v;
      budget[j] -= v * m2;
      acc += v * v;
      rec(i, j + 1, row_left - v * size);
      acc -= v * v;
      budget[j] += v * m2;
    }
    chosen[i][j] = 0;
  };
  rec(0, 0, t[0]);
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

bool all_equal_blocks(const EmbeddedAlgebra& b) {
  const auto blocks = b.structure().blocks();
  const int l = b.structure().size();
  if (b.ambient_dim() % l != 0) return false;
  const int expect = b.ambient_dim() / l;
  return std::all_of(blocks.begin(), blocks.end(), [&](int n) { return n == expect; });
}

}  // namespace

int stab_dim(const EmbeddedAlgebra& b1, const SubalgebraClass& b) {
  require_parent(b1, b);
  return b.structure.unitary_dim() + relative_commutant(b.embedding).unitary_dim() - b.structure.center_dim();
}

int class_dim(const EmbeddedAlgebra& b1, const SubalgebraClass& b) {
  require_parent(b1, b);
  return b1.structure().unitary_dim() - relative_commutant(b.embedding).unitary_dim() + b.structure.center_dim() -
         b.structure.unitary_dim();
}

std::vector<int> orbit_dims(const EmbeddedAlgebra& b1, const SubalgebraClass& b, const EmbeddedAlgebra& b2) {
  require_parent(b1, b);
  const int commutant_dim = sum_sq(b.ambient_mult());
  const int u2 = b2.structure().unitary_dim();
  std::vector<int> out;
  for (const auto& mu : compatible_embeddings(b, b2)) out.push_back(commutant_dim + u2 - mu.sum_of_squares());
  return out;
}

std::optional<int> max_orbit_dim(const EmbeddedAlgebra& b1, const SubalgebraClass& b, const EmbeddedAlgebra& b2) {
  require_parent(b1, b);
  const auto min_sq = min_compatible_sum_sq(b, b2);
  if (!min_sq) return std::nullopt;
  return sum_sq(b.ambient_mult()) + b2.structure().unitary_dim() - *min_sq;
}

std::optional<int> d_value(const EmbeddedAlgebra& b1, const SubalgebraClass& b, const EmbeddedAlgebra& b2) {
  const auto orbit = max_orbit_dim(b1, b, b2);
  if (!orbit) return std::nullopt;
  return class_dim(b1, b) + *orbit;
}

DimReport dim_report(const EmbeddedAlgebra& b1, const SubalgebraClass& b, const EmbeddedAlgebra& b2) {
  DimReport r;
  r.stab_dim = stab_dim(b1, b);
  r.class_dim = class_dim(b1, b);
  r.orbit_dims = orbit_dims(b1, b, b2);
  if (!r.orbit_dims.empty()) r.d_value = r.class_dim + *std::max_element(r.orbit_dims.begin(), r.orbit_dims.end());
  r.ambient_sq = b1.ambient_dim() * b1.ambient_dim();
  return r;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::trivial: return "trivial";
    case Verdict::below_bound: return "d<N^2";
    case Verdict::violation: return "violation";
    case Verdict::no_embedding: return "no-embedding";
    case Verdict::dominated_by_c2: return "d<=d(C^2)";
    case Verdict::not_audited: return "not-audited";
  }
  return "unknown";
}

int classify_theorem41(const EmbeddedAlgebra& b1, const EmbeddedAlgebra& b2) {
  if (b1.ambient_dim() != b2.ambient_dim()) throw ShapeError("B1 and B2 must live in the same ambient M_N");
  if (!b1.is_proper() || !b2.is_proper()) return 0;
  const int n = b1.ambient_dim();
  const int l1 = b1.structure().center_dim();
  const int l2 = b2.structure().center_dim();
  if (l1 == 1 && l2 == 1) return 1;
  if (l1 >= 2 && l2 == 1 && all_equal_blocks(b1)) return 2;
  if (l1 == 2 && l2 == 2 && all_equal_blocks(b1) && n % 2 == 0) {
    const auto s2 = b2.structure().sorted();
    const int half = n / 2;
    if (s2[0] == half && s2[1] < half && half % s2[1] == 0) {
      // M_{N/2} + M_{N/(2k)} with k >= 2
      return 3;
    }
  }
  if (l1 >= 2 && l2 >= 3 && all_equal_blocks(b1) && all_equal_blocks(b2)) return 4;
  return 0;
}

Thm41Report check_theorem41(const EmbeddedAlgebra& b1, const EmbeddedAlgebra& b2) {
  Thm41Report report;
  report.hypothesis_case = classify_theorem41(b1, b2);
  const int n = b1.ambient_dim();
  report.ambient_sq = n * n;
  report.simple_route_applies = b1.structure().unitary_dim() + b2.structure().unitary_dim() <= n * n;

  for (auto& cls : enumerate_subalgebra_classes(b1)) {
    ClassAudit row{cls, stab_dim(b1, cls), class_dim(b1, cls), max_orbit_dim(b1, cls, b2), std::nullopt,
                   std::nullopt, Verdict::not_audited};
    if (row.max_orbit_dim) row.d_value = row.class_dim + *row.max_orbit_dim;

    if (cls.is_trivial()) {
      row.verdict = (row.d_value && *row.d_value == n * n) ? Verdict::trivial : Verdict::violation;
    } else if (!row.d_value) {
      row.verdict = Verdict::no_embedding;
    } else if (report.covered() && cls.structure.is_abelian()) {
      row.verdict = *row.d_value < n * n ? Verdict::below_bound : Verdict::violation;
    } else if (report.covered() && cls.structure.is_simple() && report.simple_route_applies) {
      // Every C = C^2 inside B = M_k is given by a split x1 + x2 = k.
      const int k = cls.structure[0];
      for (int x2 = 1; x2 <= k / 2; ++x2) {
        MultiplicityMatrix split(BlockStructure::abelian(2), cls.structure, {k - x2, x2});
        const auto c2 = make_class(b1, compose_multiplicities(cls.embedding, split));
        const auto dc = d_value(b1, c2, b2);
        if (dc && (!row.min_d_c2 || *dc < *row.min_d_c2)) row.min_d_c2 = dc;
      }
      row.verdict = (row.min_d_c2 && *row.d_value <= *row.min_d_c2) ? Verdict::dominated_by_c2 : Verdict::violation;
    }

    if (row.verdict != Verdict::not_audited && row.verdict != Verdict::no_embedding) ++report.audited;
    if (row.verdict == Verdict::violation) ++report.violations;
    report.rows.push_back(std::move(row));
  }
  return report;
}

LagrangeResult lagrange_min(std::span<const double> r) {
  if (r.empty()) throw DomainError("lagrange_min needs at least one weight");
  double total = 0.0;
  for (double v : r) {
    if (!(v > 0.0)) throw DomainError("lagrange_min weights must be positive");
    total += v;
  }
  LagrangeResult out;
  out.minimum = 1.0 / total;
  out.minimizer.reserve(r.size());
  for (double v : r) out.minimizer.push_back(v / total);
  return out;
}

double box_objective(int k, double x, double y) {
  const double kk = static_cast<double>(k) * k;
  return 2.0 * x * y - (1.0 + 1.0 / kk) * y * y - 0.5 * x * x;
}

double box_max(int k) {
  if (k < 2) throw DomainError("box_max needs k >= 2");
  const double kk = static_cast<double>(k) * k;
  return 0.25 - 0.25 / kk;
}

}  // namespace fdalg

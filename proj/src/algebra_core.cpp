#include "fdalg/algebra_core.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <tuple>

#include "fdalg/errors.hpp"

namespace fdalg {

// ---------------------------------------------------------------- BlockStructure

BlockStructure::BlockStructure(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw DomainError("block structure needs at least one block");
  for (int n : blocks_) {
    if (n < 1) throw DomainError("block sizes must be positive, got " + std::to_string(n));
  }
}

BlockStructure BlockStructure::abelian(int l) { return BlockStructure(std::vector<int>(static_cast<std::size_t>(l), 1)); }

BlockStructure BlockStructure::full(int n) { return BlockStructure({n}); }

int BlockStructure::algebra_dim() const noexcept {
  int d = 0;
  for (int n : blocks_) d += n * n;
  return d;
}

int BlockStructure::block_sum() const noexcept { return std::accumulate(blocks_.begin(), blocks_.end(), 0); }

bool BlockStructure::is_abelian() const noexcept {
  return std::all_of(blocks_.begin(), blocks_.end(), [](int n) { return n == 1; });
}

BlockStructure BlockStructure::sorted() const {
  auto b = blocks_;
  std::sort(b.begin(), b.end(), std::greater<>());
  return BlockStructure(std::move(b));
}

bool BlockStructure::isomorphic(const BlockStructure& other) const { return sorted() == other.sorted(); }

std::string BlockStructure::to_string() const {
  if (is_abelian()) return size() == 1 ? "C" : "C^" + std::to_string(size());
  std::ostringstream os;
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (j) os << '+';
    if (blocks_[j] == 1)
      os << 'C';
    else
      os << 'M' << blocks_[j];
  }
  return os.str();
}

// ------------------------------------------------------------ MultiplicityMatrix

MultiplicityMatrix::MultiplicityMatrix(BlockStructure source, BlockStructure target, std::vector<int> entries)
    : source_(std::move(source)), target_(std::move(target)), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(rows() * cols())) {
    throw ShapeError("multiplicity matrix needs " + std::to_string(rows()) + "x" + std::to_string(cols()) +
                     " entries, got " + std::to_string(entries_.size()));
  }
  for (int e : entries_) {
    if (e < 0) throw DomainError("multiplicity entries must be nonnegative");
  }
}

std::vector<int> MultiplicityMatrix::column(int j) const {
  std::vector<int> c(static_cast<std::size_t>(rows()));
  for (int i = 0; i < rows(); ++i) c[static_cast<std::size_t>(i)] = at(i, j);
  return c;
}

bool MultiplicityMatrix::unital() const {
  for (int i = 0; i < rows(); ++i) {
    int s = 0;
    for (int j = 0; j < cols(); ++j) s += at(i, j) * source_[j];
    if (s != target_[i]) return false;
  }
  return true;
}

bool MultiplicityMatrix::injective() const {
  for (int j = 0; j < cols(); ++j) {
    bool nonzero = false;
    for (int i = 0; i < rows(); ++i) nonzero = nonzero || at(i, j) != 0;
    if (!nonzero) return false;
  }
  return true;
}

int MultiplicityMatrix::sum_of_squares() const {
  int s = 0;
  for (int e : entries_) s += e * e;
  return s;
}

// --------------------------------------------------------------- EmbeddedAlgebra

EmbeddedAlgebra::EmbeddedAlgebra(int ambient_dim, BlockStructure structure, std::vector<int> mult)
    : ambient_dim_(ambient_dim), structure_(std::move(structure)), mult_(std::move(mult)) {
  if (ambient_dim_ < 1) throw DomainError("ambient dimension must be positive");
  if (mult_.size() != static_cast<std::size_t>(structure_.size()))
    throw ShapeError("multiplicity row length " + std::to_string(mult_.size()) + " does not match " +
                     std::to_string(structure_.size()) + " blocks");
  int total = 0;
  for (int j = 0; j < structure_.size(); ++j) {
    if (mult_[static_cast<std::size_t>(j)] < 1) throw DomainError("multiplicities into M_N must be at least 1");
    total += mult_[static_cast<std::size_t>(j)] * structure_[j];
  }
  if (total != ambient_dim_)
    throw DomainError("sum of mult*blocks is " + std::to_string(total) + ", expected " + std::to_string(ambient_dim_));
}

MultiplicityMatrix EmbeddedAlgebra::as_matrix() const {
  return MultiplicityMatrix(structure_, BlockStructure::full(ambient_dim_), mult_);
}

bool EmbeddedAlgebra::is_proper() const noexcept { return !(structure_.is_simple() && structure_[0] == ambient_dim_); }

std::string EmbeddedAlgebra::to_string() const {
  std::ostringstream os;
  os << structure_.to_string() << " mult [";
  for (std::size_t j = 0; j < mult_.size(); ++j) os << (j ? "," : "") << mult_[j];
  os << "] in M" << ambient_dim_;
  return os.str();
}

std::vector<int> SubalgebraClass::ambient_mult() const {
  return compose_multiplicities(parent.as_matrix(), embedding).entries();
}

// -------------------------------------------------------------------- operations

MultiplicityMatrix compose_multiplicities(const MultiplicityMatrix& outer, const MultiplicityMatrix& inner) {
  if (inner.target() != outer.source()) {
    throw ShapeError("cannot compose: inner target " + inner.target().to_string() + " differs from outer source " +
                     outer.source().to_string());
  }
  const int r = outer.rows(), k = outer.cols(), c = inner.cols();
  std::vector<int> prod(static_cast<std::size_t>(r * c), 0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      int s = 0;
      for (int t = 0; t < k; ++t) s += outer.at(i, t) * inner.at(t, j);
      prod[static_cast<std::size_t>(i * c + j)] = s;
    }
  return MultiplicityMatrix(inner.source(), outer.target(), std::move(prod));
}

BlockStructure relative_commutant(const MultiplicityMatrix& emb) {
  if (!emb.unital()) throw DomainError("relative commutant requires a unital embedding");
  std::vector<int> blocks;
  for (int e : emb.entries())
    if (e > 0) blocks.push_back(e);
  return BlockStructure(std::move(blocks));
}

EmbeddedAlgebra center_restriction(const EmbeddedAlgebra& emb) {
  const auto& s = emb.structure();
  std::vector<int> mult(static_cast<std::size_t>(s.size()));
  for (int j = 0; j < s.size(); ++j) mult[static_cast<std::size_t>(j)] = emb.mult()[static_cast<std::size_t>(j)] * s[j];
  return EmbeddedAlgebra(emb.ambient_dim(), BlockStructure::abelian(s.size()), std::move(mult));
}

namespace {

// Nonnegative solutions x of sum_j x_j * sizes_j == total, lexicographically ascending.
void row_solutions(std::span<const int> sizes, int total, std::vector<int>& current,
                   std::vector<std::vector<int>>& out) {
  const std::size_t j = current.size();
  if (j == sizes.size()) {
    if (total == 0) out.push_back(current);
    return;
  }
  for (int x = 0; x * sizes[j] <= total; ++x) {
    current.push_back(x);
    row_solutions(sizes, total - x * sizes[j], current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<MultiplicityMatrix> enumerate_unital_embeddings(const BlockStructure& c, const BlockStructure& b) {
  std::vector<std::vector<std::vector<int>>> per_row;
  per_row.reserve(static_cast<std::size_t>(b.size()));
  for (int i = 0; i < b.size(); ++i) {
    std::vector<std::vector<int>> sols;
    std::vector<int> cur;
    row_solutions(c.blocks(), b[i], cur, sols);
    if (sols.empty()) return {};
    per_row.push_back(std::move(sols));
  }

  std::vector<MultiplicityMatrix> out;
  std::vector<int> entries;
  std::vector<int> col_hits(static_cast<std::size_t>(c.size()), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == per_row.size()) {
      if (std::all_of(col_hits.begin(), col_hits.end(), [](int h) { return h > 0; }))
        out.emplace_back(c, b, entries);
      return;
    }
    for (const auto& row : per_row[i]) {
      entries.insert(entries.end(), row.begin(), row.end());
      for (std::size_t j = 0; j < row.size(); ++j) col_hits[j] += row[j];
      rec(i + 1);
      for (std::size_t j = 0; j < row.size(); ++j) col_hits[j] -= row[j];
      entries.resize(entries.size() - row.size());
    }
  };
  rec(0);
  return out;
}

MultiplicityMatrix canonicalize(const MultiplicityMatrix& emb) {
  const int cols = emb.cols();
  std::vector<std::vector<int>> columns;
  for (int j = 0; j < cols; ++j) columns.push_back(emb.column(j));
  std::vector<int> order(static_cast<std::size_t>(cols));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (emb.source()[a] != emb.source()[b]) return emb.source()[a] > emb.source()[b];
    return columns[static_cast<std::size_t>(a)] < columns[static_cast<std::size_t>(b)];
  });
  std::vector<int> blocks(static_cast<std::size_t>(cols));
  std::vector<int> entries(emb.entries().size());
  for (int jj = 0; jj < cols; ++jj) {
    const int j = order[static_cast<std::size_t>(jj)];
    blocks[static_cast<std::size_t>(jj)] = emb.source()[j];
    for (int i = 0; i < emb.rows(); ++i) entries[static_cast<std::size_t>(i * cols + jj)] = emb.at(i, j);
  }
  return MultiplicityMatrix(BlockStructure(std::move(blocks)), emb.target(), std::move(entries));
}

SubalgebraClass make_class(const EmbeddedAlgebra& parent, const MultiplicityMatrix& embedding) {
  if (embedding.target() != parent.structure())
    throw ShapeError("embedding target " + embedding.target().to_string() + " is not the parent structure " +
                     parent.structure().to_string());
  if (!embedding.unital() || !embedding.injective())
    throw DomainError("subalgebra embedding must be unital and injective");
  auto canon = canonicalize(embedding);
  BlockStructure s = canon.source();
  return SubalgebraClass{parent, std::move(s), std::move(canon), true};
}

std::vector<SubalgebraClass> enumerate_subalgebra_classes(const EmbeddedAlgebra& b1) {
  // Depth-first generation of canonical forms directly: block sizes are
  // non-increasing and, within a run of equal sizes, columns are
  // non-decreasing lexicographically. Each class is produced exactly once.
  const auto& target = b1.structure();
  const std::size_t rows = static_cast<std::size_t>(target.size());
  std::vector<int> remaining(target.blocks().begin(), target.blocks().end());
  std::vector<int> sizes;
  std::vector<std::vector<int>> columns;
  std::vector<SubalgebraClass> out;

  auto emit = [&] {
    const std::size_t cols = columns.size();
    std::vector<int> entries(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) entries[i * cols + j] = columns[j][i];
    BlockStructure s(sizes);
    MultiplicityMatrix mu(s, target, std::move(entries));
    out.push_back(SubalgebraClass{b1, std::move(s), std::move(mu), true});
  };

  std::function<void(int)> rec = [&](int max_size) {
    if (std::all_of(remaining.begin(), remaining.end(), [](int r) { return r == 0; })) {
      emit();
      return;
    }
    const int largest = *std::max_element(remaining.begin(), remaining.end());
    for (int c = std::min(max_size, largest); c >= 1; --c) {
      const bool same_run = !sizes.empty() && sizes.back() == c;
      std::vector<int> col(rows, 0);
      // Odometer over col[i] in [0, remaining[i] / c], lexicographic (row 0 most significant).
      std::function<void(std::size_t)> pick = [&](std::size_t i) {
        if (i == rows) {
          if (std::all_of(col.begin(), col.end(), [](int v) { return v == 0; })) return;
          if (same_run && col < columns.back()) return;
          for (std::size_t r = 0; r < rows; ++r) remaining[r] -= col[r] * c;
          sizes.push_back(c);
          columns.push_back(col);
          rec(c);
          columns.pop_back();
          sizes.pop_back();
          for (std::size_t r = 0; r < rows; ++r) remaining[r] += col[r] * c;
          return;
        }
        for (int v = 0; v * c <= remaining[i]; ++v) {
          col[i] = v;
          pick(i + 1);
        }
        col[i] = 0;
      };
      pick(0);
    }
  };
  rec(target.block_sum());

  std::sort(out.begin(), out.end(), [](const SubalgebraClass& a, const SubalgebraClass& b) {
    return std::forward_as_tuple(a.structure.algebra_dim(), a.structure, a.embedding.entries()) <
           std::forward_as_tuple(b.structure.algebra_dim(), b.structure, b.embedding.entries());
  });
  return out;
}

bool class_leq(const SubalgebraClass& a, const SubalgebraClass& b) {
  if (a.parent != b.parent) throw DomainError("class_leq needs classes of the same parent algebra");
  const auto target = canonicalize(a.embedding);
  if (a.structure.algebra_dim() > b.structure.algebra_dim()) return false;
  for (const auto& mu : enumerate_unital_embeddings(target.source(), b.structure)) {
    if (canonicalize(compose_multiplicities(b.embedding, mu)) == target) return true;
  }
  return false;
}

std::vector<MultiplicityMatrix> compatible_embeddings(const SubalgebraClass& b, const EmbeddedAlgebra& b2) {
  if (b.parent.ambient_dim() != b2.ambient_dim())
    throw ShapeError("compatible_embeddings needs algebras in the same ambient M_N");
  const auto& c = b.structure;
  const auto& t = b2.structure();
  std::vector<int> budget = b.ambient_mult();  // must be consumed exactly by mu(M_N,B2) * mu(B2,C)
  const std::size_t rows = static_cast<std::size_t>(t.size());
  const std::size_t cols = static_cast<std::size_t>(c.size());
  std::vector<int> entries(rows * cols, 0);
  std::vector<MultiplicityMatrix> out;

  std::function<void(std::size_t, std::size_t, int)> rec = [&](std::size_t i, std::size_t j, int row_left) {
    if (i == rows) {
      if (std::all_of(budget.begin(), budget.end(), [](int r) { return r == 0; })) out.emplace_back(c, t, entries);
      return;
    }
    if (j == cols) {
      if (row_left == 0) rec(i + 1, 0, i + 1 < rows ? t[static_cast<int>(i + 1)] : 0);
      return;
    }
    const int m2 = b2.mult()[i];
    const int size = c[static_cast<int>(j)];
    for (int v = 0; v * size <= row_left && v * m2 <= budget[j]; ++v) {
      entries[i * cols + j] = v;
      budget[j] -= v * m2;
      rec(i, j + 1, row_left - v * size);
      budget[j] += v * m2;
    }
    entries[i * cols + j] = 0;
  };
  if (rows > 0) rec(0, 0, t[0]);
  return out;
}

bool gcd_embedding_bound(const BlockStructure& b, int k1, int k2) {
  if (k1 < 1 || k2 < 1) throw DomainError("gcd_embedding_bound needs positive sizes");
  const int g = std::gcd(k1, k2);
  // Need positive m_j with sum m_j n_j == g: subtract one copy of each block,
  // then the rest must be a nonnegative combination.
  const int rest = g - b.block_sum();
  if (rest < 0) return false;
  std::vector<char> reachable(static_cast<std::size_t>(rest + 1), 0);
  reachable[0] = 1;
  for (int n : b.blocks())
    for (int v = n; v <= rest; ++v) reachable[static_cast<std::size_t>(v)] |= reachable[static_cast<std::size_t>(v - n)];
  return reachable[static_cast<std::size_t>(rest)] != 0;
}

std::vector<EmbeddedAlgebra> enumerate_embedded_algebras(int n) {
  if (n < 1) throw DomainError("ambient dimension must be positive");
  // (block, mult) pairs in non-increasing lexicographic order with sum block*mult == n.
  std::vector<EmbeddedAlgebra> out;
  std::vector<std::pair<int, int>> parts;
  std::function<void(int, std::pair<int, int>)> rec = [&](int left, std::pair<int, int> bound) {
    if (left == 0) {
      std::vector<int> blocks, mult;
      for (auto [b, m] : parts) {
        blocks.push_back(b);
        mult.push_back(m);
      }
      out.emplace_back(n, BlockStructure(std::move(blocks)), std::move(mult));
      return;
    }
    for (int b = std::min(bound.first, left); b >= 1; --b) {
      const int max_m = left / b;
      for (int m = max_m; m >= 1; --m) {
        if (std::make_pair(b, m) > bound) continue;
        parts.emplace_back(b, m);
        rec(left - b * m, {b, m});
        parts.pop_back();
      }
    }
  };
  rec(n, {n, n});
  return out;
}

}  // namespace fdalg

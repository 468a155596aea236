#pragma once

// Symbolic model of finite-dimensional C*-algebras: block structures,
// multiplicity matrices of unital embeddings, and enumeration of
// subalgebra classes up to inner unitary equivalence.

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace fdalg {

/// Isomorphism type of a finite-dimensional C*-algebra: M_{n_1} + ... + M_{n_l}.
///
/// Equality is order-sensitive because multiplicity matrices index blocks by
/// position; use isomorphic() to compare up to reordering.
class BlockStructure {
 public:
  explicit BlockStructure(std::vector<int> blocks);

  static BlockStructure abelian(int l);
  static BlockStructure full(int n);

  std::span<const int> blocks() const noexcept { return blocks_; }
  int size() const noexcept { return static_cast<int>(blocks_.size()); }
  int operator[](int j) const { return blocks_.at(static_cast<std::size_t>(j)); }

  int algebra_dim() const noexcept;
  int center_dim() const noexcept { return size(); }
  /// Real dimension of the unitary group; equals the complex algebra dimension.
  int unitary_dim() const noexcept { return algebra_dim(); }
  /// Sum of block sizes: dimension of the minimal faithful unital representation.
  int block_sum() const noexcept;

  bool is_abelian() const noexcept;
  bool is_simple() const noexcept { return blocks_.size() == 1; }

  /// Blocks sorted in descending order.
  BlockStructure sorted() const;
  bool isomorphic(const BlockStructure& other) const;

  /// Human-readable form such as "C^2", "M2+M2", "M3+C".
  std::string to_string() const;

  friend bool operator==(const BlockStructure&, const BlockStructure&) = default;
  friend auto operator<=>(const BlockStructure&, const BlockStructure&) = default;

 private:
  std::vector<int> blocks_;
};

/// Matrix of partial multiplicities of a unital *-homomorphism source -> target.
/// Entry (i, j) is the number of times block j of the source sits in block i
/// of the target; stored row-major with shape target.size() x source.size().
class MultiplicityMatrix {
 public:
  MultiplicityMatrix(BlockStructure source, BlockStructure target, std::vector<int> entries);

  const BlockStructure& source() const noexcept { return source_; }
  const BlockStructure& target() const noexcept { return target_; }
  int rows() const noexcept { return target_.size(); }
  int cols() const noexcept { return source_.size(); }
  int at(int i, int j) const { return entries_[static_cast<std::size_t>(i * cols() + j)]; }
  const std::vector<int>& entries() const noexcept { return entries_; }
  std::vector<int> column(int j) const;

  /// entries * delta(source) == delta(target).
  bool unital() const;
  /// Every column has a nonzero entry.
  bool injective() const;
  /// Sum of squared entries: dimension of the relative commutant.
  int sum_of_squares() const;

  friend bool operator==(const MultiplicityMatrix&, const MultiplicityMatrix&) = default;

 private:
  BlockStructure source_;
  BlockStructure target_;
  std::vector<int> entries_;
};

/// A unital subalgebra B of M_N, up to unitary equivalence: its block structure
/// together with the multiplicity row mu(M_N, B).
class EmbeddedAlgebra {
 public:
  EmbeddedAlgebra(int ambient_dim, BlockStructure structure, std::vector<int> mult);

  int ambient_dim() const noexcept { return ambient_dim_; }
  const BlockStructure& structure() const noexcept { return structure_; }
  const std::vector<int>& mult() const noexcept { return mult_; }

  /// The row mu(M_N, B) as a 1 x l multiplicity matrix.
  MultiplicityMatrix as_matrix() const;
  bool is_proper() const noexcept;
  std::string to_string() const;

  friend bool operator==(const EmbeddedAlgebra&, const EmbeddedAlgebra&) = default;

 private:
  int ambient_dim_;
  BlockStructure structure_;
  std::vector<int> mult_;
};

/// A class [C]_{B1} of unital subalgebras of B1 under conjugation by U(B1),
/// represented by the structure of C and the multiplicity matrix mu(B1, C).
struct SubalgebraClass {
  EmbeddedAlgebra parent;
  BlockStructure structure;
  MultiplicityMatrix embedding;
  bool canonical = false;

  /// mu(M_N, C) = mu(M_N, B1) mu(B1, C).
  std::vector<int> ambient_mult() const;
  bool is_trivial() const noexcept { return structure.algebra_dim() == 1; }
};

MultiplicityMatrix compose_multiplicities(const MultiplicityMatrix& outer,
                                          const MultiplicityMatrix& inner);

/// Block structure of target ∩ image(source)': one block M_{mu[i,j]} per
/// nonzero entry, in row-major order.
BlockStructure relative_commutant(const MultiplicityMatrix& emb);

/// Restriction of the embedding to the center of the algebra.
EmbeddedAlgebra center_restriction(const EmbeddedAlgebra& emb);

/// All unital injective embeddings C -> B, in lexicographic row-major order.
std::vector<MultiplicityMatrix> enumerate_unital_embeddings(const BlockStructure& c,
                                                            const BlockStructure& b);

/// Canonical representative modulo permutations of isomorphic source blocks:
/// source blocks sorted descending, columns of equal-size blocks sorted
/// lexicographically ascending.
MultiplicityMatrix canonicalize(const MultiplicityMatrix& emb);

/// One canonical representative per class of unital subalgebras of b1,
/// ordered by (algebra dimension, blocks, entries).
std::vector<SubalgebraClass> enumerate_subalgebra_classes(const EmbeddedAlgebra& b1);

/// Builds a class from an arbitrary unital injective mu(B1, C); the result is canonicalized.
SubalgebraClass make_class(const EmbeddedAlgebra& parent, const MultiplicityMatrix& embedding);

/// Partial order on classes: a <= b iff a has a representative inside a representative of b.
bool class_leq(const SubalgebraClass& a, const SubalgebraClass& b);

/// All unital injective mu(B2, C) whose induced ambient multiplicity equals that of b.
std::vector<MultiplicityMatrix> compatible_embeddings(const SubalgebraClass& b,
                                                      const EmbeddedAlgebra& b2);

/// True iff b embeds unitally and injectively into M_gcd(k1, k2).
bool gcd_embedding_bound(const BlockStructure& b, int k1, int k2);

/// Every unital subalgebra of M_n up to unitary equivalence, blocks sorted descending.
std::vector<EmbeddedAlgebra> enumerate_embedded_algebras(int n);

}  // namespace fdalg

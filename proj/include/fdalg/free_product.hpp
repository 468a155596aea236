#pragma once

// Finite-dimensional representations of a free product A1 * A2 of two
// finite-dimensional C*-algebras: pairs of block-diagonal representations on a
// common space, the second one twisted by a unitary.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fdalg/algebra_core.hpp"
#include "fdalg/matrix_numeric.hpp"

namespace fdalg {

enum class Side : int { first = 1, second = 2 };

/// A generator of one factor given by its value in that factor's block model
/// (a block_sum x block_sum block-diagonal matrix).
struct Letter {
  Side side = Side::first;
  CMatrix value;
};

struct Term {
  Complex coefficient{1, 0};
  std::vector<Letter> word;  // empty word = unit
};

/// Finite linear combination of alternating words.
class FreeElement {
 public:
  FreeElement() = default;

  static FreeElement unit(Complex c = {1, 0});
  static FreeElement letter(Side side, CMatrix value, Complex c = {1, 0});

  /// Throws DomainError if consecutive letters share a side.
  void add_term(Complex coefficient, std::vector<Letter> word);
  const std::vector<Term>& terms() const noexcept { return terms_; }

  FreeElement operator+(const FreeElement& other) const;
  FreeElement operator*(Complex c) const;
  /// Product of elements. Adjacent letters from the same side are multiplied
  /// together so words stay alternating.
  FreeElement operator*(const FreeElement& other) const;

 private:
  std::vector<Term> terms_;
};

/// A representation pi1 * (Ad u o pi2) on C^dim. Each factor acts as a direct
/// sum of canonical amplifications, one per piece, placed in order along the
/// diagonal. A freshly constructed pair has a single piece.
class RepPair {
 public:
  RepPair(BlockStructure a1, std::vector<int> mult1, BlockStructure a2, std::vector<int> mult2,
          std::optional<CMatrix> u = std::nullopt);

  /// Pieces of b appended after those of a; the unitary is u_a + u_b.
  static RepPair direct_sum(const RepPair& a, const RepPair& b);

  const BlockStructure& a1() const noexcept { return a1_; }
  const BlockStructure& a2() const noexcept { return a2_; }
  const std::vector<std::vector<int>>& pieces1() const noexcept { return pieces1_; }
  const std::vector<std::vector<int>>& pieces2() const noexcept { return pieces2_; }
  const CMatrix& u() const noexcept { return u_; }
  int dim() const noexcept { return dim_; }

  /// Total multiplicity rows, summed over pieces.
  std::vector<int> mult1() const;
  std::vector<int> mult2() const;

  /// Same pieces, different unitary.
  RepPair with_unitary(CMatrix u) const;

  /// pi1(a) for a in the block model of A1.
  CMatrix pi1(const CMatrix& a) const;
  /// pi2(b) without the twist.
  CMatrix pi2(const CMatrix& b) const;
  /// u pi2(b) u*.
  CMatrix twisted_pi2(const CMatrix& b) const;

  /// Images of a generating set of each factor (the second one twisted by u).
  std::vector<CMatrix> generators() const;

 private:
  RepPair() = default;
  CMatrix amplify(const BlockStructure& a, const std::vector<std::vector<int>>& pieces, const CMatrix& x) const;

  BlockStructure a1_{{1}};
  BlockStructure a2_{{1}};
  std::vector<std::vector<int>> pieces1_;
  std::vector<std::vector<int>> pieces2_;
  CMatrix u_;
  int dim_ = 0;
};

CMatrix evaluate(const RepPair& rep, const FreeElement& x);

/// L(x) with ||eval_u(x) - eval_v(x)|| <= L(x) ||u - v|| for unitaries u, v:
/// sum over terms of |c| * 2 * (number of side-2 letters) * prod of letter norms.
double lipschitz_bound(const FreeElement& x);

struct FactorRcp {
  std::vector<int> ranks;  // rank of the image of each minimal central projection
  bool passes = false;
};

struct RcpReport {
  FactorRcp first;
  FactorRcp second;
  bool passes() const noexcept { return first.passes && second.passes; }
};

FactorRcp rcp_check(const BlockStructure& a, std::span<const int> mult);
RcpReport rcp_check(const RepPair& rep);

std::vector<int> pad_multiplicities(std::span<const int> mult, std::span<const int> q);

struct RcpBalance {
  int s = 0;
  std::vector<int> pad1, pad2;  // multiplicities of the added pieces
  int k1 = 1, k2 = 1;           // amplification factors equalizing dimensions
  std::vector<int> mult1, mult2;
  int dim = 0;
  int input_dim = 0;
};

/// Smallest enlargement of (mult1, mult2) by padding and amplification that
/// satisfies the rank condition on both factors.
RcpBalance rcp_balance(const BlockStructure& a1, std::span<const int> mult1, const BlockStructure& a2,
                       std::span<const int> mult2);

/// Dimension of the joint commutant of pi1(A1) and u pi2(A2) u*.
int joint_commutant_dim(const RepPair& rep, const NumericOptions& opts = {});
bool irreducibility_check(const RepPair& rep, const NumericOptions& opts = {});

/// Perturbing unitary for sample `index`: Haar on U(dim), or within `radius` of I.
CMatrix dpi_perturbation(int dim, std::uint64_t seed, std::uint64_t index, std::optional<double> radius);

/// Tallies joint commutant dimensions of rep.with_unitary(w_i u) with w_i from
/// dpi_perturbation(). trivial_count counts irreducible samples.
DensityStats dpi_probe(const RepPair& rep, int samples, std::uint64_t seed, std::optional<double> radius = std::nullopt,
                       const NumericOptions& opts = {}, unsigned threads = 1);

struct StagePiece {
  std::vector<int> mult1;
  std::vector<int> mult2;
};

struct StageRecord {
  int index = 0;  // 1-based
  int dim = 0;
  std::vector<int> mult1, mult2;  // multiplicities of the piece added at this stage
  bool balanced = false;          // the requested piece was replaced by its rcp_balance
  CMatrix u;                      // u_k
  CMatrix cumulative;             // U_k = u_k (U_{k-1} + I)
  double bound = 0.0;             // ||u_k - I||
  double budget = 0.0;            // epsilon / 2^(k+1)
  double radius = 0.0;            // radius of the successful try, 0 when u_k = I
  int tries = 0;
  int commutant_dim = 0;
  bool irreducible = false;
  std::vector<double> probe_residuals;  // ||theta_k(x) - theta_k^0(x)|| per probe element
  std::vector<double> probe_bounds;     // L(x) ||u_k - I||
  double probe_limit = 0.0;             // 1 / 2^(k+1)
};

struct StagedBuild {
  BlockStructure a1{{1}};
  BlockStructure a2{{1}};
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  int max_tries = 0;
  std::vector<StageRecord> stages;

  double bound_sum() const;
};

/// Builds irreducible representations of growing dimension by adding one
/// piece per stage and perturbing near the identity with ||u_k - I|| < eps/2^(k+1).
/// Throws SearchExhausted when a stage finds no irreducible perturbation in max_tries.
StagedBuild staged_build(const BlockStructure& a1, const BlockStructure& a2, const std::vector<StagePiece>& pieces,
                         double epsilon, const std::vector<FreeElement>& probe, std::uint64_t seed, int max_tries,
                         const NumericOptions& opts = {}, unsigned threads = 1);

}  // namespace fdalg

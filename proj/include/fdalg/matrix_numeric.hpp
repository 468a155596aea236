#pragma once

// Concrete matrix models of embedded algebras, Haar-random unitaries, and
// numerically rank-decided commutants and intersections in M_N.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fdalg/algebra_core.hpp"
#include "fdalg/random.hpp"

namespace fdalg {

// Matrices are carried in extended precision. Rank tolerances stay pinned to
// double-precision epsilon, so exact zeros land several decades below them.
using Real = long double;
using Complex = std::complex<Real>;
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

/// Knobs shared by every rank decision.
struct NumericOptions {
  /// Absolute singular-value cutoff. Default: N^2 * eps * sigma_max of the system.
  std::optional<double> tolerance;
  /// Re-decide at tolerance/10 and 10*tolerance and fail if the rank moves.
  bool check_rank_gap = true;
};

/// Outcome of one rank decision, kept for diagnostics.
struct RankDecision {
  std::vector<double> singular_values;  // descending
  double tolerance = 0.0;
  int nullity = 0;
};

/// A subalgebra of M_N given by an orthonormal basis under <X, Y> = tr(X* Y).
struct ConcreteRealization {
  int ambient_dim = 0;
  std::vector<CMatrix> basis;
  std::vector<CMatrix> generators;

  int dim() const noexcept { return static_cast<int>(basis.size()); }
  /// Basis vectors vec(X) as columns of an N^2 x dim matrix.
  CMatrix basis_matrix() const;
};

/// Image of a block-diagonal model element `value` (size blocks.block_sum())
/// under the representation with multiplicity row `mult`: block j is repeated
/// mult[j] times along the diagonal, blocks in order. Zero multiplicities are allowed.
CMatrix embed_block_diagonal(const BlockStructure& blocks, std::span<const int> mult, const CMatrix& value);

/// Matrix units e_ab of every block of the model, pushed through embed_block_diagonal.
std::vector<CMatrix> matrix_unit_images(const BlockStructure& blocks, std::span<const int> mult);

/// A generating sublist of those units: e_{a,a+1} and e_{a+1,a} inside each
/// block, or e_00 for a 1x1 block.
std::vector<CMatrix> generator_images(const BlockStructure& blocks, std::span<const int> mult);

/// Standard block-diagonal model of an embedded algebra. The basis is the
/// normalized amplified matrix units; generators come from generator_images().
ConcreteRealization realize(const EmbeddedAlgebra& e);

/// Model of a subalgebra class sitting inside realize(cls.parent).
ConcreteRealization realize_class(const SubalgebraClass& cls);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of diag(R) divided out.
CMatrix haar_unitary(int n, Rng& rng);
CMatrix haar_unitary(int n, std::uint64_t seed);

/// center * exp(radius * H) for a random skew-Hermitian H of operator norm 1.
/// The result lies within `radius` of `center` in operator norm.
CMatrix local_unitary(const CMatrix& center, double radius, Rng& rng);

double operator_norm(const CMatrix& m);
/// Operator norm of U*U - I.
double unitarity_defect(const CMatrix& u);

ConcreteRealization conjugate(const ConcreteRealization& a, const CMatrix& u);

/// Orthonormal basis of the null space of `system` with the rank decided at
/// the scale of an ambient dimension `ambient_dim`.
CMatrix nullspace(const CMatrix& system, int ambient_dim, const NumericOptions& opts, RankDecision* decision = nullptr);

/// Joint commutant {X : X g = g X for all g}.
ConcreteRealization commutant_basis(std::span<const CMatrix> gens, const NumericOptions& opts = {});
int commutant_dim(std::span<const CMatrix> gens, const NumericOptions& opts = {});

/// span(A) ∩ span(B); the result is re-verified to be a *-algebra.
ConcreteRealization intersect(const ConcreteRealization& a, const ConcreteRealization& b,
                              const NumericOptions& opts = {});

/// Largest residual of X_i X_j and X_i^* outside span(basis).
double closure_defect(const ConcreteRealization& a);

struct LocalMode {
  CMatrix center;
  double radius = 0.0;
};

struct DensityStats {
  int samples = 0;
  int trivial_count = 0;
  std::map<int, int> dims_histogram;
  std::uint64_t seed = 0;
  std::optional<double> radius;
  std::optional<CMatrix> center;
  std::vector<int> sample_dims;  // intersection dimension per sample index

  int min_dim() const;
};

/// Tallies dim(B1 ∩ u B2 u*) over sampled unitaries u. Sample i draws from
/// make_rng(seed, Stream::density, i).
DensityStats density_experiment(const EmbeddedAlgebra& b1, const EmbeddedAlgebra& b2, int samples,
                                std::uint64_t seed, const std::optional<LocalMode>& local = std::nullopt,
                                const NumericOptions& opts = {}, unsigned threads = 1);

}  // namespace fdalg

#include "fdalg/matrix_numeric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "fdalg/errors.hpp"
#include "fdalg/parallel.hpp"

namespace fdalg {

namespace {

using Eigen::Index;
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

constexpr Real kEps = std::numeric_limits<double>::epsilon();

CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

CMatrix unvec(const CVector& v, int n) { return Eigen::Map<const CMatrix>(v.data(), n, n); }

CVector normalized_identity(int n) {
  return vec(CMatrix::Identity(n, n)) / std::sqrt(static_cast<Real>(n));
}

CMatrix ginibre(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(n, n);
  const double s = 1.0 / std::sqrt(2.0);
  // Column-major fill keeps the draw order fixed.
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = Complex(static_cast<Real>(re * s), static_cast<Real>(im * s));
    }
  return g;
}

// Columns of `m` orthonormalized in order; columns that are numerically
// dependent on earlier ones are not expected here.
std::vector<CMatrix> orthonormal_columns(const CMatrix& m, int n) {
  Eigen::HouseholderQR<CMatrix> qr(m);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(m.rows(), m.cols());
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(m.cols()));
  for (Index k = 0; k < m.cols(); ++k) {
    // Fix the phase so the column has a positive overlap with its source.
    CVector col = q.col(k);
    const Complex overlap = col.dot(m.col(k));
    if (std::abs(overlap) > 0) col *= overlap / std::abs(overlap);
    out.push_back(unvec(col, n));
  }
  return out;
}

}  // namespace

CMatrix ConcreteRealization::basis_matrix() const {
  CMatrix m(static_cast<Index>(ambient_dim) * ambient_dim, static_cast<Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) m.col(static_cast<Index>(k)) = vec(basis[k]);
  return m;
}

CMatrix embed_block_diagonal(const BlockStructure& blocks, std::span<const int> mult, const CMatrix& value) {
  if (mult.size() != static_cast<std::size_t>(blocks.size()))
    throw ShapeError("multiplicity row does not match the block structure");
  const int model = blocks.block_sum();
  if (value.rows() != model || value.cols() != model)
    throw ShapeError("model element must be " + std::to_string(model) + "x" + std::to_string(model));
  int n = 0;
  for (int j = 0; j < blocks.size(); ++j) n += mult[static_cast<std::size_t>(j)] * blocks[j];
  CMatrix out = CMatrix::Zero(n, n);
  int src = 0, dst = 0;
  for (int j = 0; j < blocks.size(); ++j) {
    const int b = blocks[j];
    for (int c = 0; c < mult[static_cast<std::size_t>(j)]; ++c) {
      out.block(dst, dst, b, b) = value.block(src, src, b, b);
      dst += b;
    }
    src += b;
  }
  return out;
}

std::vector<CMatrix> matrix_unit_images(const BlockStructure& blocks, std::span<const int> mult) {
  const int model = blocks.block_sum();
  std::vector<CMatrix> out;
  int offset = 0;
  for (int j = 0; j < blocks.size(); ++j) {
    for (int a = 0; a < blocks[j]; ++a)
      for (int b = 0; b < blocks[j]; ++b) {
        CMatrix e = CMatrix::Zero(model, model);
        e(offset + a, offset + b) = 1;
        out.push_back(embed_block_diagonal(blocks, mult, e));
      }
    offset += blocks[j];
  }
  return out;
}

std::vector<CMatrix> generator_images(const BlockStructure& blocks, std::span<const int> mult) {
  const int model = blocks.block_sum();
  std::vector<CMatrix> out;
  auto push = [&](int r, int c) {
    CMatrix e = CMatrix::Zero(model, model);
    e(r, c) = 1;
    out.push_back(embed_block_diagonal(blocks, mult, e));
  };
  int offset = 0;
  for (int j = 0; j < blocks.size(); ++j) {
    if (blocks[j] == 1) push(offset, offset);
    for (int a = 0; a + 1 < blocks[j]; ++a) {
      push(offset + a, offset + a + 1);
      push(offset + a + 1, offset + a);
    }
    offset += blocks[j];
  }
  return out;
}

namespace {

std::vector<CMatrix> normalized(std::vector<CMatrix> units) {
  // Distinct matrix units have disjoint supports, so their images are already orthogonal.
  for (auto& u : units) u /= u.norm();
  return units;
}

// Unit e_ab of block j of C, pushed into the model of the parent through mu
// and then into M_N.
CMatrix class_unit(const SubalgebraClass& cls, int j, int a, int b) {
  const auto& c = cls.structure;
  const auto& parent = cls.parent;
  const auto& mu = cls.embedding;
  int offset = 0;
  for (int jj = 0; jj < j; ++jj) offset += c[jj];
  CMatrix e = CMatrix::Zero(c.block_sum(), c.block_sum());
  e(offset + a, offset + b) = 1;
  const int pm = parent.structure().block_sum();
  CMatrix in_parent = CMatrix::Zero(pm, pm);
  int pos = 0;
  for (int i = 0; i < mu.rows(); ++i) {
    std::vector<int> row(static_cast<std::size_t>(mu.cols()));
    for (int k = 0; k < mu.cols(); ++k) row[static_cast<std::size_t>(k)] = mu.at(i, k);
    const int bi = parent.structure()[i];
    in_parent.block(pos, pos, bi, bi) = embed_block_diagonal(c, row, e);
    pos += bi;
  }
  return embed_block_diagonal(parent.structure(), parent.mult(), in_parent);
}

}  // namespace

ConcreteRealization realize(const EmbeddedAlgebra& e) {
  ConcreteRealization r;
  r.ambient_dim = e.ambient_dim();
  r.basis = normalized(matrix_unit_images(e.structure(), e.mult()));
  r.generators = generator_images(e.structure(), e.mult());
  return r;
}

ConcreteRealization realize_class(const SubalgebraClass& cls) {
  const auto& c = cls.structure;
  ConcreteRealization r;
  r.ambient_dim = cls.parent.ambient_dim();
  std::vector<CMatrix> units;
  for (int j = 0; j < c.size(); ++j) {
    for (int a = 0; a < c[j]; ++a)
      for (int b = 0; b < c[j]; ++b) units.push_back(class_unit(cls, j, a, b));
    if (c[j] == 1) r.generators.push_back(class_unit(cls, j, 0, 0));
    for (int a = 0; a + 1 < c[j]; ++a) {
      r.generators.push_back(class_unit(cls, j, a, a + 1));
      r.generators.push_back(class_unit(cls, j, a + 1, a));
    }
  }
  r.basis = normalized(std::move(units));
  return r;
}

CMatrix haar_unitary(int n, Rng& rng) {
  if (n < 1) throw DomainError("haar_unitary needs n >= 1");
  const CMatrix g = ginibre(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    const Real a = std::abs(d);
    if (a > 0) q.col(k) *= d / a;
  }
  return q;
}

CMatrix haar_unitary(int n, std::uint64_t seed) {
  Rng rng = make_rng(seed, Stream::haar, 0);
  return haar_unitary(n, rng);
}

CMatrix local_unitary(const CMatrix& center, double radius, Rng& rng) {
  if (!(radius > 0.0)) throw DomainError("local perturbation radius must be positive");
  const int n = static_cast<int>(center.rows());
  const CMatrix g = ginibre(n, rng);
  // Hermitian K with H = iK skew-Hermitian; exp(r H) = V diag(exp(i r lambda)) V*.
  const CMatrix k = (g + g.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(k);
  const RVector lambda = es.eigenvalues();
  const Real scale = lambda.cwiseAbs().maxCoeff();
  CVector phases(n);
  for (Index i = 0; i < n; ++i)
    phases(i) = std::exp(Complex(0, static_cast<Real>(radius) * lambda(i) / (scale > 0 ? scale : 1)));
  const CMatrix& v = es.eigenvectors();
  return center * (v * phases.asDiagonal() * v.adjoint());
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return static_cast<double>(svd.singularValues()(0));
}

double unitarity_defect(const CMatrix& u) {
  return operator_norm(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

ConcreteRealization conjugate(const ConcreteRealization& a, const CMatrix& u) {
  ConcreteRealization out;
  out.ambient_dim = a.ambient_dim;
  const CMatrix ud = u.adjoint();
  out.basis.reserve(a.basis.size());
  for (const auto& x : a.basis) out.basis.push_back(u * x * ud);
  out.generators.reserve(a.generators.size());
  for (const auto& x : a.generators) out.generators.push_back(u * x * ud);
  return out;
}

CMatrix nullspace(const CMatrix& system, int ambient_dim, const NumericOptions& opts, RankDecision* decision) {
  const Index cols = system.cols();
  CMatrix work;
  if (system.rows() > cols) {
    Eigen::HouseholderQR<CMatrix> qr(system);
    work = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  } else {
    work = system;
  }
  Eigen::JacobiSVD<CMatrix> svd(work, Eigen::ComputeFullV);
  const RVector sv = svd.singularValues();
  const Real sigma_max = sv.size() > 0 ? sv(0) : 0;
  const Real n2 = static_cast<Real>(ambient_dim) * ambient_dim;
  const Real tol = opts.tolerance ? static_cast<Real>(*opts.tolerance) : n2 * kEps * sigma_max;

  auto rank_at = [&](Real t) {
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > t) ++r;
    return r;
  };
  const Index rank = rank_at(tol);
  if (opts.check_rank_gap) {
    const Index lo = rank_at(tol / 10.0), hi = rank_at(tol * 10.0);
    if (lo != rank || hi != rank) {
      Real nearest = 0;
      for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol / 10.0 && sv(i) <= tol * 10.0) nearest = sv(i);
      std::ostringstream os;
      os << "rank decision not separated: singular value " << nearest << " within a decade of tolerance " << tol;
      throw NumericalInstability(os.str(), static_cast<double>(nearest));
    }
  }
  if (decision) {
    decision->singular_values.assign(sv.data(), sv.data() + sv.size());
    decision->tolerance = static_cast<double>(tol);
    decision->nullity = static_cast<int>(cols - rank);
  }
  return svd.matrixV().rightCols(cols - rank);
}

namespace {

// Stacked commutator system, one N^2 x N^2 block per generator, plus a row
// pinning tr(X) = 0 so that the identity (always a solution) is split off exactly.
CMatrix commutator_system(std::span<const CMatrix> gens, int n) {
  const Index n2 = static_cast<Index>(n) * n;
  CMatrix sys = CMatrix::Zero(static_cast<Index>(gens.size()) * n2 + 1, n2);
  Index base = 0;
  for (const auto& g : gens) {
    if (g.rows() != n || g.cols() != n) throw ShapeError("generators must share one square shape");
    for (Index c = 0; c < n; ++c)
      for (Index r = 0; r < n; ++r) {
        const Index row = base + r + c * n;
        for (Index t = 0; t < n; ++t) {
          sys(row, r + t * n) += g(t, c);  // (X g)_{rc}
          sys(row, t + c * n) -= g(r, t);  // (g X)_{rc}
        }
      }
    base += n2;
  }
  sys.row(base) = normalized_identity(n).adjoint();
  return sys;
}

}  // namespace

ConcreteRealization commutant_basis(std::span<const CMatrix> gens, const NumericOptions& opts) {
  if (gens.empty()) throw DomainError("commutant_basis needs at least one generator");
  const int n = static_cast<int>(gens.front().rows());
  const CMatrix null = nullspace(commutator_system(gens, n), n, opts);
  ConcreteRealization out;
  out.ambient_dim = n;
  out.basis.push_back(CMatrix::Identity(n, n) / std::sqrt(static_cast<Real>(n)));
  for (Index k = 0; k < null.cols(); ++k) out.basis.push_back(unvec(null.col(k), n));
  out.generators = out.basis;
  return out;
}

int commutant_dim(std::span<const CMatrix> gens, const NumericOptions& opts) {
  if (gens.empty()) throw DomainError("commutant_dim needs at least one generator");
  const int n = static_cast<int>(gens.front().rows());
  return 1 + static_cast<int>(nullspace(commutator_system(gens, n), n, opts).cols());
}

double closure_defect(const ConcreteRealization& a) {
  const CMatrix q = a.basis_matrix();
  auto residual = [&](const CMatrix& x) {
    const CVector v = vec(x);
    return (v - q * (q.adjoint() * v)).norm();
  };
  Real worst = 0;
  for (std::size_t i = 0; i < a.basis.size(); ++i) {
    worst = std::max(worst, residual(a.basis[i].adjoint()));
    for (std::size_t j = 0; j < a.basis.size(); ++j) worst = std::max(worst, residual(a.basis[i] * a.basis[j]));
  }
  return static_cast<double>(worst);
}

ConcreteRealization intersect(const ConcreteRealization& a, const ConcreteRealization& b, const NumericOptions& opts) {
  if (a.ambient_dim != b.ambient_dim) throw ShapeError("intersect needs equal ambient dimensions");
  const int n = a.ambient_dim;
  const Index n2 = static_cast<Index>(n) * n;
  // dim(V ∩ W) = dim W - rank((I - V V*) W) for orthonormal V; W is the smaller
  // basis. Singular values of the projected system are sines of principal
  // angles, so small angles stay resolved.
  const bool a_small = a.dim() <= b.dim();
  const CMatrix v = (a_small ? b : a).basis_matrix();
  const CMatrix w = (a_small ? a : b).basis_matrix();
  const Index q = w.cols();

  // The trace row restricts to the traceless part; the identity is added back below.
  CMatrix sys(n2 + 1, q);
  sys.topRows(n2) = w - v * (v.adjoint() * w);
  sys.bottomRows(1) = normalized_identity(n).adjoint() * w;
  const CMatrix null = nullspace(sys, n, opts);

  CMatrix cols(n2, null.cols() + 1);
  cols.col(0) = normalized_identity(n);
  for (Index k = 0; k < null.cols(); ++k) {
    const CVector x = w * null.col(k);
    cols.col(k + 1) = x / x.norm();
  }
  ConcreteRealization out;
  out.ambient_dim = n;
  out.basis = orthonormal_columns(cols, n);
  out.generators = out.basis;

  const double defect = closure_defect(out);
  const double n2d = static_cast<double>(n2);
  const double limit =
      std::max(1e-10, std::sqrt(opts.tolerance.value_or(n2d * std::numeric_limits<double>::epsilon())));
  if (defect > limit) {
    std::ostringstream os;
    os << "intersection of dimension " << out.dim() << " is not closed under product/adjoint (defect " << defect
       << ", limit " << limit << ")";
    throw NumericalInstability(os.str(), defect);
  }
  return out;
}

int DensityStats::min_dim() const { return dims_histogram.empty() ? 0 : dims_histogram.begin()->first; }

DensityStats density_experiment(const EmbeddedAlgebra& b1, const EmbeddedAlgebra& b2, int samples,
                                std::uint64_t seed, const std::optional<LocalMode>& local,
                                const NumericOptions& opts, unsigned threads) {
  if (b1.ambient_dim() != b2.ambient_dim()) throw ShapeError("density_experiment needs equal ambient dimensions");
  if (samples < 1) throw DomainError("density_experiment needs at least one sample");
  const int n = b1.ambient_dim();
  if (local) {
    if (!(local->radius > 0.0)) throw DomainError("local radius must be positive");
    if (local->center.rows() != n || local->center.cols() != n) throw ShapeError("local center has the wrong shape");
  }
  const auto r1 = realize(b1);
  const auto r2 = realize(b2);

  DensityStats stats;
  stats.samples = samples;
  stats.seed = seed;
  if (local) {
    stats.radius = local->radius;
    stats.center = local->center;
  }
  stats.sample_dims.assign(static_cast<std::size_t>(samples), 0);
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t i) {
    Rng rng = make_rng(seed, Stream::density, i);
    const CMatrix u = local ? local_unitary(local->center, local->radius, rng) : haar_unitary(n, rng);
    stats.sample_dims[i] = intersect(r1, conjugate(r2, u), opts).dim();
  });
  for (int d : stats.sample_dims) ++stats.dims_histogram[d];
  stats.trivial_count = stats.dims_histogram.count(1) ? stats.dims_histogram.at(1) : 0;
  return stats;
}

}  // namespace fdalg

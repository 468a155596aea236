#include "fdalg/free_product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fdalg/errors.hpp"
#include "fdalg/parallel.hpp"

namespace fdalg {

namespace {

constexpr int kBatch = 32;

int row_dim(const BlockStructure& a, std::span<const int> mult) {
  if (mult.size() != static_cast<std::size_t>(a.size()))
    throw ShapeError("multiplicity row of length " + std::to_string(mult.size()) + " does not match " + a.to_string());
  int d = 0;
  for (int j = 0; j < a.size(); ++j) {
    if (mult[static_cast<std::size_t>(j)] < 0) throw DomainError("multiplicities must be nonnegative");
    d += mult[static_cast<std::size_t>(j)] * a[j];
  }
  return d;
}

void check_model_value(const BlockStructure& a, const CMatrix& x) {
  const int m = a.block_sum();
  if (x.rows() != m || x.cols() != m)
    throw ShapeError("letter value must be " + std::to_string(m) + "x" + std::to_string(m) + " for " + a.to_string());
  int offset = 0;
  for (int j = 0; j < a.size(); ++j) {
    for (int r = 0; r < m; ++r)
      for (int c = offset; c < offset + a[j]; ++c)
        if ((r < offset || r >= offset + a[j]) && std::abs(x(r, c)) > 1e-12)
          throw ShapeError("letter value is not block diagonal for " + a.to_string());
    offset += a[j];
  }
}

CMatrix identity(int n) { return CMatrix::Identity(n, n); }

}  // namespace

FreeElement FreeElement::unit(Complex c) {
  FreeElement x;
  x.terms_.push_back({c, {}});
  return x;
}

FreeElement FreeElement::letter(Side side, CMatrix value, Complex c) {
  FreeElement x;
  x.terms_.push_back({c, {Letter{side, std::move(value)}}});
  return x;
}

void FreeElement::add_term(Complex coefficient, std::vector<Letter> word) {
  for (std::size_t i = 1; i < word.size(); ++i)
    if (word[i].side == word[i - 1].side) throw DomainError("consecutive letters of a word must alternate sides");
  terms_.push_back({coefficient, std::move(word)});
}

FreeElement FreeElement::operator+(const FreeElement& other) const {
  FreeElement out = *this;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  return out;
}

FreeElement FreeElement::operator*(Complex c) const {
  FreeElement out = *this;
  for (auto& t : out.terms_) t.coefficient *= c;
  return out;
}

FreeElement FreeElement::operator*(const FreeElement& other) const {
  FreeElement out;
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) {
      std::vector<Letter> word = a.word;
      for (const auto& l : b.word) {
        if (!word.empty() && word.back().side == l.side) {
          word.back().value = word.back().value * l.value;
        } else {
          word.push_back(l);
        }
      }
      out.terms_.push_back({a.coefficient * b.coefficient, std::move(word)});
    }
  return out;
}

RepPair::RepPair(BlockStructure a1, std::vector<int> mult1, BlockStructure a2, std::vector<int> mult2,
                 std::optional<CMatrix> u)
    : a1_(std::move(a1)), a2_(std::move(a2)) {
  const int d1 = row_dim(a1_, mult1);
  const int d2 = row_dim(a2_, mult2);
  if (d1 != d2)
    throw ShapeError("factor representations have dimensions " + std::to_string(d1) + " and " + std::to_string(d2));
  if (d1 == 0) throw DomainError("representation space must be nonzero");
  dim_ = d1;
  pieces1_.push_back(std::move(mult1));
  pieces2_.push_back(std::move(mult2));
  u_ = u ? std::move(*u) : identity(dim_);
  if (u_.rows() != dim_ || u_.cols() != dim_) throw ShapeError("perturbing unitary has the wrong shape");
  if (unitarity_defect(u_) > 1e-12) throw DomainError("perturbing matrix is not unitary");
}

RepPair RepPair::direct_sum(const RepPair& a, const RepPair& b) {
  if (a.a1_ != b.a1_ || a.a2_ != b.a2_) throw ShapeError("direct sum needs the same factors");
  RepPair out;
  out.a1_ = a.a1_;
  out.a2_ = a.a2_;
  out.pieces1_ = a.pieces1_;
  out.pieces1_.insert(out.pieces1_.end(), b.pieces1_.begin(), b.pieces1_.end());
  out.pieces2_ = a.pieces2_;
  out.pieces2_.insert(out.pieces2_.end(), b.pieces2_.begin(), b.pieces2_.end());
  out.dim_ = a.dim_ + b.dim_;
  out.u_ = CMatrix::Zero(out.dim_, out.dim_);
  out.u_.topLeftCorner(a.dim_, a.dim_) = a.u_;
  out.u_.bottomRightCorner(b.dim_, b.dim_) = b.u_;
  return out;
}

std::vector<int> RepPair::mult1() const {
  std::vector<int> m(static_cast<std::size_t>(a1_.size()), 0);
  for (const auto& p : pieces1_)
    for (std::size_t j = 0; j < m.size(); ++j) m[j] += p[j];
  return m;
}

std::vector<int> RepPair::mult2() const {
  std::vector<int> m(static_cast<std::size_t>(a2_.size()), 0);
  for (const auto& p : pieces2_)
    for (std::size_t j = 0; j < m.size(); ++j) m[j] += p[j];
  return m;
}

RepPair RepPair::with_unitary(CMatrix u) const {
  if (u.rows() != dim_ || u.cols() != dim_) throw ShapeError("perturbing unitary has the wrong shape");
  if (unitarity_defect(u) > 1e-12) throw DomainError("perturbing matrix is not unitary");
  RepPair out = *this;
  out.u_ = std::move(u);
  return out;
}

CMatrix RepPair::amplify(const BlockStructure& a, const std::vector<std::vector<int>>& pieces,
                         const CMatrix& x) const {
  check_model_value(a, x);
  CMatrix out = CMatrix::Zero(dim_, dim_);
  int pos = 0;
  for (const auto& p : pieces) {
    const CMatrix part = embed_block_diagonal(a, p, x);
    out.block(pos, pos, part.rows(), part.cols()) = part;
    pos += static_cast<int>(part.rows());
  }
  return out;
}

CMatrix RepPair::pi1(const CMatrix& a) const { return amplify(a1_, pieces1_, a); }

CMatrix RepPair::pi2(const CMatrix& b) const { return amplify(a2_, pieces2_, b); }

CMatrix RepPair::twisted_pi2(const CMatrix& b) const { return u_ * pi2(b) * u_.adjoint(); }

std::vector<CMatrix> RepPair::generators() const {
  std::vector<CMatrix> out;
  const std::vector<int> one1(static_cast<std::size_t>(a1_.size()), 1);
  for (const auto& g : generator_images(a1_, one1)) out.push_back(pi1(g));
  const std::vector<int> one2(static_cast<std::size_t>(a2_.size()), 1);
  for (const auto& g : generator_images(a2_, one2)) out.push_back(twisted_pi2(g));
  return out;
}

CMatrix evaluate(const RepPair& rep, const FreeElement& x) {
  CMatrix total = CMatrix::Zero(rep.dim(), rep.dim());
  for (const auto& t : x.terms()) {
    CMatrix prod = identity(rep.dim());
    for (const auto& l : t.word) prod = prod * (l.side == Side::first ? rep.pi1(l.value) : rep.twisted_pi2(l.value));
    total += t.coefficient * prod;
  }
  return total;
}

double lipschitz_bound(const FreeElement& x) {
  double total = 0.0;
  for (const auto& t : x.terms()) {
    int second = 0;
    double norms = 1.0;
    for (const auto& l : t.word) {
      if (l.side == Side::second) ++second;
      norms *= operator_norm(l.value);
    }
    total += static_cast<double>(std::abs(t.coefficient)) * 2.0 * second * norms;
  }
  return total;
}

FactorRcp rcp_check(const BlockStructure& a, std::span<const int> mult) {
  row_dim(a, mult);
  FactorRcp out;
  for (int j = 0; j < a.size(); ++j) out.ranks.push_back(mult[static_cast<std::size_t>(j)] * a[j]);
  out.passes = std::all_of(out.ranks.begin(), out.ranks.end(), [&](int r) { return r == out.ranks.front(); });
  return out;
}

RcpReport rcp_check(const RepPair& rep) {
  return {rcp_check(rep.a1(), rep.mult1()), rcp_check(rep.a2(), rep.mult2())};
}

std::vector<int> pad_multiplicities(std::span<const int> mult, std::span<const int> q) {
  if (mult.size() != q.size()) throw ShapeError("padding row length does not match the multiplicity row");
  std::vector<int> out(mult.size());
  for (std::size_t j = 0; j < mult.size(); ++j) {
    if (q[j] < 0) throw DomainError("padding multiplicities must be nonnegative");
    out[j] = mult[j] + q[j];
  }
  return out;
}

RcpBalance rcp_balance(const BlockStructure& a1, std::span<const int> mult1, const BlockStructure& a2,
                       std::span<const int> mult2) {
  const int d1 = row_dim(a1, mult1);
  const int d2 = row_dim(a2, mult2);
  if (d1 != d2) throw ShapeError("rcp_balance needs a common representation space");

  auto ratios = [](const BlockStructure& a) {
    int n = 1;
    for (int b : a.blocks()) n = std::lcm(n, b);
    std::vector<int> r;
    for (int b : a.blocks()) r.push_back(n / b);
    return std::pair{n, r};
  };
  const auto [n1, r1] = ratios(a1);
  const auto [n2, r2] = ratios(a2);

  RcpBalance out;
  out.input_dim = d1;
  out.s = 1;
  for (std::size_t j = 0; j < r1.size(); ++j) out.s = std::max(out.s, (mult1[j] + r1[j] - 1) / r1[j]);
  for (std::size_t j = 0; j < r2.size(); ++j) out.s = std::max(out.s, (mult2[j] + r2[j] - 1) / r2[j]);
  for (std::size_t j = 0; j < r1.size(); ++j) out.pad1.push_back(out.s * r1[j] - mult1[j]);
  for (std::size_t j = 0; j < r2.size(); ++j) out.pad2.push_back(out.s * r2[j] - mult2[j]);

  // Every central projection now has rank s * n_i.
  const int dim1 = out.s * n1 * a1.size();
  const int dim2 = out.s * n2 * a2.size();
  const int common = std::lcm(dim1, dim2);
  out.k1 = common / dim1;
  out.k2 = common / dim2;
  for (int r : r1) out.mult1.push_back(out.k1 * out.s * r);
  for (int r : r2) out.mult2.push_back(out.k2 * out.s * r);
  out.dim = common;
  return out;
}

int joint_commutant_dim(const RepPair& rep, const NumericOptions& opts) {
  const auto gens = rep.generators();
  return commutant_dim(gens, opts);
}

bool irreducibility_check(const RepPair& rep, const NumericOptions& opts) { return joint_commutant_dim(rep, opts) == 1; }

CMatrix dpi_perturbation(int dim, std::uint64_t seed, std::uint64_t index, std::optional<double> radius) {
  Rng rng = make_rng(seed, Stream::dpi, index);
  return radius ? local_unitary(identity(dim), *radius, rng) : haar_unitary(dim, rng);
}

DensityStats dpi_probe(const RepPair& rep, int samples, std::uint64_t seed, std::optional<double> radius,
                       const NumericOptions& opts, unsigned threads) {
  if (samples < 1) throw DomainError("dpi_probe needs at least one sample");
  if (radius && !(*radius > 0.0)) throw DomainError("local radius must be positive");
  DensityStats stats;
  stats.samples = samples;
  stats.seed = seed;
  if (radius) {
    stats.radius = radius;
    stats.center = rep.u();
  }
  stats.sample_dims.assign(static_cast<std::size_t>(samples), 0);
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t i) {
    const CMatrix w = dpi_perturbation(rep.dim(), seed, i, radius);
    stats.sample_dims[i] = joint_commutant_dim(rep.with_unitary(w * rep.u()), opts);
  });
  for (int d : stats.sample_dims) ++stats.dims_histogram[d];
  stats.trivial_count = stats.dims_histogram.count(1) ? stats.dims_histogram.at(1) : 0;
  return stats;
}

double StagedBuild::bound_sum() const {
  double s = 0.0;
  for (const auto& st : stages) s += st.bound;
  return s;
}

StagedBuild staged_build(const BlockStructure& a1, const BlockStructure& a2, const std::vector<StagePiece>& pieces,
                         double epsilon, const std::vector<FreeElement>& probe, std::uint64_t seed, int max_tries,
                         const NumericOptions& opts, unsigned threads) {
  if (pieces.empty()) throw DomainError("staged_build needs at least one stage");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (max_tries < 1) throw DomainError("max_tries must be at least 1");

  std::vector<double> lip;
  for (const auto& x : probe) lip.push_back(lipschitz_bound(x));

  StagedBuild build;
  build.a1 = a1;
  build.a2 = a2;
  build.epsilon = epsilon;
  build.seed = seed;
  build.max_tries = max_tries;

  std::optional<RepPair> prev;
  for (std::size_t s = 0; s < pieces.size(); ++s) {
    const int k = static_cast<int>(s) + 1;
    StageRecord rec;
    rec.index = k;
    rec.mult1 = pieces[s].mult1;
    rec.mult2 = pieces[s].mult2;
    RepPair piece(a1, rec.mult1, a2, rec.mult2);
    if (!rcp_check(piece).passes()) {
      const auto bal = rcp_balance(a1, rec.mult1, a2, rec.mult2);
      rec.mult1 = bal.mult1;
      rec.mult2 = bal.mult2;
      rec.balanced = true;
      piece = RepPair(a1, rec.mult1, a2, rec.mult2);
    }
    // theta_k^0: the previous stage plus the new piece, unperturbed.
    const RepPair base = prev ? RepPair::direct_sum(*prev, piece) : piece;
    const int dim = base.dim();
    rec.dim = dim;
    rec.budget = epsilon / std::ldexp(1.0, k + 1);
    rec.probe_limit = 1.0 / std::ldexp(1.0, k + 1);

    std::vector<CMatrix> base_values;
    for (const auto& x : probe) base_values.push_back(evaluate(base, x));

    // Largest radius whose worst-case probe drift stays under the stage limit.
    double radius = rec.budget;
    for (double l : lip)
      if (l > 0.0) radius = std::min(radius, rec.probe_limit / l);

    std::optional<CMatrix> found;
    int best = std::numeric_limits<int>::max();
    int tries = 1;
    {
      const int d = joint_commutant_dim(base, opts);
      best = d;
      if (d == 1) {
        found = identity(dim);
        rec.radius = 0.0;
      }
    }
    while (!found && tries < max_tries) {
      const int batch = std::min(kBatch, max_tries - tries);
      std::vector<CMatrix> cand(static_cast<std::size_t>(batch));
      std::vector<int> dims(static_cast<std::size_t>(batch), 0);
      parallel_for(static_cast<std::size_t>(batch), threads, [&](std::size_t i) {
        const std::uint64_t index = (static_cast<std::uint64_t>(k) << 32) | static_cast<std::uint64_t>(tries + static_cast<int>(i));
        Rng rng = make_rng(seed, Stream::staged, index);
        cand[i] = local_unitary(identity(dim), radius, rng);
        dims[i] = joint_commutant_dim(base.with_unitary(cand[i] * base.u()), opts);
      });
      for (int i = 0; i < batch; ++i) {
        best = std::min(best, dims[static_cast<std::size_t>(i)]);
        if (dims[static_cast<std::size_t>(i)] == 1) {
          found = cand[static_cast<std::size_t>(i)];
          tries += i + 1;
          rec.radius = radius;
          break;
        }
      }
      if (!found) {
        tries += batch;
        radius /= 2.0;
      }
    }
    if (!found) {
      std::ostringstream os;
      os << "stage " << k << " (dim " << dim << "): no irreducible perturbation in " << tries
         << " tries; smallest joint commutant dimension " << best;
      throw SearchExhausted(os.str(), k, dim, best, tries);
    }

    rec.u = *found;
    rec.cumulative = rec.u * base.u();
    rec.bound = operator_norm(rec.u - identity(dim));
    rec.tries = tries;
    const RepPair current = base.with_unitary(rec.cumulative);
    rec.commutant_dim = joint_commutant_dim(current, opts);
    rec.irreducible = rec.commutant_dim == 1;
    for (std::size_t p = 0; p < probe.size(); ++p) {
      rec.probe_residuals.push_back(operator_norm(evaluate(current, probe[p]) - base_values[p]));
      rec.probe_bounds.push_back(lip[p] * rec.bound);
    }
    build.stages.push_back(std::move(rec));
    prev = current;
  }
  return build;
}

}  // namespace fdalg

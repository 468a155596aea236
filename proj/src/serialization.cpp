#include "fdalg/serialization.hpp"

#include "fdalg/errors.hpp"

namespace fdalg {

json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back({static_cast<double>(m(r, c).real()), static_cast<double>(m(r, c).imag())});
  return {{"shape", {m.rows(), m.cols()}}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("data"))
    throw ShapeError("matrix must be an object with \"shape\" and \"data\"");
  const auto& shape = j.at("shape");
  if (!shape.is_array() || shape.size() != 2 || !shape[0].is_number_integer() || !shape[1].is_number_integer())
    throw ShapeError("matrix shape must be [rows, cols]");
  const auto rows = shape[0].get<Eigen::Index>();
  const auto cols = shape[1].get<Eigen::Index>();
  if (rows < 0 || cols < 0) throw ShapeError("matrix shape must be nonnegative");
  const auto& data = j.at("data");
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw ShapeError("matrix data length does not match its shape");
  CMatrix m(rows, cols);
  for (Eigen::Index k = 0; k < rows * cols; ++k) {
    const auto& e = data[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ShapeError("matrix entries must be [re, im] pairs");
    m(k / cols, k % cols) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

void to_json(json& j, const BlockStructure& b) {
  j = std::vector<int>(b.blocks().begin(), b.blocks().end());
}

void to_json(json& j, const MultiplicityMatrix& m) {
  j = {{"shape", {m.rows(), m.cols()}}, {"entries", m.entries()}};
}

void to_json(json& j, const EmbeddedAlgebra& e) {
  j = {{"ambient_dim", e.ambient_dim()}, {"blocks", e.structure()}, {"mult", e.mult()}, {"name", e.to_string()}};
}

void to_json(json& j, const SubalgebraClass& c) {
  j = {{"structure", c.structure},
       {"name", c.structure.to_string()},
       {"embedding", c.embedding},
       {"ambient_mult", c.ambient_mult()}};
}

void to_json(json& j, const DimReport& r) {
  j = {{"stab_dim", r.stab_dim}, {"class_dim", r.class_dim}, {"orbit_dims", r.orbit_dims}, {"ambient_sq", r.ambient_sq}};
  j["d_value"] = r.d_value ? json(*r.d_value) : json(nullptr);
}

void to_json(json& j, const ClassAudit& a) {
  j = {{"class", a.cls}, {"stab_dim", a.stab_dim}, {"class_dim", a.class_dim}, {"verdict", to_string(a.verdict)}};
  j["max_orbit_dim"] = a.max_orbit_dim ? json(*a.max_orbit_dim) : json(nullptr);
  j["d_value"] = a.d_value ? json(*a.d_value) : json(nullptr);
  j["min_d_c2"] = a.min_d_c2 ? json(*a.min_d_c2) : json(nullptr);
}

void to_json(json& j, const Thm41Report& r) {
  j = {{"hypothesis_case", r.hypothesis_case},
       {"covered", r.covered()},
       {"holds", r.holds()},
       {"ambient_sq", r.ambient_sq},
       {"simple_route_applies", r.simple_route_applies},
       {"audited", r.audited},
       {"violations", r.violations},
       {"classes", r.rows}};
}

void to_json(json& j, const DensityStats& s) {
  json hist = json::object();
  for (const auto& [d, count] : s.dims_histogram) hist[std::to_string(d)] = count;
  j = {{"samples", s.samples},
       {"trivial_count", s.trivial_count},
       {"min_dim", s.min_dim()},
       {"dims_histogram", std::move(hist)},
       {"sample_dims", s.sample_dims},
       {"seed", s.seed}};
  j["radius"] = s.radius ? json(*s.radius) : json(nullptr);
  j["center"] = s.center ? matrix_to_json(*s.center) : json(nullptr);
}

void to_json(json& j, const FactorRcp& r) { j = {{"ranks", r.ranks}, {"passes", r.passes}}; }

void to_json(json& j, const RcpReport& r) {
  j = {{"first", r.first}, {"second", r.second}, {"passes", r.passes()}};
}

void to_json(json& j, const RcpBalance& b) {
  j = {{"s", b.s},       {"pad1", b.pad1},   {"pad2", b.pad2},   {"k1", b.k1},
       {"k2", b.k2},     {"mult1", b.mult1}, {"mult2", b.mult2}, {"dim", b.dim},
       {"input_dim", b.input_dim}};
}

void to_json(json& j, const StageRecord& s) {
  j = {{"index", s.index},
       {"dim", s.dim},
       {"mult1", s.mult1},
       {"mult2", s.mult2},
       {"balanced", s.balanced},
       {"u", matrix_to_json(s.u)},
       {"cumulative", matrix_to_json(s.cumulative)},
       {"bound", s.bound},
       {"budget", s.budget},
       {"radius", s.radius},
       {"tries", s.tries},
       {"commutant_dim", s.commutant_dim},
       {"irreducible", s.irreducible},
       {"probe_residuals", s.probe_residuals},
       {"probe_bounds", s.probe_bounds},
       {"probe_limit", s.probe_limit}};
}

void to_json(json& j, const StagedBuild& b) {
  j = {{"a1", b.a1},         {"a2", b.a2},           {"epsilon", b.epsilon},       {"seed", b.seed},
       {"max_tries", b.max_tries}, {"stages", b.stages}, {"bound_sum", b.bound_sum()}};
}

void to_json(json& j, const FreeElement& x) {
  j = json::array();
  for (const auto& t : x.terms()) {
    json word = json::array();
    for (const auto& l : t.word) word.push_back({{"side", static_cast<int>(l.side)}, {"value", matrix_to_json(l.value)}});
    j.push_back({{"coefficient", {static_cast<double>(t.coefficient.real()), static_cast<double>(t.coefficient.imag())}},
                 {"word", std::move(word)}});
  }
}

FreeElement free_element_from_json(const json& j) {
  if (!j.is_array()) throw ShapeError("free element must be an array of terms");
  FreeElement x;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("word")) throw ShapeError("term must be an object with a \"word\"");
    Complex c{1, 0};
    if (t.contains("coefficient")) {
      const auto& cj = t.at("coefficient");
      if (!cj.is_array() || cj.size() != 2 || !cj[0].is_number() || !cj[1].is_number())
        throw ShapeError("coefficient must be [re, im]");
      c = Complex(cj[0].get<double>(), cj[1].get<double>());
    }
    std::vector<Letter> word;
    for (const auto& l : t.at("word")) {
      if (!l.is_object() || !l.contains("side") || !l.contains("value")) throw ShapeError("letter needs side and value");
      const int side = l.at("side").get<int>();
      if (side != 1 && side != 2) throw DomainError("letter side must be 1 or 2");
      word.push_back({static_cast<Side>(side), matrix_from_json(l.at("value"))});
    }
    x.add_term(c, std::move(word));
  }
  return x;
}

}  // namespace fdalg

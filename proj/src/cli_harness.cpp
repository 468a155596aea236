#include "fdalg/cli_harness.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "fdalg/dimension_engine.hpp"
#include "fdalg/errors.hpp"
#include "fdalg/serialization.hpp"
#include "fdalg/version.hpp"

namespace fdalg {

namespace {

bool embedded_command(const std::string& c) {
  return c == "enumerate" || c == "dims" || c == "thm41-check" || c == "density";
}

std::size_t expected_algebras(const std::string& c) { return c == "enumerate" ? 1 : 2; }

class Checker {
 public:
  explicit Checker(std::vector<Diagnostic>& out) : out_(out) {}

  void add(std::string pointer, std::string message) { out_.push_back({std::move(pointer), std::move(message)}); }

  bool int_list(const nlohmann::json& j, const std::string& ptr, bool allow_empty) {
    if (!j.is_array()) {
      add(ptr, "expected an array of integers");
      return false;
    }
    if (!allow_empty && j.empty()) {
      add(ptr, "must not be empty");
      return false;
    }
    bool ok = true;
    for (std::size_t i = 0; i < j.size(); ++i)
      if (!j[i].is_number_integer()) {
        add(ptr + "/" + std::to_string(i), "expected an integer");
        ok = false;
      }
    return ok;
  }

 private:
  std::vector<Diagnostic>& out_;
};

std::vector<int> ints(const nlohmann::json& j) { return j.get<std::vector<int>>(); }

const std::set<std::string> kKeys = {"command", "ambient_dim", "algebras", "class",     "samples", "seed",
                                     "epsilon", "radius",      "probe_file", "tolerance", "output", "format",
                                     "threads", "max_tries",   "balance",  "stages"};

}  // namespace

std::vector<Diagnostic> validate(const nlohmann::json& raw) {
  std::vector<Diagnostic> diags;
  Checker ck(diags);
  if (!raw.is_object()) {
    ck.add("", "config must be a JSON object");
    return diags;
  }
  for (const auto& [key, value] : raw.items())
    if (!kKeys.count(key)) ck.add("/" + key, "unknown key");

  std::string command;
  if (!raw.contains("command")) {
    ck.add("/command", "missing command");
  } else if (!raw["command"].is_string()) {
    ck.add("/command", "expected a string");
  } else {
    command = raw["command"].get<std::string>();
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), command) == names.end()) ck.add("/command", "unknown command " + command);
  }

  if (!raw.contains("seed") || raw["seed"].is_null()) {
    ck.add("/seed", "missing seed; every run needs an explicit 64-bit seed");
  } else if (!raw["seed"].is_number_unsigned() && !(raw["seed"].is_number_integer() && raw["seed"].get<long long>() >= 0)) {
    ck.add("/seed", "expected a nonnegative 64-bit integer");
  }

  auto positive_int = [&](const char* key, int min) {
    if (!raw.contains(key) || raw[key].is_null()) return;
    if (!raw[key].is_number_integer() || raw[key].get<long long>() < min)
      ck.add(std::string("/") + key, "expected an integer >= " + std::to_string(min));
  };
  auto positive_real = [&](const char* key) {
    if (!raw.contains(key) || raw[key].is_null()) return;
    if (!raw[key].is_number() || !(raw[key].get<double>() > 0.0))
      ck.add(std::string("/") + key, "expected a positive number");
  };
  positive_int("ambient_dim", 1);
  positive_int("samples", 1);
  positive_int("threads", 0);
  positive_int("max_tries", 1);
  positive_real("epsilon");
  positive_real("radius");
  positive_real("tolerance");
  for (const char* key : {"output", "probe_file"})
    if (raw.contains(key) && !raw[key].is_null() && !raw[key].is_string())
      ck.add(std::string("/") + key, "expected a string");
  if (raw.contains("format") && (!raw["format"].is_string() ||
                                 (raw["format"] != "json" && raw["format"] != "csv")))
    ck.add("/format", "expected \"json\" or \"csv\"");
  if (raw.contains("balance") && !raw["balance"].is_boolean()) ck.add("/balance", "expected a boolean");

  const bool embedded = embedded_command(command);
  std::optional<int> n;
  if (raw.contains("ambient_dim") && raw["ambient_dim"].is_number_integer() && raw["ambient_dim"].get<long long>() >= 1)
    n = raw["ambient_dim"].get<int>();

  // Algebras: blocks and multiplicity rows.
  std::vector<std::optional<BlockStructure>> structures;
  std::vector<int> dims;
  if (raw.contains("algebras")) {
    const auto& algs = raw["algebras"];
    if (!algs.is_array()) {
      ck.add("/algebras", "expected an array");
    } else {
      if (!command.empty() && command != "enumerate" && algs.size() != expected_algebras(command))
        ck.add("/algebras", command + " needs exactly " + std::to_string(expected_algebras(command)) + " algebras");
      if (command == "enumerate" && algs.size() > 1) ck.add("/algebras", "enumerate takes at most one algebra");
      for (std::size_t i = 0; i < algs.size(); ++i) {
        const std::string base = "/algebras/" + std::to_string(i);
        const auto& a = algs[i];
        structures.emplace_back();
        if (!a.is_object()) {
          ck.add(base, "expected an object with blocks and mult");
          continue;
        }
        for (const auto& [key, value] : a.items())
          if (key != "blocks" && key != "mult") ck.add(base + "/" + key, "unknown key");
        if (!a.contains("blocks")) {
          ck.add(base + "/blocks", "missing blocks");
          continue;
        }
        if (!ck.int_list(a["blocks"], base + "/blocks", false)) continue;
        const auto blocks = ints(a["blocks"]);
        bool blocks_ok = true;
        for (std::size_t j = 0; j < blocks.size(); ++j)
          if (blocks[j] < 1) {
            ck.add(base + "/blocks/" + std::to_string(j), "block size must be positive");
            blocks_ok = false;
          }
        if (!blocks_ok) continue;
        structures.back() = BlockStructure(blocks);
        if (command == "build-primitive" && !a.contains("mult")) continue;
        if (!a.contains("mult")) {
          ck.add(base + "/mult", "missing mult");
          continue;
        }
        if (!ck.int_list(a["mult"], base + "/mult", false)) continue;
        const auto mult = ints(a["mult"]);
        if (mult.size() != blocks.size()) {
          ck.add(base + "/mult", "mult has " + std::to_string(mult.size()) + " entries for " +
                                     std::to_string(blocks.size()) + " blocks");
          continue;
        }
        int total = 0;
        bool mult_ok = true;
        for (std::size_t j = 0; j < mult.size(); ++j) {
          if (mult[j] < (embedded ? 1 : 0)) {
            ck.add(base + "/mult/" + std::to_string(j),
                   embedded ? "multiplicity must be at least 1" : "multiplicity must be nonnegative");
            mult_ok = false;
          }
          total += mult[j] * blocks[j];
        }
        if (!mult_ok) continue;
        if (n && total != *n) {
          ck.add(base + "/mult", "sum of mult * blocks is " + std::to_string(total) + ", expected ambient_dim " +
                                     std::to_string(*n));
        } else if (total < 1) {
          ck.add(base + "/mult", "representation space must be nonzero");
        } else if (!n && !dims.empty() && total != dims.front()) {
          ck.add(base + "/mult", "sum of mult * blocks is " + std::to_string(total) + ", but algebra 0 gives " +
                                     std::to_string(dims.front()));
        }
        dims.push_back(total);
      }
    }
  } else if (!command.empty() && command != "enumerate") {
    ck.add("/algebras", "missing algebras");
  }
  if (embedded && !n) {
    if (!raw.contains("ambient_dim")) ck.add("/ambient_dim", "missing ambient_dim");
  }

  if (raw.contains("class")) {
    const auto& c = raw["class"];
    if (command != "dims") ck.add("/class", "class is only used by dims");
    if (!c.is_object() || !c.contains("blocks") || !c.contains("embedding")) {
      ck.add("/class", "expected an object with blocks and embedding");
    } else if (ck.int_list(c["blocks"], "/class/blocks", false) &&
               ck.int_list(c["embedding"], "/class/embedding", false) && !structures.empty() && structures[0]) {
      const auto blocks = ints(c["blocks"]);
      if (std::any_of(blocks.begin(), blocks.end(), [](int b) { return b < 1; })) {
        ck.add("/class/blocks", "block size must be positive");
      } else {
        const auto emb = ints(c["embedding"]);
        const std::size_t want = static_cast<std::size_t>(structures[0]->size()) * blocks.size();
        if (emb.size() != want) {
          ck.add("/class/embedding", "expected " + std::to_string(want) + " entries (row-major mu(B1, C))");
        } else if (std::any_of(emb.begin(), emb.end(), [](int e) { return e < 0; })) {
          ck.add("/class/embedding", "entries must be nonnegative");
        } else {
          MultiplicityMatrix mu(BlockStructure(blocks), *structures[0], emb);
          if (!mu.unital()) ck.add("/class/embedding", "embedding is not unital");
          else if (!mu.injective()) ck.add("/class/embedding", "embedding is not injective");
        }
      }
    }
  }

  if (command == "build-primitive") {
    if (!raw.contains("stages")) {
      ck.add("/stages", "missing stages");
    } else if (!raw["stages"].is_array() || raw["stages"].empty()) {
      ck.add("/stages", "expected a nonempty array");
    } else {
      for (std::size_t k = 0; k < raw["stages"].size(); ++k) {
        const std::string base = "/stages/" + std::to_string(k);
        const auto& s = raw["stages"][k];
        if (!s.is_object() || !s.contains("mult1") || !s.contains("mult2")) {
          ck.add(base, "expected an object with mult1 and mult2");
          continue;
        }
        int totals[2] = {0, 0};
        bool ok = true;
        for (int side = 0; side < 2; ++side) {
          const std::string key = side == 0 ? "mult1" : "mult2";
          if (!ck.int_list(s[key], base + "/" + key, false)) {
            ok = false;
            continue;
          }
          const auto m = ints(s[key]);
          const auto idx = static_cast<std::size_t>(side);
          if (idx >= structures.size() || !structures[idx]) {
            ok = false;
            continue;
          }
          const auto& a = *structures[idx];
          if (m.size() != static_cast<std::size_t>(a.size())) {
            ck.add(base + "/" + key, "length does not match algebra " + std::to_string(side));
            ok = false;
            continue;
          }
          for (std::size_t j = 0; j < m.size(); ++j) {
            if (m[j] < 0) {
              ck.add(base + "/" + key + "/" + std::to_string(j), "multiplicity must be nonnegative");
              ok = false;
            }
            totals[side] += m[j] * a[static_cast<int>(j)];
          }
        }
        if (ok && totals[0] != totals[1])
          ck.add(base, "factor dimensions differ: " + std::to_string(totals[0]) + " vs " + std::to_string(totals[1]));
        else if (ok && totals[0] == 0)
          ck.add(base, "stage adds a zero-dimensional piece");
      }
    }
  } else if (raw.contains("stages")) {
    ck.add("/stages", "stages are only used by build-primitive");
  }
  return diags;
}

ExperimentConfig config_from_json(const nlohmann::json& raw) {
  ExperimentConfig cfg;
  cfg.command = raw.at("command").get<std::string>();
  if (raw.contains("ambient_dim") && !raw["ambient_dim"].is_null()) cfg.ambient_dim = raw["ambient_dim"].get<int>();
  if (raw.contains("algebras"))
    for (const auto& a : raw["algebras"])
      cfg.algebras.push_back({ints(a.at("blocks")), a.contains("mult") ? ints(a["mult"]) : std::vector<int>{}});
  if (raw.contains("class")) cfg.class_spec = ClassSpec{ints(raw["class"]["blocks"]), ints(raw["class"]["embedding"])};
  if (raw.contains("samples") && !raw["samples"].is_null()) cfg.samples = raw["samples"].get<int>();
  cfg.seed = raw.at("seed").get<std::uint64_t>();
  if (raw.contains("epsilon") && !raw["epsilon"].is_null()) cfg.epsilon = raw["epsilon"].get<double>();
  if (raw.contains("radius") && !raw["radius"].is_null()) cfg.radius = raw["radius"].get<double>();
  if (raw.contains("probe_file") && !raw["probe_file"].is_null()) cfg.probe_file = raw["probe_file"].get<std::string>();
  if (raw.contains("tolerance") && !raw["tolerance"].is_null()) cfg.tolerance = raw["tolerance"].get<double>();
  if (raw.contains("output") && !raw["output"].is_null()) cfg.output = raw["output"].get<std::string>();
  if (raw.contains("format")) cfg.format = raw["format"].get<std::string>();
  if (raw.contains("threads") && !raw["threads"].is_null()) cfg.threads = raw["threads"].get<unsigned>();
  if (raw.contains("max_tries") && !raw["max_tries"].is_null()) cfg.max_tries = raw["max_tries"].get<int>();
  if (raw.contains("balance")) cfg.balance = raw["balance"].get<bool>();
  if (raw.contains("stages"))
    for (const auto& s : raw["stages"]) cfg.stages.push_back({ints(s.at("mult1")), ints(s.at("mult2"))});
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["ambient_dim"] = cfg.ambient_dim ? nlohmann::json(*cfg.ambient_dim) : nlohmann::json(nullptr);
  j["algebras"] = nlohmann::json::array();
  for (const auto& a : cfg.algebras) j["algebras"].push_back({{"blocks", a.blocks}, {"mult", a.mult}});
  j["class"] = cfg.class_spec
                   ? nlohmann::json{{"blocks", cfg.class_spec->blocks}, {"embedding", cfg.class_spec->embedding}}
                   : nlohmann::json(nullptr);
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed ? nlohmann::json(*cfg.seed) : nlohmann::json(nullptr);
  j["epsilon"] = cfg.epsilon;
  j["radius"] = cfg.radius ? nlohmann::json(*cfg.radius) : nlohmann::json(nullptr);
  j["probe_file"] = cfg.probe_file ? nlohmann::json(*cfg.probe_file) : nlohmann::json(nullptr);
  j["tolerance"] = cfg.tolerance ? nlohmann::json(*cfg.tolerance) : nlohmann::json(nullptr);
  j["output"] = cfg.output ? nlohmann::json(*cfg.output) : nlohmann::json(nullptr);
  j["format"] = cfg.format;
  j["max_tries"] = cfg.max_tries;
  j["balance"] = cfg.balance;
  j["stages"] = nlohmann::json::array();
  for (const auto& s : cfg.stages) j["stages"].push_back({{"mult1", s.mult1}, {"mult2", s.mult2}});
  // threads is left out on purpose: reports must not depend on it.
  return j;
}

namespace {

std::string join(std::span<const int> v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

EmbeddedAlgebra embedded(const ExperimentConfig& cfg, std::size_t i) {
  const auto& a = cfg.algebras.at(i);
  return EmbeddedAlgebra(*cfg.ambient_dim, BlockStructure(a.blocks), a.mult);
}

std::vector<FreeElement> load_probe(const ExperimentConfig& cfg, const BlockStructure& a1, const BlockStructure& a2) {
  std::vector<FreeElement> probe;
  if (cfg.probe_file) {
    std::ifstream in(*cfg.probe_file);
    if (!in) throw DomainError("cannot open probe file " + *cfg.probe_file);
    const auto doc = nlohmann::json::parse(in);
    if (!doc.is_array()) throw ShapeError("probe file must hold an array of elements");
    for (const auto& e : doc) probe.push_back(free_element_from_json(e));
    return probe;
  }
  const std::vector<int> one1(static_cast<std::size_t>(a1.size()), 1);
  const std::vector<int> one2(static_cast<std::size_t>(a2.size()), 1);
  const CMatrix a = generator_images(a1, one1).front();
  const CMatrix b = generator_images(a2, one2).front();
  const auto x = FreeElement::letter(Side::first, a);
  const auto y = FreeElement::letter(Side::second, b);
  return {x, y, x * y};
}

NumericOptions numeric(const ExperimentConfig& cfg) {
  NumericOptions o;
  o.tolerance = cfg.tolerance;
  return o;
}

void run_enumerate(const ExperimentConfig& cfg, RunResult& out) {
  std::ostringstream csv;
  if (cfg.algebras.empty()) {
    const auto all = enumerate_embedded_algebras(*cfg.ambient_dim);
    out.report["result"] = {{"ambient_dim", *cfg.ambient_dim}, {"algebras", all}, {"count", all.size()}};
    csv << "blocks,mult\n";
    for (const auto& e : all) csv << join(e.structure().blocks(), ' ') << ',' << join(e.mult(), ' ') << '\n';
  } else {
    const auto b1 = embedded(cfg, 0);
    const auto classes = enumerate_subalgebra_classes(b1);
    nlohmann::json rows = nlohmann::json::array();
    csv << "structure,embedding,stab_dim,class_dim\n";
    for (const auto& c : classes) {
      nlohmann::json row = c;
      row["stab_dim"] = stab_dim(b1, c);
      row["class_dim"] = class_dim(b1, c);
      rows.push_back(row);
      csv << c.structure.to_string() << ',' << join(c.embedding.entries(), ' ') << ',' << stab_dim(b1, c) << ','
          << class_dim(b1, c) << '\n';
    }
    out.report["result"] = {{"b1", b1}, {"classes", rows}, {"count", classes.size()}};
  }
  out.csv = csv.str();
}

void run_dims(const ExperimentConfig& cfg, RunResult& out) {
  const auto b1 = embedded(cfg, 0);
  const auto b2 = embedded(cfg, 1);
  std::vector<SubalgebraClass> classes;
  if (cfg.class_spec) {
    const BlockStructure c(cfg.class_spec->blocks);
    classes.push_back(make_class(b1, MultiplicityMatrix(c, b1.structure(), cfg.class_spec->embedding)));
  } else {
    classes = enumerate_subalgebra_classes(b1);
  }
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "structure,embedding,stab_dim,class_dim,max_orbit_dim,d_value\n";
  for (const auto& c : classes) {
    const auto r = dim_report(b1, c, b2);
    rows.push_back({{"class", c}, {"dims", r}});
    const std::string orbit = r.d_value ? std::to_string(*r.d_value - r.class_dim) : "";
    csv << c.structure.to_string() << ',' << join(c.embedding.entries(), ' ') << ',' << r.stab_dim << ','
        << r.class_dim << ',' << orbit << ',' << opt(r.d_value) << '\n';
  }
  out.report["result"] = {{"b1", b1}, {"b2", b2}, {"classes", rows}};
  out.csv = csv.str();
}

void run_thm41(const ExperimentConfig& cfg, RunResult& out) {
  const auto b1 = embedded(cfg, 0);
  const auto b2 = embedded(cfg, 1);
  const auto report = check_theorem41(b1, b2);
  out.report["result"] = report;
  out.report["result"]["b1"] = b1;
  out.report["result"]["b2"] = b2;
  std::ostringstream csv;
  csv << "structure,embedding,stab_dim,class_dim,max_orbit_dim,d_value,min_d_c2,verdict\n";
  for (const auto& r : report.rows)
    csv << r.cls.structure.to_string() << ',' << join(r.cls.embedding.entries(), ' ') << ',' << r.stab_dim << ','
        << r.class_dim << ',' << opt(r.max_orbit_dim) << ',' << opt(r.d_value) << ',' << opt(r.min_d_c2) << ','
        << to_string(r.verdict) << '\n';
  out.csv = csv.str();
  if (!report.covered()) {
    out.exit_code = kExitNotCovered;
    out.report["status"] = "not-covered";
  }
}

std::string sample_csv(const DensityStats& s) {
  std::ostringstream csv;
  csv << "sample,dim\n";
  for (std::size_t i = 0; i < s.sample_dims.size(); ++i) csv << i << ',' << s.sample_dims[i] << '\n';
  return csv.str();
}

void run_density(const ExperimentConfig& cfg, RunResult& out) {
  const auto b1 = embedded(cfg, 0);
  const auto b2 = embedded(cfg, 1);
  std::optional<LocalMode> local;
  if (cfg.radius) local = LocalMode{CMatrix::Identity(*cfg.ambient_dim, *cfg.ambient_dim), *cfg.radius};
  const auto stats = density_experiment(b1, b2, cfg.samples, *cfg.seed, local, numeric(cfg), cfg.threads);
  out.report["result"] = stats;
  out.report["result"]["b1"] = b1;
  out.report["result"]["b2"] = b2;
  out.report["result"]["hypothesis_case"] = classify_theorem41(b1, b2);
  out.csv = sample_csv(stats);
}

void run_rcp_balance(const ExperimentConfig& cfg, RunResult& out) {
  const BlockStructure a1(cfg.algebras[0].blocks), a2(cfg.algebras[1].blocks);
  const auto& m1 = cfg.algebras[0].mult;
  const auto& m2 = cfg.algebras[1].mult;
  const auto bal = rcp_balance(a1, m1, a2, m2);
  const RcpReport before{rcp_check(a1, m1), rcp_check(a2, m2)};
  const RcpReport after{rcp_check(a1, bal.mult1), rcp_check(a2, bal.mult2)};
  out.report["result"] = {{"balance", bal}, {"before", before}, {"after", after}};
  std::ostringstream csv;
  csv << "factor,block,input_mult,pad,final_mult,final_rank\n";
  for (int f = 0; f < 2; ++f) {
    const auto& a = f == 0 ? a1 : a2;
    const auto& m = f == 0 ? m1 : m2;
    const auto& pad = f == 0 ? bal.pad1 : bal.pad2;
    const auto& fin = f == 0 ? bal.mult1 : bal.mult2;
    const auto& ranks = f == 0 ? after.first.ranks : after.second.ranks;
    for (int j = 0; j < a.size(); ++j) {
      const auto sj = static_cast<std::size_t>(j);
      csv << f + 1 << ',' << a[j] << ',' << m[sj] << ',' << pad[sj] << ',' << fin[sj] << ',' << ranks[sj] << '\n';
    }
  }
  out.csv = csv.str();
}

void run_dpi(const ExperimentConfig& cfg, RunResult& out) {
  const BlockStructure a1(cfg.algebras[0].blocks), a2(cfg.algebras[1].blocks);
  std::vector<int> m1 = cfg.algebras[0].mult, m2 = cfg.algebras[1].mult;
  nlohmann::json extra = nlohmann::json::object();
  if (cfg.balance) {
    const auto bal = rcp_balance(a1, m1, a2, m2);
    extra = bal;
    m1 = bal.mult1;
    m2 = bal.mult2;
  }
  const RepPair rep(a1, m1, a2, m2);
  const auto stats = dpi_probe(rep, cfg.samples, *cfg.seed, cfg.radius, numeric(cfg), cfg.threads);
  out.report["result"] = stats;
  out.report["result"]["mult1"] = m1;
  out.report["result"]["mult2"] = m2;
  out.report["result"]["dim"] = rep.dim();
  out.report["result"]["rcp"] = rcp_check(rep);
  out.report["result"]["balance"] = cfg.balance ? extra : nlohmann::json(nullptr);
  out.csv = sample_csv(stats);
}

void run_build(const ExperimentConfig& cfg, RunResult& out) {
  const BlockStructure a1(cfg.algebras[0].blocks), a2(cfg.algebras[1].blocks);
  const auto probe = load_probe(cfg, a1, a2);
  const auto build = staged_build(a1, a2, cfg.stages, cfg.epsilon, probe, *cfg.seed, cfg.max_tries, numeric(cfg),
                                  cfg.threads);
  out.report["result"] = build;
  out.report["result"]["probe"] = probe;
  std::ostringstream csv;
  csv << "stage,dim,bound,budget,tries,commutant_dim,irreducible\n";
  for (const auto& s : build.stages)
    csv << s.index << ',' << s.dim << ',' << nlohmann::json(s.bound).dump() << ','
        << nlohmann::json(s.budget).dump() << ',' << s.tries << ',' << s.commutant_dim << ','
        << (s.irreducible ? "true" : "false") << '\n';
  out.csv = csv.str();
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  RunResult out;
  out.report["version"] = kVersion;
  out.report["command"] = cfg.command;
  out.report["config"] = config_to_json(cfg);
  out.report["status"] = "ok";
  out.report["result"] = nullptr;
  try {
    if (cfg.command == "enumerate") run_enumerate(cfg, out);
    else if (cfg.command == "dims") run_dims(cfg, out);
    else if (cfg.command == "thm41-check") run_thm41(cfg, out);
    else if (cfg.command == "density") run_density(cfg, out);
    else if (cfg.command == "rcp-balance") run_rcp_balance(cfg, out);
    else if (cfg.command == "dpi") run_dpi(cfg, out);
    else if (cfg.command == "build-primitive") run_build(cfg, out);
    else throw DomainError("unknown command " + cfg.command);
  } catch (const SearchExhausted& e) {
    out.exit_code = kExitSearchExhausted;
    out.report["status"] = "search-exhausted";
    out.report["error"] = {{"message", e.what()},
                           {"stage", e.stage()},
                           {"dim", e.dim()},
                           {"best_dim", e.best_dim()},
                           {"tries", e.tries()}};
  } catch (const NumericalInstability& e) {
    out.exit_code = kExitNumericalInstability;
    out.report["status"] = "numerical-instability";
    out.report["error"] = {{"message", e.what()}, {"defect", e.defect()}};
  } catch (const nlohmann::json::exception& e) {
    out.exit_code = kExitBadConfig;
    out.report["status"] = "bad-config";
    out.report["error"] = {{"message", std::string("probe file: ") + e.what()}};
  } catch (const Error& e) {
    out.exit_code = kExitBadConfig;
    out.report["status"] = "bad-config";
    out.report["error"] = {{"message", e.what()}};
  }
  return out;
}

std::string render(const RunResult& result, const std::string& format) {
  if (format == "csv") return result.csv;
  return result.report.dump(2) + "\n";
}

}  // namespace fdalg

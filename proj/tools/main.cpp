// fdalg: command-line front end. See README.md for the config schema.

#include <fstream>
#include <map>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fdalg/cli_harness.hpp"
#include "fdalg/version.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<std::string> out;
  std::optional<double> tolerance;
  std::optional<std::string> format;
  std::optional<unsigned> threads;
};

// "path:line:col: message" for a parse error at byte offset `byte`.
std::string anchor(const std::string& path, const std::string& text, std::size_t byte, const std::string& what) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what;
}

int execute(const std::string& command, const Flags& flags) {
  nlohmann::json raw = nlohmann::json::object();
  const std::string source = flags.config.empty() ? "<flags>" : flags.config;
  if (!flags.config.empty()) {
    std::ifstream in(flags.config);
    if (!in) {
      std::cerr << flags.config << ":1:1: cannot open config file\n";
      return fdalg::kExitBadConfig;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
      raw = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << anchor(flags.config, text, e.byte, e.what()) << "\n";
      return fdalg::kExitBadConfig;
    }
  }
  if (raw.is_object()) {
    if (raw.contains("command") && raw["command"] != command) {
      std::cerr << source << ": /command: config is for " << raw["command"].dump() << ", not " << command << "\n";
      return fdalg::kExitBadConfig;
    }
    raw["command"] = command;
    if (flags.seed) raw["seed"] = *flags.seed;
    if (flags.samples) raw["samples"] = *flags.samples;
    if (flags.out) raw["output"] = *flags.out;
    if (flags.tolerance) raw["tolerance"] = *flags.tolerance;
    if (flags.format) raw["format"] = *flags.format;
    if (flags.threads) raw["threads"] = *flags.threads;
  }
  const auto diags = fdalg::validate(raw);
  if (!diags.empty()) {
    for (const auto& d : diags) std::cerr << source << ": " << (d.pointer.empty() ? "/" : d.pointer) << ": " << d.message << "\n";
    return fdalg::kExitBadConfig;
  }
  const auto cfg = fdalg::config_from_json(raw);
  const auto result = fdalg::run(cfg);
  if (result.exit_code == fdalg::kExitBadConfig) {
    std::cerr << source << ": " << result.report["error"]["message"].get<std::string>() << "\n";
    return result.exit_code;
  }
  const std::string text = fdalg::render(result, cfg.format);
  if (cfg.output) {
    std::ofstream out(*cfg.output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << *cfg.output << "\n";
      return fdalg::kExitBadConfig;
    }
    out << text;
  } else {
    std::cout << text;
  }
  if (result.report.contains("error")) std::cerr << result.report["error"]["message"].get<std::string>() << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subalgebra classes, density checks and free-product representations"};
  app.set_version_flag("--version", std::string(fdalg::kVersion));
  app.require_subcommand(1);

  Flags flags;
  const std::map<std::string, std::string> about = {
      {"enumerate", "list subalgebras of M_N, or the subalgebra classes of one algebra"},
      {"dims", "stabilizer, class, orbit and d values per class"},
      {"thm41-check", "classify the pair and audit d(B) < N^2 per class"},
      {"density", "tally dim(B1 ∩ u B2 u*) over sampled unitaries"},
      {"rcp-balance", "pad multiplicities until the rank condition holds"},
      {"dpi", "tally joint commutant dimensions of perturbed representations"},
      {"build-primitive", "staged search for irreducible perturbations"}};
  for (const auto& name : fdalg::command_names()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", flags.config, "JSON config file");
    sub->add_option("--seed", flags.seed, "64-bit master seed");
    sub->add_option("--samples", flags.samples, "number of samples");
    sub->add_option("--out", flags.out, "report path (default: stdout)");
    sub->add_option("--tolerance", flags.tolerance, "singular-value cutoff override");
    sub->add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fdalg::kExitBadConfig;
  }
  for (const auto* sub : app.get_subcommands()) return execute(sub->get_name(), flags);
  return fdalg::kExitBadConfig;
}

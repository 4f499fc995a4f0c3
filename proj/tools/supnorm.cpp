// supnorm: batch front end for the counting, special-function and exponent engines.
#include "supnorm/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

struct KeySpec {
  const char* key;
  const char* help;
};

const std::vector<KeySpec> kSourceKeys = {
    {"builtin", "corpus entry name (see `corpus`)"},
    {"order", "JSON order description"},
    {"form", "JSON form description"},
};

const std::map<std::string, std::vector<KeySpec>> kCommandKeys = {
    {"reduce", {{"samples", "random vectors for the value identity check"}}},
    {"count",
     {{"mode", "rep | e3 | e2 | e1 | near-torus | near-equator | unconstrained | binary"},
      {"ell", "target, e.g. 3 or 1+2*w"},
      {"y", "averaged-sum range y"},
      {"y2", "second range for e2"},
      {"eta", "thresholds, one per embedding (comma separated)"},
      {"direction", "x,y,z in ternary coordinates; ';' separates embeddings"},
      {"field", "field tag for binary mode"},
      {"poly", "binary polynomial coefficients a,b,c,d,e,f"},
      {"strategy", "auto | search | blocks"},
      {"h1_threshold", "witness threshold for e2/e1"}}},
    {"lemma-check",
     {{"kind", "all | ternary-uniform | quaternary-uniform | averaged | near-torus | near-equator"},
      {"nmax", "largest target norm"},
      {"full", "every target up to this norm is included"},
      {"samples", "number of spread targets above `full`"},
      {"averaged_radius", "largest target norm inside averaged sums"},
      {"forms", "restrict to these corpus entries"},
      {"strategy", "auto | search | blocks"}}},
    {"decay-scan",
     {{"m_max", "largest m"}, {"l_exponent", "l ranges over 0..m^e"}, {"t_max", "|t| bound"}, {"t_step", "t grid step"}}},
    {"amplify",
     {{"L", "amplifier length"},
      {"m", "weights, one per embedding"},
      {"l", "weight-vector indices, one per embedding"},
      {"mode", "matrix | character | trivial"},
      {"exclude", "rational primes to avoid (default: disc support)"},
      {"direction", "x,y,z in ternary coordinates; ';' separates embeddings"}}},
    {"exponents",
     {{"kappa", "L = |m|^kappa"},
      {"beta_min", "left end of the emitted polylines"},
      {"terms", "balance terms a:b,... for L^a V^b"},
      {"s_volume", "volume saving"},
      {"s_eigen", "eigenvalue saving"}}},
    {"corpus", {}},
};

const char* kDescriptions[][2] = {
    {"reduce", "reduce a form and check the reduction identities"},
    {"count", "exact representation counts with bound ratios"},
    {"lemma-check", "ratio scans over the built-in corpus"},
    {"decay-scan", "matrix coefficient decay grid"},
    {"amplify", "geometric side of the amplified pre-trace inequality"},
    {"exponents", "exact exponent optimization and profile polylines"},
    {"corpus", "list built-in orders and forms"},
};

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (auto& c : s)
    if (c == '_') c = '-';
  return "--" + s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact lattice counting and exponent bookkeeping for sup-norm bounds"};
  app.require_subcommand(1);

  std::map<std::string, std::map<std::string, std::string>> given;
  std::map<std::string, std::string> config_path;
  std::map<std::string, bool> timing;

  for (const auto& [name, help] : kDescriptions) {
    std::string cmd = name;
    auto* sub = app.add_subcommand(cmd, help);
    auto& vals = given[cmd];
    auto add = [&](const KeySpec& k) { sub->add_option(flag_name(k.key), vals[k.key], k.help); };
    if (cmd == "reduce" || cmd == "count" || cmd == "amplify")
      for (const auto& k : kSourceKeys) add(k);
    for (const auto& k : kCommandKeys.at(cmd)) add(k);
    add({"threads", "worker threads"});
    add({"out", "output directory"});
    add({"seed", "seed for sampled checks"});
    sub->add_flag("--timing", timing[cmd], "report wall-clock times");
    sub->add_option("--config", config_path[cmd], "key = value file; command-line options win");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : supnorm::kExitConfig;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  supnorm::Config cfg;
  try {
    if (!config_path[cmd].empty()) cfg = supnorm::Config::from_file(config_path[cmd]);
  } catch (const supnorm::ConfigError& e) {
    std::cerr << cmd << ": " << e.what() << '\n';
    return supnorm::kExitConfig;
  }
  for (const auto& [key, value] : given[cmd]) {
    auto* opt = app.get_subcommand(cmd)->get_option(flag_name(key));
    if (opt->count() == 0) continue;
    if (key == "poly") {
      auto parts = supnorm::Config::parse("p=" + value).get_list("p");
      if (parts.size() != 6) {
        std::cerr << cmd << ": --poly needs six coefficients\n";
        return supnorm::kExitConfig;
      }
      const char* names[] = {"a", "b", "c", "d", "e", "f"};
      for (int i = 0; i < 6; ++i) cfg.set(names[i], parts[i]);
      continue;
    }
    cfg.set(key, value);
  }
  if (timing[cmd]) cfg.set("timing", "true");
  return supnorm::run(cmd, cfg, std::cout, std::cerr);
}

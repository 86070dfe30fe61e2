#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "devissage/instance_json.hpp"
#include "devissage/suites.hpp"

using namespace devissage;

namespace {

constexpr int kExitPass = 0, kExitFail = 2, kExitLimit = 3, kExitInput = 4;

struct SequenceShape {
  std::string shape;
  std::vector<std::pair<std::string, std::string>> terms;
  std::string note;
};

const std::map<std::string, SequenceShape> &shapes() {
  static const std::map<std::string, SequenceShape> table{
      {"spl1",
       {"0 → I(J{ℓ})(r−2) → Br(K){ℓ}(r−1) → Ξ(r−2) → 0",
        {{"I(J{ℓ})(r−2)", "COMPUTED"}, {"Br(K){ℓ}(r−1)", "MODELED"}, {"Ξ(r−2)", "COMPUTED"}},
        "Br(K){ℓ} is modeled as the split extension of Ξ by the induced Jacobian torsion."}},
      {"spl2",
       {"0 → Q_ℓ/Z_ℓ⊗H₁ → Ξ → Ker(Σ) → 0",
        {{"Q_ℓ/Z_ℓ⊗H₁", "COMPUTED"}, {"Ξ", "COMPUTED"}, {"Ker(Σ)", "COMPUTED"}},
        "Ξ is the kernel of the divisor and point constraints; φ forgets the pair block."}},
      {"dev1",
       {"0 → Υ{ℓ}(r−1) → Br(K){ℓ}(r−1) → Ker(Σ)(r−2) → 0",
        {{"Υ{ℓ}(r−1)", "MODELED"}, {"Br(K){ℓ}(r−1)", "MODELED"}, {"Ker(Σ)(r−2)", "COMPUTED"}},
        "Both middle groups are split extensions built from the computed outer terms."}},
      {"dev2",
       {"0 → I(J{ℓ})(r−2) → Υ{ℓ}(r−1) → Q_ℓ/Z_ℓ(r−2)⊗H₁ → 0",
        {{"I(J{ℓ})(r−2)", "COMPUTED"}, {"Υ{ℓ}(r−1)", "MODELED"}, {"Q_ℓ/Z_ℓ(r−2)⊗H₁", "COMPUTED"}},
        "Twists are tracked per term and every map is checked for Frobenius equivariance."}},
      {"upsilon",
       {"0 → I(J{ℓ})(−1) → Υ{ℓ} → Q_ℓ/Z_ℓ(−1)⊗H₁ → 0",
        {{"I(J{ℓ})(−1)", "COMPUTED"}, {"Υ{ℓ}", "MODELED"}, {"Q_ℓ/Z_ℓ(−1)⊗H₁", "COMPUTED"}},
        "The level-s structure of Υ is compared against (Z/ℓ^s)^{n_X}."}},
      {"bhnfin",
       {"0 → F → H¹(k, Q_ℓ/Z_ℓ⊗H₁) → H³(K, Q_ℓ/Z_ℓ(2)) → ⊕_v H³(K_v, Q_ℓ/Z_ℓ(2)) → H¹(k, Q_ℓ/Z_ℓ) → 0",
        {{"F", "COMPUTED"},
         {"H¹(k, Q_ℓ/Z_ℓ⊗H₁)", "COMPUTED"},
         {"H³(K, Q_ℓ/Z_ℓ(2))", "MODELED"},
         {"⊕_v H³(K_v, Q_ℓ/Z_ℓ(2))", "MODELED"},
         {"H¹(k, Q_ℓ/Z_ℓ)", "COMPUTED"}},
        "H³(K) is modeled by H¹(k, Ξ) and the local sum by H¹(k, ⊕_D Q_ℓ/Z_ℓ); F is bounded by m(Γ)."}},
      {"cohom1",
       {"H⁰(k, Ξ) → H⁰(k, Ker(Σ)) → H¹(k, Q_ℓ/Z_ℓ⊗H₁) → H¹(k, Ξ) → H¹(k, Ker(Σ)) → 0",
        {{"H⁰(k, Ξ)", "COMPUTED"},
         {"H⁰(k, Ker(Σ))", "COMPUTED"},
         {"H¹(k, Q_ℓ/Z_ℓ⊗H₁)", "COMPUTED"},
         {"H¹(k, Ξ)", "COMPUTED"},
         {"H¹(k, Ker(Σ))", "COMPUTED"}},
        "Long cohomology sequence of spl2 over a procyclic Galois group."}},
      {"cohom2",
       {"H¹(k, Q_ℓ/Z_ℓ⊗H₁) → H¹(k, Ξ) → H¹(k, Ker(Σ)) → 0",
        {{"H¹(k, Q_ℓ/Z_ℓ⊗H₁)", "COMPUTED"}, {"H¹(k, Ξ)", "COMPUTED"}, {"H¹(k, Ker(Σ))", "COMPUTED"}},
        "Tail used in the finite-field report; H² vanishes for a procyclic group."}},
  };
  return table;
}

int explain(const std::string &name) {
  auto it = shapes().find(name);
  if (it == shapes().end()) {
    std::cerr << UnknownSequence(name + " (known: spl1 spl2 dev1 dev2 upsilon bhnfin cohom1 cohom2)").what()
              << "\n";
    return kExitInput;
  }
  std::cout << name << ": " << it->second.shape << "\n";
  for (const auto &[term, status] : it->second.terms) std::cout << "  " << status << "  " << term << "\n";
  std::cout << it->second.note << "\n";
  return kExitPass;
}

std::vector<std::string> expand_suites(const std::vector<std::string> &raw) {
  std::vector<std::string> out;
  for (const auto &item : raw) {
    std::stringstream ss(item);
    std::string s;
    while (std::getline(ss, s, ',')) {
      if (s.empty()) continue;
      if (s == "all") {
        for (const auto &n : suite_names())
          if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
        continue;
      }
      const auto &names = suite_names();
      if (std::find(names.begin(), names.end(), s) == names.end())
        throw ConfigIncompatible("unknown suite " + s);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  }
  return out;
}

void print_text(std::ostream &os, const Json &report, const std::vector<SuiteResult> &results) {
  os << "devissage report";
  if (report["config"].contains("input")) os << " for " << report["config"]["input"].get<std::string>();
  os << "\n";
  for (const auto &r : results) {
    std::ostringstream secs;
    secs << std::fixed << std::setprecision(3) << r.seconds;
    os << "[" << (r.pass() ? "PASS" : "FAIL") << "] " << r.suite << " (" << secs.str() << " s)\n";
    for (const auto &c : r.checks) {
      os << "    " << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
      std::string brief;
      for (const auto &[k, v] : c.detail.items()) {
        if (v.is_structured()) continue;
        brief += (brief.empty() ? "" : ", ") + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
      }
      if (!brief.empty()) os << "  {" << brief << "}";
      os << "\n";
    }
    if (r.error) os << "    ERROR " << *r.error << "\n";
  }
  os << "verdict: " << report["verdict"].get<std::string>() << "\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Finite-level checks for l-primary devissage sequences"};
  app.require_subcommand(1);

  std::string input, format = "json", out;
  std::vector<std::string> suites_raw{"all"};
  std::optional<long long> ell;
  std::optional<unsigned> precision, level;
  std::uint64_t seed = SuiteConfig{}.seed;
  std::optional<std::size_t> tree_cap;
  bool timings = false;

  auto *run = app.add_subcommand("run", "Run check suites on an instance");
  run->add_option("--input", input, "Instance JSON file");
  run->add_option("--suite", suites_raw, "Suites, comma separated")->delimiter(',');
  run->add_option("--ell", ell, "Prime l");
  run->add_option("--precision", precision, "Working precision N");
  run->add_option("--level", level, "Maximal level S");
  run->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  run->add_option("--seed", seed, "Seed for randomized suites");
  run->add_option("--tree-cap", tree_cap, "Spanning-tree enumeration cap");
  run->add_option("--out", out, "Write the report here instead of stdout");
  run->add_flag("--timings", timings, "Include wall-clock timings in the JSON report");

  std::string seq;
  auto *ex = app.add_subcommand("explain", "Describe a sequence and its modeled terms");
  ex->add_option("name", seq, "Sequence name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (ex->parsed()) return explain(seq);

  SuiteConfig cfg;
  std::optional<SingularityInstance> inst;
  std::vector<std::string> suites;
  try {
    suites = expand_suites(suites_raw);
    if (!input.empty()) inst = load_instance(input);
    if (ell) cfg.ell = Integer(*ell);
    else if (inst) cfg.ell = inst->ell;
    if (precision) cfg.precision = *precision;
    else if (inst) cfg.precision = inst->precision;
    if (level) cfg.level = *level;
    else if (inst) cfg.level = inst->max_level;
    require_prime(cfg.ell);
    if (cfg.level == 0 || cfg.precision < cfg.level) throw ConfigIncompatible("need precision >= level >= 1");
    cfg.seed = seed;
    if (const char *env = std::getenv("DEVISSAGE_TREE_CAP")) {
      try {
        cfg.tree_cap = std::stoull(env);
      } catch (const std::exception &) {
        throw ParseError("DEVISSAGE_TREE_CAP is not a number");
      }
    } else if (tree_cap) {
      cfg.tree_cap = *tree_cap;
    }
    if (inst) {
      inst->ell = cfg.ell;
      inst->precision = cfg.precision;
      inst->max_level = cfg.level;
      inst->validate();
    }
    for (const auto &s : suites)
      if (suite_needs_instance(s) && !inst) throw ConfigIncompatible("suite " + s + " needs --input");
  } catch (const std::exception &e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }

  std::vector<SuiteResult> results;
  for (const auto &s : suites) results.push_back(run_suite(s, cfg, inst ? &*inst : nullptr));

  int code = kExitPass;
  for (const auto &r : results) {
    if (r.pass()) continue;
    code = std::max(code, r.error_code == kExitLimit ? kExitLimit : kExitFail);
  }

  Json report;
  report["schema"] = "devissage/1";
  Json config;
  if (!input.empty()) config["input"] = input;
  if (inst) config["instance"] = inst->name;
  config["suites"] = suites;
  config["ell"] = cfg.ell.str();
  config["precision"] = cfg.precision;
  config["level"] = cfg.level;
  config["seed"] = cfg.seed;
  config["tree_cap"] = cfg.tree_cap;
  report["config"] = config;
  Json arr = Json::array();
  for (const auto &r : results) arr.push_back(to_json(r, timings));
  report["suites"] = arr;
  report["verdict"] = code == kExitPass ? "PASS" : "FAIL";
  report["exit_code"] = code;

  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) {
      std::cerr << "cannot write " << out << "\n";
      return kExitInput;
    }
  }
  std::ostream &os = out.empty() ? std::cout : file;
  if (format == "json") os << report.dump(2) << "\n";
  else print_text(os, report, results);
  return code;
}

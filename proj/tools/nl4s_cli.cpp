#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "nl4s/config.hpp"
#include "nl4s/error.hpp"
#include "nl4s/experiments.hpp"
#include "nl4s/exponents.hpp"
#include "nl4s/manifest.hpp"

using nlohmann::json;

namespace {

// Builds a config from --config plus trailing `--dotted.key value` pairs.
nl4s::RunConfig assemble(const std::string& config_path, const std::string& kind,
                         const std::vector<std::string>& extras) {
  json j = json::object();
  if (!config_path.empty()) j = nl4s::to_json(nl4s::load_config(config_path));
  if (!kind.empty()) j["experiment"] = kind;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const auto& a = extras[i];
    if (a.rfind("--", 0) != 0) throw nl4s::FormatError("unexpected argument '" + a + "'");
    std::string key = a.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw nl4s::FormatError("override --" + key + " needs a value");
      value = extras[++i];
    }
    for (auto& ch : key) {
      if (ch == '-') ch = '_';
    }
    nl4s::apply_override(j, key, value);
  }
  return nl4s::config_from_json(j);
}

std::string rational_str(const nl4s::Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

int report(const nl4s::RunManifest& m, bool quiet) {
  if (!quiet) {
    std::cout << "experiment " << nl4s::to_string(m.config.kind) << " -> " << m.config.output_dir << "/manifest.json\n";
    for (const auto& a : m.assertions) {
      std::cout << (a.passed ? "  PASS " : "  FAIL ") << a.name << ": " << a.value << " " << a.relation << " "
                << a.bound << "\n";
    }
    for (const auto& s : m.advisories) std::cout << "  advisory: " << s << "\n";
    for (const auto& e : m.errors) std::cout << "  error [" << e.stage << "]: " << e.message << "\n";
    std::cout << (m.passed() ? "status: pass" : "status: fail") << " (" << m.wall_time_s << " s)\n";
  }
  return m.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nl4s: fourth-order NLS numerics and experiment harness"};
  app.require_subcommand(1);
  std::cout.precision(17);

  std::string config_path;
  bool quiet = false;
  auto add_run_opts = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_flag("--quiet", quiet, "Only set the exit code");
    sub->allow_extras();
    sub->footer("Any config key can be overridden as --section.key value, e.g. --grid.n 2048.");
  };

  auto* gs = app.add_subcommand("ground-state", "Solve for the ground state and certify it");
  add_run_opts(gs);
  auto* ev = app.add_subcommand("evolve", "Run the split-step integrator");
  add_run_opts(ev);
  auto* ex = app.add_subcommand("experiment", "Run an experiment kind");
  std::string kind;
  ex->add_option("kind", kind, "Experiment kind")->required();
  add_run_opts(ex);

  auto* exps = app.add_subcommand("exponents", "Evaluate the analysis exponent formulas");
  int d_ana = 5;
  double gamma = 1.9, delta = 0.0;
  exps->add_option("--d", d_ana, "Analysis dimension")->required();
  exps->add_option("--gamma", gamma, "Regularity")->required();
  exps->add_option("--delta", delta, "Strichartz gain");

  auto* cp = app.add_subcommand("check-pair", "Exact biharmonic admissibility of (p, q) in dimension d");
  std::string p_text, q_text;
  int d_pair = 5;
  cp->add_option("--p", p_text, "Time exponent, e.g. 16/5 or inf")->required();
  cp->add_option("--q", q_text, "Space exponent")->required();
  cp->add_option("--d", d_pair, "Analysis dimension")->required();

  auto* vf = app.add_subcommand("verify", "Re-hash the artifacts listed in a manifest");
  std::string manifest_path;
  vf->add_option("manifest", manifest_path, "Path to manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gs || *ev || *ex) {
      CLI::App* sub = *gs ? gs : (*ev ? ev : ex);
      const std::string k = *gs ? "ground_state" : (*ev ? "evolve" : kind);
      const auto cfg = assemble(config_path, k, sub->remaining());
      return report(nl4s::run_experiment(cfg), quiet);
    }
    if (*exps) {
      const auto r = nl4s::compute_paper_exponents(d_ana, gamma, delta);
      json j = {{"d_ana", r.d_ana},
                {"gamma", r.gamma},
                {"delta", r.delta},
                {"a_gamma", r.a_gamma},
                {"a_gamma_in_range", r.a_gamma_in_range},
                {"a_dgamma", r.a_dgamma},
                {"gamma_lower_conc", r.gamma_lower_conc},
                {"gamma_lower_gwp", r.gamma_lower_gwp},
                {"gamma_lower_gwp_exact", rational_str(nl4s::gamma_lower_gwp_exact(d_ana))},
                {"n_of_t_exponent", r.n_of_t_exponent},
                {"sobolev_growth_exponent", std::isfinite(r.sobolev_growth_exponent) ? json(r.sobolev_growth_exponent) : json(nullptr)},
                {"n_of_lambda_exponent", r.n_of_lambda_exponent},
                {"regularity_ok", r.regularity_ok},
                {"delta_in_range", r.delta_in_range}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*cp) {
      const nl4s::AdmissiblePair pair{nl4s::parse_exponent(p_text), nl4s::parse_exponent(q_text), d_pair};
      const auto g = nl4s::gamma_pq(pair.p_t, pair.q_x, d_pair);
      const bool bih = nl4s::is_biharmonic_admissible(pair);
      json j = {{"p", pair.p_t.str()},
                {"q", pair.q_x.str()},
                {"d", d_pair},
                {"gamma_pq", rational_str(g)},
                {"schrodinger_admissible", nl4s::is_schrodinger_admissible(pair)},
                {"biharmonic_admissible", bih}};
      std::cout << j.dump(2) << "\n";
      return bih ? 0 : 1;
    }
    if (*vf) {
      const auto rep = nl4s::verify_manifest(manifest_path);
      std::cout << "checked " << rep.checked << " artifacts: " << (rep.ok ? "ok" : "MISMATCH") << "\n";
      for (const auto& p : rep.problems) std::cout << "  " << p << "\n";
      return rep.ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "nl4s: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

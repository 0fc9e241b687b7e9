#include "nl4s/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <iomanip>
#include <sstream>

#include "nl4s/error.hpp"
#include "nl4s/exponents.hpp"

namespace nl4s {

using nlohmann::json;

namespace {

const std::vector<std::pair<ExperimentKind, const char*>> kKindNames = {
    {ExperimentKind::ground_state, "ground_state"},
    {ExperimentKind::evolve, "evolve"},
    {ExperimentKind::blowup_concentration, "blowup_concentration"},
    {ExperimentKind::profile_extraction, "profile_extraction"},
    {ExperimentKind::almost_conservation, "almost_conservation"},
    {ExperimentKind::gwp_below_threshold, "gwp_below_threshold"},
    {ExperimentKind::sobolev_growth, "sobolev_growth"},
    {ExperimentKind::scaling_invariance, "scaling_invariance"},
    {ExperimentKind::lwp_window, "lwp_window"},
};

// Reads keys out of one JSON object and rejects anything left over.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw FormatError("config section '" + name_ + "' must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      it->get_to(out);
    } catch (const json::exception& e) {
      throw FormatError("config key '" + qualified(key) + "': " + e.what());
    }
  }

  template <typename T>
  void read_optional(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (it->is_null()) {
      out.reset();
      return;
    }
    T v{};
    try {
      it->get_to(v);
    } catch (const json::exception& e) {
      throw FormatError("config key '" + qualified(key) + "': " + e.what());
    }
    out = v;
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& child(const char* key) {
    seen_.insert(key);
    static const json empty = json::object();
    auto it = j_.find(key);
    return it == j_.end() ? empty : *it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw FormatError("unknown config key '" + qualified(it.key()) + "'");
    }
  }

 private:
  std::string qualified(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  std::string norm = name;
  for (auto& ch : norm) {
    if (ch == '-') ch = '_';
  }
  for (const auto& [kind, n] : kKindNames) {
    if (norm == n) return kind;
  }
  std::string known;
  for (const auto& [kind, n] : kKindNames) known += (known.empty() ? "" : ", ") + std::string(n);
  throw FormatError("unknown experiment kind '" + name + "' (known: " + known + ")");
}

const std::vector<ExperimentKind>& all_experiment_kinds() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> v;
    for (const auto& [kind, name] : kKindNames) v.push_back(kind);
    return v;
  }();
  return kinds;
}

GridSpec RunConfig::grid() const { return GridSpec(dim, n, half_width); }

EvolveConfig RunConfig::evolve_config() const {
  EvolveConfig e;
  e.params = params;
  e.dt0 = dt0;
  e.c_dt = c_dt;
  e.adaptive = adaptive;
  e.T_max = T_max;
  e.snapshot_interval = snapshot_interval;
  e.gamma = gamma;
  if (N) e.i_multiplier = IMultiplier(*N, gamma);
  e.stop = stop;
  return e;
}

json to_json(const RunConfig& c) {
  json j;
  j["experiment"] = to_string(c.kind);
  j["grid"] = {{"dim", c.dim}, {"n", c.n}, {"half_width", c.half_width}};
  j["nonlinearity"] = {{"p", c.params.p}, {"mu", c.params.mu}, {"epsilon", c.params.epsilon}};
  j["analysis"] = {{"gamma", c.gamma},
                   {"delta", c.delta},
                   {"d_ana", optional_json(c.d_ana)},
                   {"N", optional_json(c.N)},
                   {"N_list", c.N_list}};
  j["initial"] = {{"recipe", c.initial.recipe},
                  {"amplitude", c.initial.amplitude},
                  {"width", c.initial.width},
                  {"path", c.initial.path},
                  {"noise", c.initial.noise}};
  j["ground_state"] = {{"path", c.ground_state.path},
                       {"tol", c.ground_state.tol},
                       {"max_iter", c.ground_state.max_iter},
                       {"gn_samples", c.ground_state.gn_samples}};
  j["evolve"] = {{"dt0", c.dt0},
                 {"c_dt", c.c_dt},
                 {"adaptive", c.adaptive},
                 {"T_max", c.T_max},
                 {"snapshot_interval", c.snapshot_interval},
                 {"save_snapshots", c.save_snapshots}};
  j["stop"] = {{"norm_growth", c.stop.norm_growth},
               {"dt_min", c.stop.dt_min},
               {"tail_stop", c.stop.tail_stop},
               {"tail_untrusted", c.stop.tail_untrusted}};
  j["experiment_params"] = {{"window", c.window},
                            {"growth_bound", c.growth_bound},
                            {"concentration_constant", c.concentration_constant},
                            {"concentration_floor_cells", c.concentration_floor_cells},
                            {"concentration_target", c.concentration_target},
                            {"profile_count", c.profile_count},
                            {"lambdas", c.lambdas},
                            {"amplitudes", c.amplitudes},
                            {"lwp_constant", c.lwp_constant},
                            {"lwp_accuracy", c.lwp_accuracy},
                            {"scaling_factor", c.scaling_factor},
                            {"workers", c.workers}};
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Section top(j, "");
  std::string kind = to_string(c.kind);
  top.read("experiment", kind);
  c.kind = parse_experiment_kind(kind);

  Section grid(top.child("grid"), "grid");
  grid.read("dim", c.dim);
  grid.read("n", c.n);
  grid.read("half_width", c.half_width);
  grid.finish();

  Section nl(top.child("nonlinearity"), "nonlinearity");
  if (!nl.has("p") && c.dim > 0) c.params.p = 8.0 / c.dim;
  nl.read("p", c.params.p);
  nl.read("mu", c.params.mu);
  nl.read("epsilon", c.params.epsilon);
  nl.finish();

  Section an(top.child("analysis"), "analysis");
  an.read("gamma", c.gamma);
  an.read("delta", c.delta);
  an.read_optional("d_ana", c.d_ana);
  an.read_optional("N", c.N);
  an.read("N_list", c.N_list);
  an.finish();

  Section init(top.child("initial"), "initial");
  init.read("recipe", c.initial.recipe);
  init.read("amplitude", c.initial.amplitude);
  init.read("width", c.initial.width);
  init.read("path", c.initial.path);
  init.read("noise", c.initial.noise);
  init.finish();

  Section gs(top.child("ground_state"), "ground_state");
  gs.read("path", c.ground_state.path);
  gs.read("tol", c.ground_state.tol);
  gs.read("max_iter", c.ground_state.max_iter);
  gs.read("gn_samples", c.ground_state.gn_samples);
  gs.finish();

  Section ev(top.child("evolve"), "evolve");
  ev.read("dt0", c.dt0);
  ev.read("c_dt", c.c_dt);
  ev.read("adaptive", c.adaptive);
  ev.read("T_max", c.T_max);
  ev.read("snapshot_interval", c.snapshot_interval);
  ev.read("save_snapshots", c.save_snapshots);
  ev.finish();

  Section st(top.child("stop"), "stop");
  st.read("norm_growth", c.stop.norm_growth);
  st.read("dt_min", c.stop.dt_min);
  st.read("tail_stop", c.stop.tail_stop);
  st.read("tail_untrusted", c.stop.tail_untrusted);
  st.finish();

  Section ex(top.child("experiment_params"), "experiment_params");
  ex.read("window", c.window);
  ex.read("growth_bound", c.growth_bound);
  ex.read("concentration_constant", c.concentration_constant);
  ex.read("concentration_floor_cells", c.concentration_floor_cells);
  ex.read("concentration_target", c.concentration_target);
  ex.read("profile_count", c.profile_count);
  ex.read("lambdas", c.lambdas);
  ex.read("amplitudes", c.amplitudes);
  ex.read("lwp_constant", c.lwp_constant);
  ex.read("lwp_accuracy", c.lwp_accuracy);
  ex.read("scaling_factor", c.scaling_factor);
  ex.read("workers", c.workers);
  ex.finish();

  top.read("output_dir", c.output_dir);
  top.read("seed", c.seed);
  top.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open config: " + path);
  try {
    return config_from_json(json::parse(is));
  } catch (const json::parse_error& e) {
    throw FormatError("config " + path + ": " + e.what());
  }
}

void apply_override(json& j, const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) throw FormatError("empty override key");
  json* node = &j;
  std::stringstream ss(dotted_key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i])) (*node)[parts[i]] = json::object();
    node = &(*node)[parts[i]];
    if (!node->is_object()) throw FormatError("override '" + dotted_key + "' descends into a non-object");
  }
  json v = json::parse(value, nullptr, false);
  (*node)[parts.back()] = v.is_discarded() ? json(value) : v;
}

ConfigCheck validate_config(const RunConfig& c) {
  ConfigCheck out;
  auto err = [&](std::string s) { out.errors.push_back(std::move(s)); };
  auto adv = [&](std::string s) { out.advisories.push_back(std::move(s)); };

  std::optional<GridSpec> grid;
  try {
    grid = c.grid();
  } catch (const Error& e) {
    err(std::string("grid: ") + e.what());
  }
  try {
    c.params.validate();
  } catch (const Error& e) {
    err(std::string("nonlinearity: ") + e.what());
  }
  if (!(c.gamma > 0.0 && c.gamma < 2.0)) err("gamma must lie in (0, 2)");
  if (!(c.delta >= 0.0)) err("delta must be non-negative");
  if (!(c.dt0 > 0.0) || !std::isfinite(c.dt0)) err("evolve.dt0 must be positive");
  if (!(c.T_max > 0.0) || !std::isfinite(c.T_max)) err("evolve.T_max must be positive");
  if (c.snapshot_interval < 0.0) err("evolve.snapshot_interval must be non-negative");
  if (c.N && !(*c.N > 0.0)) err("analysis.N must be positive");
  if (c.seed == 0) adv("seed 0 is valid but easy to confuse with an unset seed");

  const auto& r = c.initial.recipe;
  if (r != "ground_state" && r != "gaussian" && r != "file") {
    err("initial.recipe must be one of ground_state, gaussian, file (got '" + r + "')");
  }
  if (r == "file" && c.initial.path.empty()) err("initial.path is required for the file recipe");
  if (!std::isfinite(c.initial.amplitude)) err("initial.amplitude must be finite");
  if (!(c.initial.width > 0.0)) err("initial.width must be positive");
  if (c.initial.noise < 0.0) err("initial.noise must be non-negative");

  if (c.d_ana) {
    const int d = *c.d_ana;
    if (d < 1) {
      err("analysis.d_ana must be a positive dimension");
    } else {
      if (!regularity_ok(d, c.gamma)) {
        std::ostringstream s;
        s << "regularity ceiling violated: ceil(gamma) = " << std::ceil(c.gamma) << " > 1 + 8/d = " << 1.0 + 8.0 / d;
        err(s.str());
      }
      const double gwp = gamma_lower_gwp(d);
      const bool gwp_kind = c.kind == ExperimentKind::gwp_below_threshold || c.kind == ExperimentKind::sobolev_growth;
      if (gwp_kind && !(c.gamma > gwp)) {
        std::ostringstream s;
        s.precision(17);
        s << "gamma = " << c.gamma << " is outside the global-existence range 8d/(3d+8) < gamma < 2 (lower end "
          << gwp << " for d = " << d << ")";
        adv(s.str());
      }
      const bool conc_kind = c.kind == ExperimentKind::blowup_concentration || c.kind == ExperimentKind::profile_extraction;
      if (conc_kind) {
        const double lo = gamma_lower_conc(d);
        if (!(c.gamma > lo)) {
          std::ostringstream s;
          s << "gamma = " << c.gamma << " is below the concentration threshold " << std::setprecision(4) << lo
            << " (" << std::setprecision(17) << lo << ") for d = " << d;
          adv(s.str());
        }
      }
      if (!(c.delta < c.gamma + 8.0 / d - 3.0)) {
        adv("delta is outside the range delta < gamma + 8/d - 3 assumed by the almost-conservation bound");
      }
    }
  }
  if (grid) {
    if (std::abs(c.params.p - 8.0 / c.dim) > 1e-12) {
      adv("p differs from the mass-critical power 8/d_sim; scaling and ground-state checks assume criticality");
    }
    const double half_nyq = 0.5 * grid->nyquist();
    if (c.kind == ExperimentKind::almost_conservation) {
      if (c.N_list.empty()) err("analysis.N_list must not be empty");
      for (double N : c.N_list) {
        if (!(N > 0.0 && N < half_nyq)) {
          std::ostringstream s;
          s << "analysis.N_list entry " << N << " must lie in (0, " << half_nyq << ") = (0, nyquist/2)";
          err(s.str());
        }
      }
      if (!(c.window > 0.0)) err("experiment_params.window must be positive");
    }
    if (c.N && *c.N >= grid->max_frequency()) adv("analysis.N is above the largest lattice frequency; I is the identity");
  }
  if (c.kind == ExperimentKind::scaling_invariance) {
    for (double l : c.lambdas) {
      if (!(l > 0.0)) err("experiment_params.lambdas entries must be positive");
    }
  }
  if (c.kind == ExperimentKind::lwp_window) {
    if (c.amplitudes.empty()) err("experiment_params.amplitudes must not be empty");
    if (!(c.lwp_constant > 0.0)) err("experiment_params.lwp_constant must be positive");
  }
  if (c.kind == ExperimentKind::profile_extraction && c.profile_count < 1) {
    err("experiment_params.profile_count must be at least 1");
  }
  if (c.workers < 0) err("experiment_params.workers must be non-negative");
  return out;
}

}  // namespace nl4s

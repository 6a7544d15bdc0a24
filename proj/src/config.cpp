#include "heatex/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "heatex/errors.hpp"

namespace heatex {
namespace {

using nlohmann::json;

enum class FieldType {
  number, integer, string, boolean, grid, seed, optional_number, optional_string
};

struct Field {
  std::string name;
  FieldType type;
};

using Section = std::pair<std::string, std::vector<Field>>;

std::vector<Field> model_fields(Regime regime, std::string const& kind) {
  std::vector<Field> out{{"kind", FieldType::string}};
  auto const& catalog =
      regime == Regime::quantum ? quantum_catalog() : classical_catalog();
  for (auto const& entry : catalog) {
    if (entry.kind != kind) continue;
    for (auto const& f : entry.fields) {
      FieldType t = FieldType::number;
      if (f == "levels" || f == "dim_a" || f == "dim_b" || f == "dof_a" ||
          f == "dof_b") {
        t = FieldType::integer;
      } else if (f == "seed") {
        t = FieldType::seed;
      }
      out.push_back({f, t});
    }
  }
  return out;
}

std::vector<Section> schema(Regime regime, std::string const& kind) {
  std::vector<Section> s;
  s.push_back({"model", model_fields(regime, kind)});
  s.push_back({"temps", {{"beta_a", FieldType::number}, {"beta_b", FieldType::number}}});
  if (regime == Regime::quantum) {
    s.push_back({"protocol", {{"tau", FieldType::number},
                              {"q_definition", FieldType::string}}});
    s.push_back({"grids", {{"z_grid", FieldType::grid},
                           {"u_grid", FieldType::grid},
                           {"coupling_sweep", FieldType::grid},
                           {"n_max", FieldType::integer}}});
  } else {
    s.push_back({"protocol", {{"tau", FieldType::number},
                              {"propagator", FieldType::string},
                              {"dt", FieldType::number},
                              {"omega_bound", FieldType::optional_number},
                              {"drift_budget", FieldType::number}}});
    s.push_back({"grids", {{"z_grid", FieldType::grid},
                           {"coupling_sweep", FieldType::grid},
                           {"n_max", FieldType::integer}}});
    s.push_back({"sampler", {{"n_samples", FieldType::integer},
                             {"seed", FieldType::seed},
                             {"method", FieldType::string},
                             {"burn_in_sweeps", FieldType::integer},
                             {"thin", FieldType::integer},
                             {"chains", FieldType::integer}}});
  }
  s.push_back({"tolerances", {{"identity_tol", FieldType::number},
                              {"stat_sigma", FieldType::number},
                              {"anchor_tol", FieldType::number},
                              {"moment_rtol", FieldType::number},
                              {"fourier_tol", FieldType::number}}});
  s.push_back({"output", {{"directory", FieldType::optional_string},
                          {"both_definitions", FieldType::boolean}}});
  return s;
}

Regime regime_of(json const& doc) {
  if (!doc.is_object() || !doc.contains("regime")) return Regime::quantum;
  auto const& r = doc["regime"];
  if (r == "quantum") return Regime::quantum;
  if (r == "classical") return Regime::classical;
  throw ConfigError("regime must be 'quantum' or 'classical', got " + r.dump());
}

std::string default_kind(Regime regime) {
  return regime == Regime::quantum ? "flip_flop" : "harmonic_bilinear";
}

std::string kind_of(json const& doc, Regime regime) {
  if (doc.is_object() && doc.contains("model") && doc["model"].is_object() &&
      doc["model"].contains("kind") && doc["model"]["kind"].is_string()) {
    return doc["model"]["kind"].get<std::string>();
  }
  return default_kind(regime);
}

std::size_t edit_distance(std::string const& a, std::string const& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t const sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string with_suggestion(std::string const& message, std::string const& key,
                            std::vector<std::string> const& candidates) {
  std::string const s = suggest_key(key, candidates);
  return s.empty() ? message : message + " (did you mean \"" + s + "\"?)";
}

double grid_value(double start, double step, long i) {
  double v = start + double(i) * step;
  double const snapped = std::round(v * 1e9) / 1e9;
  if (std::abs(v - snapped) < 1e-12) v = snapped;
  return v == 0.0 ? 0.0 : v;  // no negative zero
}

std::string trim(std::string s) {
  auto const not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number(std::string const& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (std::exception const&) {
    throw ConfigError("grid entry '" + text + "' is not a number");
  }
  if (pos != text.size()) {
    throw ConfigError("grid entry '" + text + "' is not a number");
  }
  return v;
}

json default_model(Regime regime, std::string const& kind) {
  if (regime == Regime::quantum) {
    if (kind == "flip_flop") return {{"kind", kind}, {"omega", 1.0}, {"g", 0.3}};
    if (kind == "detuned_flip_flop") {
      return {{"kind", kind}, {"omega_a", 1.0}, {"omega_b", 1.3}, {"g", 0.2}};
    }
    if (kind == "oscillators") {
      return {{"kind", kind}, {"levels", 3}, {"omega_a", 1.0},
              {"omega_b", 1.0}, {"g", 0.1}};
    }
    if (kind == "random") {
      return {{"kind", kind}, {"dim_a", 2}, {"dim_b", 3}, {"g", 0.1}, {"seed", 1}};
    }
  } else {
    if (kind == "harmonic_bilinear" || kind == "harmonic_quartic") {
      return {{"kind", kind}, {"dof_a", 1}, {"dof_b", 1}, {"omega_a", 1.0},
              {"omega_b", 1.0}, {"epsilon", 0.05}};
    }
  }
  std::ostringstream os;
  os << "unknown " << to_string(regime) << " model kind '" << kind
     << "'; catalog:";
  auto const& catalog =
      regime == Regime::quantum ? quantum_catalog() : classical_catalog();
  for (auto const& e : catalog) os << " " << e.kind;
  throw ConfigError(os.str());
}

}  // namespace

char const* to_string(Regime r) {
  return r == Regime::quantum ? "quantum" : "classical";
}

std::string suggest_key(std::string const& key,
                        std::vector<std::string> const& candidates) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (auto const& c : candidates) {
    std::size_t const d = edit_distance(key, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  std::size_t const limit = std::max<std::size_t>(2, key.size() / 3);
  return best_d <= limit ? best : std::string{};
}

std::vector<double> parse_grid(std::string const& text) {
  std::string const t = trim(text);
  if (t.empty()) return {};
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
    if (parts.size() != 3) {
      throw ConfigError("range grid must be start:stop:step, got '" + t + "'");
    }
    double const start = parse_number(parts[0]);
    double const stop = parse_number(parts[1]);
    double const step = parse_number(parts[2]);
    if (!(step != 0.0) || !std::isfinite(step) || (stop - start) / step < -1e-9) {
      throw ConfigError("range grid '" + t + "' has an invalid step");
    }
    double const count = (stop - start) / step;
    long const n = std::lround(count);
    if (std::abs(count - double(n)) > 1e-6) {
      throw ConfigError("range grid '" + t + "': step does not divide the span");
    }
    for (long i = 0; i <= n; ++i) out.push_back(grid_value(start, step, i));
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item)));
  return out;
}

std::vector<double> parse_grid(json const& value) {
  if (value.is_string()) return parse_grid(value.get<std::string>());
  if (value.is_number()) return {value.get<double>()};
  if (!value.is_array()) {
    throw ConfigError("grid must be an array, a range string or a list");
  }
  std::vector<double> out;
  for (auto const& v : value) {
    if (!v.is_number()) throw ConfigError("grid entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json default_config_json(Regime regime, std::string const& model_kind) {
  std::string const kind = model_kind.empty() ? default_kind(regime) : model_kind;
  json doc;
  doc["regime"] = to_string(regime);
  doc["model"] = default_model(regime, kind);
  doc["temps"] = {{"beta_a", 0.5}, {"beta_b", 1.0}};
  doc["tolerances"] = {{"identity_tol", 1e-10}, {"stat_sigma", 3.0},
                       {"anchor_tol", 1e-12}, {"moment_rtol", 1e-8},
                       {"fourier_tol", 1e-10}};
  doc["output"] = {{"both_definitions", false}};
  if (regime == Regime::quantum) {
    doc["protocol"] = {{"tau", 2.0}, {"q_definition", "via_b"}};
    doc["grids"] = {{"z_grid", "-2:3:0.1"}, {"u_grid", "-10:10:0.1"},
                    {"coupling_sweep", json::array()}, {"n_max", 4}};
  } else {
    doc["protocol"] = {{"tau", 5.0}, {"propagator", "auto"}, {"dt", 1e-3},
                       {"omega_bound", nullptr}, {"drift_budget", 1e-8}};
    doc["grids"] = {{"z_grid", "0:2:0.25"}, {"coupling_sweep", json::array()},
                    {"n_max", 4}};
    // Verlet on the quartic model needs a frequency bound; 2 covers thermal
    // amplitudes at the default temperatures with margin.
    if (kind == "harmonic_quartic") doc["protocol"]["omega_bound"] = 2.0;
    doc["sampler"] = {{"n_samples", 100000}, {"seed", 12345},
                      {"method", "auto"}, {"burn_in_sweeps", 10000},
                      {"thin", 10}, {"chains", 64}};
  }
  return doc;
}

void apply_override(json& doc, std::string const& key,
                    std::string const& value) {
  if (!doc.is_object()) doc = json::object();
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (json::parse_error const&) {
    parsed = value;
  }
  if (key == "regime") {
    doc["regime"] = parsed;
    return;
  }
  Regime const regime = regime_of(doc);
  std::string kind = kind_of(doc, regime);
  if (key == "model.kind" || key == "kind") {
    doc["model"]["kind"] = parsed;
    return;
  }
  auto const sections = schema(regime, kind);
  std::vector<std::string> full_names;
  std::vector<std::string> matches;
  std::string section, field;
  auto const dot = key.find('.');
  for (auto const& [name, fields] : sections) {
    for (auto const& f : fields) {
      full_names.push_back(name + "." + f.name);
      full_names.push_back(f.name);
      if (dot == std::string::npos ? f.name == key
                                   : name + "." + f.name == key) {
        matches.push_back(name + "." + f.name);
      }
    }
  }
  if (matches.empty()) {
    throw ConfigError(with_suggestion("unknown override key \"" + key + "\"",
                                      key, full_names));
  }
  if (matches.size() > 1) {
    std::string list;
    for (auto const& m : matches) list += " " + m;
    throw ConfigError("override key \"" + key + "\" is ambiguous; use one of" +
                      list);
  }
  auto const d = matches.front().find('.');
  section = matches.front().substr(0, d);
  field = matches.front().substr(d + 1);
  doc[section][field] = parsed;
}

ExperimentConfig config_from_json(json const& raw) {
  if (!raw.is_object()) throw ConfigError("configuration must be a JSON object");
  std::vector<std::string> errors;
  Regime regime = Regime::quantum;
  try {
    regime = regime_of(raw);
  } catch (ConfigError const& e) {
    throw;
  }
  std::string const kind = kind_of(raw, regime);
  json doc;
  try {
    doc = default_config_json(regime, kind);
  } catch (ConfigError const& e) {
    throw ConfigError(std::string("model.kind: ") + e.what());
  }
  auto const sections = schema(regime, kind);

  std::vector<std::string> top_names{"regime"};
  for (auto const& [name, fields] : sections) top_names.push_back(name);
  for (auto const& [key, value] : raw.items()) {
    if (std::find(top_names.begin(), top_names.end(), key) == top_names.end()) {
      errors.push_back(with_suggestion("unknown section \"" + key + "\"", key,
                                       top_names));
      continue;
    }
    if (key == "regime") continue;
    if (!value.is_object()) {
      errors.push_back("section \"" + key + "\" must be an object");
      continue;
    }
    auto const it = std::find_if(sections.begin(), sections.end(),
                                 [&](Section const& s) { return s.first == key; });
    std::vector<std::string> names;
    for (auto const& f : it->second) names.push_back(f.name);
    for (auto const& [fkey, fvalue] : value.items()) {
      if (std::find(names.begin(), names.end(), fkey) == names.end()) {
        errors.push_back(with_suggestion(
            "unknown key \"" + key + "." + fkey + "\"", fkey, names));
        continue;
      }
      doc[key][fkey] = fvalue;
    }
  }

  // Type checks against the merged document.
  for (auto const& [name, fields] : sections) {
    for (auto const& f : fields) {
      json const& v = doc[name][f.name];
      std::string const where = name + "." + f.name;
      bool ok = true;
      switch (f.type) {
        case FieldType::number: ok = v.is_number(); break;
        case FieldType::optional_number: ok = v.is_null() || v.is_number(); break;
        case FieldType::integer: ok = v.is_number_integer(); break;
        case FieldType::seed: ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); break;
        case FieldType::string: ok = v.is_string(); break;
        case FieldType::optional_string: ok = v.is_null() || v.is_string(); break;
        case FieldType::boolean: ok = v.is_boolean(); break;
        case FieldType::grid:
          try {
            parse_grid(v);
          } catch (ConfigError const& e) {
            errors.push_back(where + ": " + e.what());
            continue;
          }
          break;
      }
      if (!ok) errors.push_back(where + ": wrong type (" + v.dump() + ")");
    }
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (auto const& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }

  ExperimentConfig c;
  c.regime = regime;
  auto const& m = doc["model"];
  auto num = [&](json const& j, char const* k) { return j[k].get<double>(); };
  if (regime == Regime::quantum) {
    c.quantum_model.kind = kind;
    if (m.contains("omega")) c.quantum_model.omega = num(m, "omega");
    if (m.contains("omega_a")) c.quantum_model.omega_a = num(m, "omega_a");
    if (m.contains("omega_b")) c.quantum_model.omega_b = num(m, "omega_b");
    if (m.contains("g")) c.quantum_model.g = num(m, "g");
    if (m.contains("levels")) c.quantum_model.levels = m["levels"].get<int>();
    if (m.contains("dim_a")) c.quantum_model.dim_a = m["dim_a"].get<int>();
    if (m.contains("dim_b")) c.quantum_model.dim_b = m["dim_b"].get<int>();
    if (m.contains("seed")) c.quantum_model.seed = m["seed"].get<std::uint64_t>();
  } else {
    c.classical_model.kind = kind;
    c.classical_model.dof_a = m["dof_a"].get<int>();
    c.classical_model.dof_b = m["dof_b"].get<int>();
    c.classical_model.omega_a = num(m, "omega_a");
    c.classical_model.omega_b = num(m, "omega_b");
    c.classical_model.epsilon = num(m, "epsilon");
  }
  c.beta_a = num(doc["temps"], "beta_a");
  c.beta_b = num(doc["temps"], "beta_b");
  auto const& p = doc["protocol"];
  c.tau = num(p, "tau");
  auto const& g = doc["grids"];
  c.z_grid = parse_grid(g["z_grid"]);
  c.coupling_sweep = parse_grid(g["coupling_sweep"]);
  c.n_max = g["n_max"].get<int>();
  auto const& t = doc["tolerances"];
  c.tolerances.identity_tol = num(t, "identity_tol");
  c.tolerances.stat_sigma = num(t, "stat_sigma");
  c.tolerances.anchor_tol = num(t, "anchor_tol");
  c.tolerances.moment_rtol = num(t, "moment_rtol");
  c.tolerances.fourier_tol = num(t, "fourier_tol");
  auto const& o = doc["output"];
  if (o.contains("directory") && !o["directory"].is_null()) c.output_directory = o["directory"].get<std::string>();
  c.both_definitions = o["both_definitions"].get<bool>();

  auto check = [&](bool ok, std::string const& msg) {
    if (!ok) errors.push_back(msg);
  };
  auto guarded = [&](auto&& fn) {
    try {
      fn();
    } catch (Error const& e) {
      errors.push_back(e.what());
    }
  };
  if (regime == Regime::quantum) {
    c.u_grid = parse_grid(g["u_grid"]);
    guarded([&] { c.q_definition = heat_definition_from_string(p["q_definition"].get<std::string>()); });
    guarded([&] { build_model(c.quantum_model); });
  } else {
    c.classical_protocol.tau = c.tau;
    guarded([&] { c.classical_protocol.method = propagation_method_from_string(p["propagator"].get<std::string>()); });
    c.classical_protocol.dt = num(p, "dt");
    if (!p["omega_bound"].is_null()) c.classical_protocol.omega_bound = num(p, "omega_bound");
    c.classical_protocol.drift_budget = num(p, "drift_budget");
    auto const& s = doc["sampler"];
    check(s["n_samples"].get<long long>() >= 1, "sampler.n_samples must be >= 1");
    c.sampler.n_samples = std::size_t(std::max<long long>(1, s["n_samples"].get<long long>()));
    c.sampler.seed = s["seed"].get<std::uint64_t>();
    guarded([&] { c.sampler.method = sampler_method_from_string(s["method"].get<std::string>()); });
    c.sampler.burn_in_sweeps = s["burn_in_sweeps"].get<int>();
    c.sampler.thin = s["thin"].get<int>();
    c.sampler.chains = s["chains"].get<int>();
    check(c.sampler.burn_in_sweeps >= 0, "sampler.burn_in_sweeps must be >= 0");
    check(c.sampler.thin >= 1, "sampler.thin must be >= 1");
    check(c.sampler.chains >= 1, "sampler.chains must be >= 1");
    check(c.classical_protocol.dt > 0.0, "protocol.dt must be positive");
    check(c.classical_protocol.drift_budget >= 0.0, "protocol.drift_budget must be >= 0");
    guarded([&] { ClassicalExchangeModel(c.classical_model); });
  }
  guarded([&] { ExchangeTemperatures(c.beta_a, c.beta_b); });
  check(std::isfinite(c.tau), "protocol.tau must be finite");
  check(!c.z_grid.empty(), "grids.z_grid must not be empty");
  for (double z : c.z_grid) check(std::isfinite(z), "grids.z_grid entries must be finite");
  for (double u : c.u_grid) check(std::isfinite(u), "grids.u_grid entries must be finite");
  check(c.n_max >= 0, "grids.n_max must be >= 0");
  check(c.tolerances.identity_tol > 0.0, "tolerances.identity_tol must be positive");
  check(c.tolerances.stat_sigma > 0.0, "tolerances.stat_sigma must be positive");
  check(c.tolerances.anchor_tol > 0.0, "tolerances.anchor_tol must be positive");
  check(c.tolerances.moment_rtol > 0.0, "tolerances.moment_rtol must be positive");
  check(c.tolerances.fourier_tol > 0.0, "tolerances.fourier_tol must be positive");
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (auto const& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

json ExperimentConfig::echo() const {
  json doc;
  doc["regime"] = to_string(regime);
  if (regime == Regime::quantum) {
    auto const& q = quantum_model;
    json m{{"kind", q.kind}};
    for (auto const& entry : quantum_catalog()) {
      if (entry.kind != q.kind) continue;
      for (auto const& f : entry.fields) {
        if (f == "omega") m[f] = q.omega;
        if (f == "omega_a") m[f] = q.omega_a;
        if (f == "omega_b") m[f] = q.omega_b;
        if (f == "g") m[f] = q.g;
        if (f == "levels") m[f] = q.levels;
        if (f == "dim_a") m[f] = q.dim_a;
        if (f == "dim_b") m[f] = q.dim_b;
        if (f == "seed") m[f] = q.seed;
      }
    }
    doc["model"] = m;
    doc["protocol"] = {{"tau", tau}, {"q_definition", to_string(q_definition)}};
    doc["grids"] = {{"z_grid", z_grid}, {"u_grid", u_grid},
                    {"coupling_sweep", coupling_sweep}, {"n_max", n_max}};
  } else {
    auto const& m = classical_model;
    doc["model"] = {{"kind", m.kind}, {"dof_a", m.dof_a}, {"dof_b", m.dof_b},
                    {"omega_a", m.omega_a}, {"omega_b", m.omega_b},
                    {"epsilon", m.epsilon}};
    auto const& p = classical_protocol;
    doc["protocol"] = {{"tau", tau}, {"propagator", to_string(p.method)},
                       {"dt", p.dt}, {"drift_budget", p.drift_budget}};
    doc["protocol"]["omega_bound"] =
        p.omega_bound ? json(*p.omega_bound) : json(nullptr);
    doc["grids"] = {{"z_grid", z_grid}, {"coupling_sweep", coupling_sweep},
                    {"n_max", n_max}};
    doc["sampler"] = {{"n_samples", sampler.n_samples}, {"seed", sampler.seed},
                      {"method", to_string(sampler.method)},
                      {"burn_in_sweeps", sampler.burn_in_sweeps},
                      {"thin", sampler.thin}, {"chains", sampler.chains}};
  }
  doc["temps"] = {{"beta_a", beta_a}, {"beta_b", beta_b}};
  doc["tolerances"] = {{"identity_tol", tolerances.identity_tol},
                       {"stat_sigma", tolerances.stat_sigma},
                       {"anchor_tol", tolerances.anchor_tol},
                       {"moment_rtol", tolerances.moment_rtol},
                       {"fourier_tol", tolerances.fourier_tol}};
  doc["output"] = {{"both_definitions", both_definitions}};
  if (output_directory) doc["output"]["directory"] = *output_directory;
  return doc;
}

}  // namespace heatex

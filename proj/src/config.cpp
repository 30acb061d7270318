#include "ddpo/config.hpp"

#include <fstream>

namespace ddpo {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

double get_num(const json& obj, const std::string& where, const char* key, double fallback,
               bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError(where + ": missing key '" + key + "'");
    return fallback;
  }
  if (!obj[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return obj[key].get<double>();
}

std::string get_str(const json& obj, const std::string& where, const char* key,
                    const std::string& fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError(where + ": missing key '" + key + "'");
    return fallback;
  }
  if (!obj[key].is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return obj[key].get<std::string>();
}

TimeFunction parse_expr(const std::string& src, const std::string& where) {
  try {
    return TimeFunction::parse(src);
  } catch (const ParseError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

// ---- scenario ------------------------------------------------------------

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  check_keys(j, "config",
             {"name", "model", "k_strategy", "initial_state", "theta_init", "classical", "grid",
              "horizon", "dt_output", "base_dt", "output_dir"});
  ScenarioConfig c;
  c.name = get_str(j, "config", "name", c.name);
  c.horizon = get_num(j, "config", "horizon", c.horizon);
  c.dt_output = get_num(j, "config", "dt_output", c.dt_output);
  c.base_dt = get_num(j, "config", "base_dt", c.base_dt);
  c.output_dir = get_str(j, "config", "output_dir", c.output_dir);

  if (!j.contains("model")) throw ConfigError("config: missing 'model'");
  const json& m = j["model"];
  if (m.contains("preset")) {
    check_keys(m, "model",
               {"preset", "gamma", "f0", "Omega", "phi", "mass", "omega0_sq", "width", "drive"});
    c.model.preset = get_str(m, "model", "preset", "", true);
    c.model.gamma = get_num(m, "model", "gamma", 0.0);
    c.model.f0 = get_num(m, "model", "f0", 0.0);
    c.model.omega = get_num(m, "model", "Omega", 0.0);
    c.model.phi = get_num(m, "model", "phi", 0.0);
    c.model.mass = get_str(m, "model", "mass", "1");
    c.model.omega0_sq = get_str(m, "model", "omega0_sq", "1");
    c.model.width = get_str(m, "model", "width", "1");
    c.model.drive = get_str(m, "model", "drive", "0");
    if (c.model.preset != "caldirola-kanai" && c.model.preset != "parametric" &&
        c.model.preset != "free-well" && c.model.preset != "posmom-test")
      throw ConfigError("model.preset: unknown preset '" + c.model.preset + "'");
  } else if (m.contains("coefficients")) {
    check_keys(m, "model", {"coefficients"});
    const json& cf = m["coefficients"];
    check_keys(cf, "model.coefficients", {"a", "b", "c", "d", "e", "f"});
    for (const char* key : {"a", "b", "c", "d", "e", "f"})
      c.model.coefficients[key] = get_str(cf, "model.coefficients", key, "0", true);
  } else {
    throw ConfigError("model: need either 'preset' or 'coefficients'");
  }

  if (j.contains("k_strategy")) {
    const json& k = j["k_strategy"];
    check_keys(k, "k_strategy", {"kind", "values", "K", "Omega", "rho0", "drho0"});
    c.k.kind = get_str(k, "k_strategy", "kind", "zero", true);
    if (c.k.kind == "constant" || c.k.kind == "tracked") {
      if (!k.contains("values") || !k["values"].is_array() || k["values"].size() != 3)
        throw ConfigError("k_strategy.values: expected an array of 3 numbers");
      for (int i = 0; i < 3; ++i) c.k.values[i] = k["values"][i].get<double>();
    } else if (c.k.kind == "free-particle" || c.k.kind == "posmom") {
      c.k.k_expr = get_str(k, "k_strategy", "K", "", true);
    } else if (c.k.kind == "ermakov") {
      c.k.omega = get_num(k, "k_strategy", "Omega", 1.0);
      c.k.rho0 = get_num(k, "k_strategy", "rho0", 1.0);
      c.k.drho0 = get_num(k, "k_strategy", "drho0", 0.0);
    } else if (c.k.kind != "zero") {
      throw ConfigError("k_strategy.kind: unknown kind '" + c.k.kind + "'");
    }
  }

  if (j.contains("initial_state")) {
    const json& s = j["initial_state"];
    check_keys(s, "initial_state", {"kind", "n", "terms", "width", "k0", "xi", "x0"});
    c.initial.kind = get_str(s, "initial_state", "kind", "hermite", true);
    c.initial.n = static_cast<unsigned>(get_num(s, "initial_state", "n", 0.0));
    c.initial.width = get_num(s, "initial_state", "width", 1.0);
    c.initial.k0 = get_num(s, "initial_state", "k0", 0.0);
    c.initial.xi = get_num(s, "initial_state", "xi", 0.0);
    c.initial.x0 = get_num(s, "initial_state", "x0", 1.0);
    if (s.contains("terms")) {
      if (!s["terms"].is_array()) throw ConfigError("initial_state.terms: expected an array");
      for (const auto& t : s["terms"]) {
        check_keys(t, "initial_state.terms[]", {"n", "re", "im"});
        InitTermConfig tc;
        tc.n = static_cast<unsigned>(get_num(t, "terms[]", "n", 0.0, true));
        tc.re = get_num(t, "terms[]", "re", 1.0);
        tc.im = get_num(t, "terms[]", "im", 0.0);
        c.initial.terms.push_back(tc);
      }
    }
    if (c.initial.kind != "hermite" && c.initial.kind != "superposition" &&
        c.initial.kind != "well" && c.initial.kind != "plane" && c.initial.kind != "posmom")
      throw ConfigError("initial_state.kind: unknown kind '" + c.initial.kind + "'");
  }

  if (j.contains("theta_init")) {
    const json& t = j["theta_init"];
    check_keys(t, "theta_init", {"re", "im"});
    for (const char* key : {"re", "im"}) {
      if (!t.contains(key)) continue;
      if (!t[key].is_array() || t[key].size() != 3)
        throw ConfigError(std::string("theta_init.") + key + ": expected an array of 3 numbers");
      for (int i = 0; i < 3; ++i) {
        double v = t[key][i].get<double>();
        if (std::string(key) == "re")
          c.theta_init_re[i] = v;
        else
          c.theta_init_im[i] = v;
      }
    }
  }

  if (j.contains("classical")) {
    const json& cl = j["classical"];
    check_keys(cl, "classical", {"x0", "p0"});
    c.x0 = get_num(cl, "classical", "x0", 0.0);
    c.p0 = get_num(cl, "classical", "p0", 0.0);
  }

  if (j.contains("grid")) {
    const json& g = j["grid"];
    check_keys(g, "grid", {"x_min", "x_max", "n"});
    c.grid.x_min = get_num(g, "grid", "x_min", c.grid.x_min);
    c.grid.x_max = get_num(g, "grid", "x_max", c.grid.x_max);
    c.grid.n = static_cast<std::size_t>(get_num(g, "grid", "n", 1024.0));
  }
  return c;
}

json ScenarioConfig::to_json() const {
  json j;
  j["name"] = name;
  if (!model.preset.empty()) {
    json m;
    m["preset"] = model.preset;
    if (model.preset == "caldirola-kanai" || model.preset == "posmom-test") {
      m["gamma"] = model.gamma;
      m["f0"] = model.f0;
      m["Omega"] = model.omega;
      if (model.preset == "caldirola-kanai") m["phi"] = model.phi;
    } else if (model.preset == "parametric") {
      m["mass"] = model.mass;
      m["omega0_sq"] = model.omega0_sq;
      m["drive"] = model.drive;
    } else if (model.preset == "free-well") {
      m["width"] = model.width;
      m["drive"] = model.drive;
    }
    j["model"] = m;
  } else {
    j["model"] = {{"coefficients", model.coefficients}};
  }
  json k;
  k["kind"] = this->k.kind;
  if (this->k.kind == "constant" || this->k.kind == "tracked")
    k["values"] = this->k.values;
  else if (this->k.kind == "free-particle" || this->k.kind == "posmom")
    k["K"] = this->k.k_expr;
  else if (this->k.kind == "ermakov") {
    k["Omega"] = this->k.omega;
    k["rho0"] = this->k.rho0;
    k["drho0"] = this->k.drho0;
  }
  j["k_strategy"] = k;

  json s;
  s["kind"] = initial.kind;
  if (initial.kind == "hermite") s["n"] = initial.n;
  if (initial.kind == "superposition") {
    json terms = json::array();
    for (const auto& t : initial.terms)
      terms.push_back({{"n", t.n}, {"re", t.re}, {"im", t.im}});
    s["terms"] = terms;
  }
  if (initial.kind == "well") {
    s["n"] = initial.n;
    s["width"] = initial.width;
  }
  if (initial.kind == "plane") s["k0"] = initial.k0;
  if (initial.kind == "posmom") {
    s["xi"] = initial.xi;
    s["x0"] = initial.x0;
  }
  j["initial_state"] = s;

  j["theta_init"] = {{"re", theta_init_re}, {"im", theta_init_im}};
  j["classical"] = {{"x0", x0}, {"p0", p0}};
  j["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"n", grid.n}};
  j["horizon"] = horizon;
  j["dt_output"] = dt_output;
  j["base_dt"] = base_dt;
  j["output_dir"] = output_dir;
  return j;
}

CoefficientSet ScenarioConfig::coefficient_set() const {
  if (model.preset == "caldirola-kanai")
    return caldirola_kanai(model.gamma, model.f0, model.omega, model.phi);
  if (model.preset == "posmom-test") return posmom_test(model.gamma, model.f0, model.omega);
  if (model.preset == "parametric")
    return parametric_oscillator(parse_expr(model.mass, "model.mass"),
                                 parse_expr(model.omega0_sq, "model.omega0_sq"),
                                 parse_expr(model.drive, "model.drive"), horizon);
  if (model.preset == "free-well")
    return free_well(parse_expr(model.width, "model.width"),
                     parse_expr(model.drive, "model.drive"), horizon);
  auto get = [&](const char* key) {
    return parse_expr(model.coefficients.at(key), std::string("model.coefficients.") + key);
  };
  return CoefficientSet::make(get("a"), get("b"), get("c"), get("d"), get("e"), get("f"));
}

Scenario ScenarioConfig::scenario() const {
  if (is_well_model())
    throw ConfigError("free-well models use the closed-form well pipeline, not run_scenario");
  Scenario sc;
  sc.name = name;
  sc.cs = coefficient_set();

  if (k.kind == "zero") sc.k = KStrategy::zero();
  else if (k.kind == "constant") sc.k = KStrategy::constant(k.values[0], k.values[1], k.values[2]);
  else if (k.kind == "tracked") sc.k = KStrategy::tracked(k.values[0], k.values[1], k.values[2]);
  else if (k.kind == "ermakov") sc.k = KStrategy::ermakov(k.omega, k.rho0, k.drho0);
  else if (k.kind == "free-particle")
    sc.k = KStrategy::free_particle(parse_expr(k.k_expr, "k_strategy.K"));
  else if (k.kind == "posmom") sc.k = KStrategy::posmom(parse_expr(k.k_expr, "k_strategy.K"));

  if (initial.kind == "hermite") sc.initial = InitialState::hermite(initial.n);
  else if (initial.kind == "superposition") {
    std::vector<BasisTerm> terms;
    for (const auto& t : initial.terms) terms.push_back({t.n, {t.re, t.im}});
    sc.initial = InitialState::superposition(std::move(terms));
  } else if (initial.kind == "well") sc.initial = InitialState::well(initial.n, initial.width);
  else if (initial.kind == "plane") sc.initial = InitialState::plane(initial.k0);
  else sc.initial = InitialState::posmom(initial.xi, initial.x0);

  sc.theta_init.theta_plus = {theta_init_re[0], theta_init_im[0]};
  sc.theta_init.theta_zero = {theta_init_re[1], theta_init_im[1]};
  sc.theta_init.theta_minus = {theta_init_re[2], theta_init_im[2]};
  sc.x_c0 = x0;
  sc.p_c0 = p0;
  try {
    sc.grid = Grid(grid.x_min, grid.x_max, grid.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  sc.horizon = horizon;
  sc.dt_output = dt_output;
  sc.base_dt = base_dt;
  return sc;
}

WellScenario ScenarioConfig::well_scenario() const {
  if (!is_well_model()) throw ConfigError("well_scenario: model preset is not free-well");
  WellScenario ws;
  ws.width = parse_expr(model.width, "model.width");
  ws.drive = parse_expr(model.drive, "model.drive");
  if (initial.kind == "well") {
    ws.terms = {{initial.n, 1.0}};
  } else if (initial.kind == "superposition") {
    for (const auto& t : initial.terms) ws.terms.push_back({t.n, {t.re, t.im}});
  } else {
    throw ConfigError("free-well models need a 'well' or 'superposition' initial state");
  }
  try {
    ws.grid = Grid(grid.x_min, grid.x_max, grid.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  ws.horizon = horizon;
  ws.dt_output = dt_output;
  return ws;
}

// ---- classical -----------------------------------------------------------

ClassicalConfig ClassicalConfig::from_json(const json& j) {
  check_keys(j, "config", {"name", "ddho", "horizon", "dt", "sweep", "output_dir"});
  ClassicalConfig c;
  c.name = get_str(j, "config", "name", c.name);
  c.horizon = get_num(j, "config", "horizon", c.horizon);
  c.dt = get_num(j, "config", "dt", c.dt);
  c.output_dir = get_str(j, "config", "output_dir", c.output_dir);

  if (!j.contains("ddho")) throw ConfigError("config: missing 'ddho'");
  const json& d = j["ddho"];
  check_keys(d, "ddho", {"omega0", "gamma", "F0", "Omega", "phi", "x0", "p0"});
  c.ddho.omega0 = get_num(d, "ddho", "omega0", 1.0);
  c.ddho.gamma = get_num(d, "ddho", "gamma", 0.0);
  c.ddho.f0 = get_num(d, "ddho", "F0", 0.0);
  c.ddho.omega_drive = get_num(d, "ddho", "Omega", 0.0);
  c.ddho.phi = get_num(d, "ddho", "phi", 0.0);
  c.ddho.x0 = get_num(d, "ddho", "x0", 0.0);
  c.ddho.p0 = get_num(d, "ddho", "p0", 0.0);

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, "sweep", {"omega_min", "omega_max", "count", "F0"});
    SweepEntryConfig sw;
    sw.omega_min = get_num(s, "sweep", "omega_min", sw.omega_min);
    sw.omega_max = get_num(s, "sweep", "omega_max", sw.omega_max);
    sw.count = static_cast<std::size_t>(get_num(s, "sweep", "count", 1000.0));
    if (s.contains("F0")) {
      if (!s["F0"].is_array()) throw ConfigError("sweep.F0: expected an array");
      sw.f0_values.clear();
      for (const auto& v : s["F0"]) sw.f0_values.push_back(v.get<double>());
    }
    c.sweep = sw;
  }
  return c;
}

json ClassicalConfig::to_json() const {
  json j;
  j["name"] = name;
  j["ddho"] = {{"omega0", ddho.omega0}, {"gamma", ddho.gamma},       {"F0", ddho.f0},
               {"Omega", ddho.omega_drive}, {"phi", ddho.phi},       {"x0", ddho.x0},
               {"p0", ddho.p0}};
  j["horizon"] = horizon;
  j["dt"] = dt;
  if (sweep) {
    j["sweep"] = {{"omega_min", sweep->omega_min},
                  {"omega_max", sweep->omega_max},
                  {"count", sweep->count},
                  {"F0", sweep->f0_values}};
  }
  j["output_dir"] = output_dir;
  return j;
}

SweepConfig SweepConfig::from_json(const json& j) {
  check_keys(j, "config", {"output_dir", "scenarios"});
  SweepConfig c;
  c.output_dir = get_str(j, "config", "output_dir", c.output_dir);
  if (!j.contains("scenarios") || !j["scenarios"].is_array() || j["scenarios"].empty())
    throw ConfigError("config: 'scenarios' must be a non-empty array");
  for (const auto& s : j["scenarios"]) c.scenarios.push_back(ScenarioConfig::from_json(s));
  return c;
}

}  // namespace ddpo

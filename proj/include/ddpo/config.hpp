#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ddpo/classical.hpp"
#include "ddpo/models.hpp"

namespace ddpo {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Coefficient source: a named preset with parameters, or six raw
/// expressions over t.
struct ModelConfig {
  std::string preset;  // empty when raw coefficients are given
  double gamma = 0, f0 = 0, omega = 0, phi = 0;   // caldirola-kanai / posmom-test
  std::string mass, omega0_sq;                    // parametric
  std::string width;                              // free-well
  std::string drive;                              // parametric / free-well
  std::map<std::string, std::string> coefficients;
};

struct KConfig {
  std::string kind = "zero";  // zero|constant|tracked|ermakov|free-particle|posmom
  std::array<double, 3> values{0, 0, 0};
  std::string k_expr;  // K(t) for free-particle / posmom
  double omega = 1.0, rho0 = 1.0, drho0 = 0.0;
};

struct InitTermConfig {
  unsigned n = 0;
  double re = 1.0, im = 0.0;
};

struct InitConfig {
  std::string kind = "hermite";  // hermite|superposition|well|plane|posmom
  unsigned n = 0;
  std::vector<InitTermConfig> terms;
  double width = 1.0;
  double k0 = 0.0;
  double xi = 0.0, x0 = 1.0;
};

struct GridConfig {
  double x_min = -12.0, x_max = 12.0;
  std::size_t n = 1024;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ModelConfig model;
  KConfig k;
  InitConfig initial;
  std::array<double, 3> theta_init_re{0, 0, 0};
  std::array<double, 3> theta_init_im{0, 0, 0};
  double x0 = 0.0, p0 = 0.0;
  GridConfig grid;
  double horizon = 10.0;
  double dt_output = 0.05;
  double base_dt = 1e-3;
  std::string output_dir = "out";

  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  CoefficientSet coefficient_set() const;
  bool is_well_model() const { return model.preset == "free-well"; }
  Scenario scenario() const;          // rejects well models
  WellScenario well_scenario() const; // requires well model
};

struct SweepEntryConfig {
  double omega_min = 0.1, omega_max = 2.0;
  std::size_t count = 1000;
  std::vector<double> f0_values{1.0};
};

struct ClassicalConfig {
  std::string name = "classical";
  DdhoParams ddho;
  double horizon = 50.0;
  double dt = 0.01;
  std::optional<SweepEntryConfig> sweep;
  std::string output_dir = "out";

  static ClassicalConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SweepConfig {
  std::string output_dir = "out";
  std::vector<ScenarioConfig> scenarios;

  static SweepConfig from_json(const nlohmann::json& j);
};

nlohmann::json load_json_file(const std::string& path);

}  // namespace ddpo

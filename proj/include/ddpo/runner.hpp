#pragma once

#include <string>

namespace ddpo {

struct CliOptions {
  std::string config_path;
  std::string out_dir;  // overrides the config's output_dir when non-empty
  int jobs = 1;
  bool oracle = false;
  bool strict = false;
  bool pgm = false;
};

// Exit codes: 0 ok, 2 config error, 3 numerical failure / divergence under
// --strict (or a failed verification).
int cmd_classical(const CliOptions& opt);
int cmd_evolve(const CliOptions& opt);
int cmd_params(const CliOptions& opt);
int cmd_sweep(const CliOptions& opt);
int cmd_verify(const CliOptions& opt);

}  // namespace ddpo

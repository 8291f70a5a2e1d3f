#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpmean/cli/report.hpp"
#include "cpmean/kernels.hpp"
#include "cpmean/tolerances.hpp"

namespace cpmean::cli {

struct Settings {
  Tolerances tol = kDefaultTolerances;
  int nodes = 16;
  Format format = Format::text;
  Exec exec = Exec::serial;
};

Report cmd_mean(const std::string& kind, const std::string& path_a, const std::string& path_b,
                const std::optional<std::string>& out_path, const Settings& s);
Report cmd_order(const std::string& path_a, const std::string& path_b, const Settings& s);
Report cmd_index(const std::string& path, const Settings& s);
Report cmd_verify(const std::string& path, const Settings& s);
Report cmd_lebesgue(const std::string& path_phi, const std::string& path_psi,
                    const std::optional<std::string>& out_prefix, const Settings& s);

/// `args` holds the example name followed by key=value overrides.
Report cmd_example(const std::vector<std::string>& args, const Settings& s);
/// Runs every registry entry (concurrently when s.exec is parallel) and
/// merges the reports in registry order.
Report cmd_example_all(const Settings& s);

/// Exit code for an exception escaping a command: 2 validation, 3 numeric.
int exit_code_for(const std::exception& e);

}  // namespace cpmean::cli

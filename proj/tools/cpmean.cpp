// cpmean: operator means of completely positive maps from the command line.
//
// Exit codes: 0 success, 2 invalid input, 3 numeric check failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cpmean/cli/commands.hpp"
#include "cpmean/errors.hpp"

namespace {

using namespace cpmean::cli;

std::optional<double> env_tolerance() {
  const char* raw = std::getenv("CPMEAN_DEFAULT_TOL");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end && *end == '\0' && std::isfinite(v) && v > 0.0) return v;
  std::cerr << "warning: ignoring CPMEAN_DEFAULT_TOL='" << raw << "' (not a positive float)\n";
  return std::nullopt;
}

int emit(const Report& r, Format format) {
  std::cout << r.render(format);
  return r.ok() ? 0 : 3;
}

int run(int argc, char** argv) {
  CLI::App app{"Operator means, order, index and Lebesgue decomposition of CP maps"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  std::optional<double> tol;
  int nodes = 16;
  bool parallel = false;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tol", tol, "PSD tolerance (order, verify and input validation)");
  app.add_option("--nodes", nodes, "Quadrature nodes for the logarithmic mean")
      ->check(CLI::Range(1, 1024));
  app.add_flag("--parallel", parallel, "Use the OpenMP kernels");

  std::string kind = "geo";
  std::string path_a, path_b;
  std::optional<std::string> out;

  auto* mean = app.add_subcommand("mean", "Mean of two channels");
  mean->add_option("--kind", kind, "geo|arith|harm|parallel|power:<alpha>|log");
  mean->add_option("A", path_a, "First channel")->required();
  mean->add_option("B", path_b, "Second channel")->required();
  mean->add_option("-o,--output", out, "Write the resulting channel here");

  auto* order = app.add_subcommand("order", "Compare two channels in the CP order");
  order->add_option("A", path_a)->required();
  order->add_option("B", path_b)->required();

  auto* index = app.add_subcommand("index", "Pimsner-Popa type index of a channel");
  index->add_option("A", path_a)->required();

  auto* verify = app.add_subcommand("verify", "CP / unital / trace-preserving flags");
  verify->add_option("A", path_a)->required();

  auto* leb = app.add_subcommand("lebesgue", "Lebesgue decomposition of PSI relative to PHI");
  leb->add_option("PHI", path_a)->required();
  leb->add_option("PSI", path_b)->required();
  leb->add_option("-o,--output", out, "Prefix for PREFIX_ac.json and PREFIX_sing.json");

  std::vector<std::string> example_args;
  bool all = false;
  auto* example = app.add_subcommand("example", "Run a worked example (name key=value ...)");
  example->add_option("args", example_args, "Example name followed by key=value overrides");
  example->add_flag("--all", all, "Run the whole registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Settings s;
  s.format = format == "json" ? Format::json : Format::text;
  if (const auto env = env_tolerance()) s.tol.psd = *env;
  if (tol) {
    if (!(*tol > 0.0) || !std::isfinite(*tol)) {
      std::cerr << "error: --tol must be a positive number\n";
      return 2;
    }
    s.tol.psd = *tol;
  }
  s.nodes = nodes;
  s.exec = parallel ? cpmean::Exec::parallel : cpmean::Exec::serial;

  try {
    if (*mean) return emit(cmd_mean(kind, path_a, path_b, out, s), s.format);
    if (*order) return emit(cmd_order(path_a, path_b, s), s.format);
    if (*index) return emit(cmd_index(path_a, s), s.format);
    if (*verify) return emit(cmd_verify(path_a, s), s.format);
    if (*leb) return emit(cmd_lebesgue(path_a, path_b, out, s), s.format);
    if (*example) {
      if (all) {
        if (!example_args.empty()) throw cpmean::InvalidInput("--all takes no example name");
        s.exec = cpmean::Exec::parallel;
        return emit(cmd_example_all(s), s.format);
      }
      return emit(cmd_example(example_args, s), s.format);
    }
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    if (s.format == Format::json) {
      Json j;
      j["error"] = {{"kind", code == 2 ? "validation" : "numeric"}, {"message", e.what()}};
      std::cout << dump_json(j) << "\n";
    }
    std::cerr << "error: " << e.what() << "\n";
    return code;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (...) {
    std::cerr << "error: unknown failure\n";
    return 3;
  }
}

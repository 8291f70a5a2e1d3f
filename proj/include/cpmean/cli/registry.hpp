#pragma once

// Registry of worked examples. Each entry recomputes a closed-form answer
// and records the comparison as report checks.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cpmean/cli/commands.hpp"
#include "cpmean/cli/report.hpp"

namespace cpmean::cli {

/// key=value overrides on top of an entry's defaults.
class Params {
 public:
  Params(std::map<std::string, std::string> defaults, const std::vector<std::string>& overrides);

  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;  // comma separated
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

struct Example {
  std::string key;
  std::string summary;
  std::map<std::string, std::string> defaults;
  std::function<void(const Params&, const Settings&, Report&)> run;
};

const std::vector<Example>& example_registry();
/// Throws UnknownExample.
const Example& find_example(const std::string& key);

Report run_example(const Example& ex, const std::vector<std::string>& overrides, const Settings& s);

}  // namespace cpmean::cli

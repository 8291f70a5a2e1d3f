#pragma once

// Command reports rendered as text or as schema-stable JSON (floats with 17
// significant digits).

#include <json.hpp>

#include <string>
#include <vector>

#include "cpmean/hermlinalg.hpp"

namespace cpmean::cli {

using Json = nlohmann::ordered_json;

enum class Format { text, json };

struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct Report {
  std::string command;
  Json inputs = Json::object();
  Json outputs = Json::object();
  std::vector<Check> checks;

  /// Records pass = residual <= tolerance.
  void check(const std::string& name, double residual, double tolerance);
  /// Records a predicate; residual is 0 on success and 1 on failure.
  void check_flag(const std::string& name, bool pass);
  bool ok() const;

  Json to_json() const;
  std::string render(Format format) const;
};

Json matrix_json(const Matrix& m);
/// Inverse of matrix_json; throws ParseError on malformed input.
Matrix matrix_from_json(const Json& j, const std::string& what);

/// Pretty JSON with every float printed as %.17g; matrix rows on one line.
std::string dump_json(const Json& j);

}  // namespace cpmean::cli

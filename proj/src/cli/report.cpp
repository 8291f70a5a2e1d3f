#include "cpmean/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cpmean/errors.hpp"

namespace cpmean::cli {

namespace {

std::string format_double(double x, const char* fmt) {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

bool is_primitive(const Json& j) { return !j.is_array() && !j.is_object(); }

bool is_flat(const Json& j) {
  if (is_primitive(j)) return true;
  if (!j.is_array()) return false;
  for (const Json& e : j)
    if (!is_primitive(e) && !(e.is_array() && std::all_of(e.begin(), e.end(), is_primitive)))
      return false;
  return true;
}

void write_scalar(std::ostringstream& out, const Json& j) {
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
      out << "null";
      return;
    }
    // Keep a float marker so -0.0 and integral values re-parse as doubles.
    std::string s = format_double(x, "%.17g");
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    out << s;
  } else {
    out << j.dump();
  }
}

void write(std::ostringstream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out << ",\n";
      first = false;
      out << inner << Json(it.key()).dump() << ": ";
      write(out, it.value(), indent + 2);
    }
    out << "\n" << pad << "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out << "[]";
      return;
    }
    if (is_flat(j)) {
      out << "[";
      bool first = true;
      for (const Json& e : j) {
        if (!first) out << ", ";
        first = false;
        if (is_primitive(e)) {
          write_scalar(out, e);
        } else {
          out << "[";
          bool f2 = true;
          for (const Json& x : e) {
            if (!f2) out << ", ";
            f2 = false;
            write_scalar(out, x);
          }
          out << "]";
        }
      }
      out << "]";
      return;
    }
    out << "[\n";
    bool first = true;
    for (const Json& e : j) {
      if (!first) out << ",\n";
      first = false;
      out << inner;
      write(out, e, indent + 2);
    }
    out << "\n" << pad << "]";
  } else {
    write_scalar(out, j);
  }
}

bool looks_like_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const Json& row : j) {
    if (!row.is_array() || row.size() != j.size()) return false;
    for (const Json& e : row)
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) return false;
  }
  return true;
}

std::string complex_text(double re, double im) {
  auto clean = [](double v) { return std::abs(v) < 5e-15 ? 0.0 : v; };
  re = clean(re);
  im = clean(im);
  if (im == 0.0) return format_double(re, "%.6g");
  return format_double(re, "%.6g") + (im < 0 ? "-" : "+") + format_double(std::abs(im), "%.6g") +
         "i";
}

void render_value(std::ostringstream& out, const std::string& key, const Json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (looks_like_matrix(v)) {
    out << pad << key << ": (" << v.size() << "x" << v.size() << ")\n";
    for (const Json& row : v) {
      out << pad << "  [";
      for (const Json& e : row) {
        std::string cell = complex_text(e[0].get<double>(), e[1].get<double>());
        out << " " << std::string(cell.size() < 10 ? 10 - cell.size() : 0, ' ') << cell;
      }
      out << " ]\n";
    }
  } else if (v.is_object()) {
    out << pad << key << ":\n";
    for (auto it = v.begin(); it != v.end(); ++it) render_value(out, it.key(), it.value(), indent + 2);
  } else if (v.is_number_float()) {
    out << pad << key << ": " << format_double(v.get<double>(), "%.10g") << "\n";
  } else if (v.is_string()) {
    out << pad << key << ": " << v.get<std::string>() << "\n";
  } else {
    out << pad << key << ": " << dump_json(v) << "\n";
  }
}

}  // namespace

void Report::check(const std::string& name, double residual, double tolerance) {
  checks.push_back({name, std::isfinite(residual) && residual <= tolerance, residual, tolerance});
}

void Report::check_flag(const std::string& name, bool pass) {
  checks.push_back({name, pass, pass ? 0.0 : 1.0, 0.0});
}

bool Report::ok() const {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

Json Report::to_json() const {
  Json j;
  j["command"] = command;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  Json cs = Json::array();
  for (const Check& c : checks) {
    Json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["residual"] = c.residual;
    e["tolerance"] = c.tolerance;
    cs.push_back(e);
  }
  j["checks"] = cs;
  j["ok"] = ok();
  return j;
}

std::string Report::render(Format format) const {
  if (format == Format::json) return dump_json(to_json()) + "\n";
  std::ostringstream out;
  out << "command: " << command << "\n";
  if (!inputs.empty()) {
    out << "inputs:\n";
    for (auto it = inputs.begin(); it != inputs.end(); ++it) render_value(out, it.key(), it.value(), 2);
  }
  if (!outputs.empty()) {
    out << "outputs:\n";
    for (auto it = outputs.begin(); it != outputs.end(); ++it)
      render_value(out, it.key(), it.value(), 2);
  }
  if (!checks.empty()) {
    out << "checks:\n";
    for (const Check& c : checks)
      out << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  residual="
          << format_double(c.residual, "%.3e") << " tol=" << format_double(c.tolerance, "%.1e")
          << "\n";
  }
  out << "status: " << (ok() ? "ok" : "FAILED") << "\n";
  return out.str();
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ParseError(what + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ParseError(what + ": rows must be non-empty arrays");
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw ParseError(what + ": row " + std::to_string(r) + " has the wrong length");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError(what + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                         ") must be [re, im]");
      const double re = e[0].get<double>();
      const double im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im))
        throw ParseError(what + ": non-finite entry at (" + std::to_string(r) + "," +
                         std::to_string(c) + ")");
      m(static_cast<Index>(r), static_cast<Index>(c)) = Complex(re, im);
    }
  }
  return m;
}

std::string dump_json(const Json& j) {
  std::ostringstream out;
  write(out, j, 0);
  return out.str();
}

}  // namespace cpmean::cli

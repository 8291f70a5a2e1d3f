#include "cpmean/cli/channel_doc.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "cpmean/cli/report.hpp"
#include "cpmean/errors.hpp"

namespace cpmean::cli {

namespace {

Index positive_dim(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("channel document lacks '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw ParseError(std::string("'") + key + "' must be an integer");
  const auto d = v.get<long long>();
  // Desk-scale limit; keeps allocation bounded for hostile inputs.
  if (d < 1 || d > 64)
    throw ParseError(std::string("'") + key + "' must lie in [1, 64], got " + std::to_string(d));
  return static_cast<Index>(d);
}

}  // namespace

ChannelDoc parse_channel_doc(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("channel document must be a JSON object");

  ChannelDoc doc;
  doc.dim_in = positive_dim(j, "dim_in");
  doc.dim_out = positive_dim(j, "dim_out");
  if (!j.contains("repr") || !j.at("repr").is_string())
    throw ParseError("channel document needs a string 'repr'");
  const std::string repr = j.at("repr").get<std::string>();
  if (!j.contains("data")) throw ParseError("channel document lacks 'data'");
  const Json& data = j.at("data");

  if (repr == "choi") {
    doc.repr = Repr::choi;
    Matrix c = matrix_from_json(data, "choi data");
    const Index size = doc.dim_in * doc.dim_out;
    if (c.rows() != size || c.cols() != size)
      throw ParseError("choi data must be " + std::to_string(size) + "x" + std::to_string(size));
    doc.data.push_back(std::move(c));
  } else if (repr == "kraus") {
    doc.repr = Repr::kraus;
    if (!data.is_array()) throw ParseError("kraus data must be a list of operators");
    for (std::size_t k = 0; k < data.size(); ++k) {
      Matrix op = matrix_from_json(data[k], "kraus operator " + std::to_string(k));
      if (op.rows() != doc.dim_out || op.cols() != doc.dim_in)
        throw ParseError("kraus operator " + std::to_string(k) + " must be " +
                         std::to_string(doc.dim_out) + "x" + std::to_string(doc.dim_in));
      doc.data.push_back(std::move(op));
    }
  } else {
    throw ParseError("unknown repr '" + repr + "' (expected choi or kraus)");
  }

  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ParseError("'name' must be a string");
    doc.name = j.at("name").get<std::string>();
  }
  return doc;
}

std::string serialize_channel_doc(const ChannelDoc& doc) {
  Json j;
  j["dim_in"] = doc.dim_in;
  j["dim_out"] = doc.dim_out;
  j["repr"] = doc.repr == Repr::choi ? "choi" : "kraus";
  if (doc.repr == Repr::choi) {
    j["data"] = matrix_json(doc.data.at(0));
  } else {
    Json ops = Json::array();
    for (const Matrix& k : doc.data) ops.push_back(matrix_json(k));
    j["data"] = ops;
  }
  if (doc.name) j["name"] = *doc.name;
  return dump_json(j) + "\n";
}

CpMap to_map(const ChannelDoc& doc, const Tolerances& tol) {
  if (doc.repr == Repr::choi) return CpMap::from_choi(doc.dim_in, doc.dim_out, doc.data.at(0), tol);
  return CpMap::from_kraus(doc.dim_in, doc.dim_out, doc.data);
}

ChannelDoc choi_doc(const CpMap& map, std::optional<std::string> name) {
  ChannelDoc doc;
  doc.dim_in = map.dim_in();
  doc.dim_out = map.dim_out();
  doc.repr = Repr::choi;
  doc.data.push_back(map.choi().matrix());
  doc.name = std::move(name);
  return doc;
}

ChannelDoc read_channel_doc(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_channel_doc(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_channel_doc(const ChannelDoc& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << serialize_channel_doc(doc);
  if (!out) throw InvalidInput("failed writing '" + path + "'");
}

CpMap load_channel(const std::string& path, const Tolerances& tol) {
  return to_map(read_channel_doc(path), tol);
}

void save_channel(const CpMap& map, const std::string& path, std::optional<std::string> name) {
  write_channel_doc(choi_doc(map, std::move(name)), path);
}

}  // namespace cpmean::cli

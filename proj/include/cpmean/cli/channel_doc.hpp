#pragma once

// ChannelDoc JSON: {dim_in, dim_out, repr: "choi"|"kraus", data, name?}.
// Complex entries are [re, im]. Choi data is the (mn)x(mn) matrix as rows;
// Kraus data is a list of dim_out x dim_in operators, each as rows.

#include <optional>
#include <string>
#include <vector>

#include "cpmean/cpmaps.hpp"

namespace cpmean::cli {

enum class Repr { choi, kraus };

struct ChannelDoc {
  Index dim_in = 0;
  Index dim_out = 0;
  Repr repr = Repr::choi;
  std::vector<Matrix> data;  // one matrix for choi, the operators for kraus
  std::optional<std::string> name;
};

/// Structural parse; throws ParseError for anything malformed (bad JSON,
/// missing fields, wrong shapes, non-finite numbers).
ChannelDoc parse_channel_doc(const std::string& text);
std::string serialize_channel_doc(const ChannelDoc& doc);

/// Builds the map; a Choi matrix that fails the PSD test raises
/// NotCompletelyPositive.
CpMap to_map(const ChannelDoc& doc, const Tolerances& tol = kDefaultTolerances);
ChannelDoc choi_doc(const CpMap& map, std::optional<std::string> name = std::nullopt);

ChannelDoc read_channel_doc(const std::string& path);
void write_channel_doc(const ChannelDoc& doc, const std::string& path);

CpMap load_channel(const std::string& path, const Tolerances& tol = kDefaultTolerances);
void save_channel(const CpMap& map, const std::string& path,
                  std::optional<std::string> name = std::nullopt);

}  // namespace cpmean::cli

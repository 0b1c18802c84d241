#pragma once

// Canonical JSON interchange for rectangle sets:
//   { "group": {"factors": [...]}, "a": .., "b": .., "c": ..,
//     "gamma": [...], "delta": [...],
//     "hole": [{"target_images": [[...], ...]}, ...],
//     "arrays": [ [ [ [coords...], ... ], ... ], ... ] }
// Arrays are row-major. Unknown top-level keys are ignored on read.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mrs/model.hh"

namespace mrs {

nlohmann::json element_to_json(const Element& x);
Element element_from_json(const nlohmann::json& j, const Group& g);

nlohmann::json to_json(const RectSet& s);
/// Throws ParseError on any structural problem.
RectSet rect_set_from_json(const nlohmann::json& j);

/// Reads and parses a file; ParseError on I/O or syntax failure.
RectSet read_rect_set(const std::string& path);

nlohmann::json to_json(const VerifyReport& report);

/// One line per (array, row): "array,row,c0,...", coordinates joined by ';'.
std::string to_csv(const RectSet& s);

/// Arrays as aligned tuples separated by blank lines.
std::string to_pretty(const RectSet& s);

/// Writes `contents` to `path` via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace mrs

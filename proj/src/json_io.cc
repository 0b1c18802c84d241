#include "mrs/json_io.hh"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "mrs/error.hh"

namespace mrs {

using nlohmann::json;

json element_to_json(const Element& x) { return json(x.coords); }

Element element_from_json(const json& j, const Group& g) {
  if (!j.is_array()) throw ParseError("element must be an integer array");
  Element x;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ParseError("element coordinates must be integers");
    x.coords.push_back(v.get<std::int64_t>());
  }
  if (x.size() != g.rank())
    throw ParseError("element " + to_string(x) + " has " + std::to_string(x.size()) + " coordinates, group " +
                     g.to_string() + " needs " + std::to_string(g.rank()));
  return x;
}

json to_json(const RectSet& s) {
  json holes = json::array();
  for (const auto& emb : s.hole.subgroups) {
    json images = json::array();
    for (const auto& img : emb.generator_images()) images.push_back(element_to_json(img));
    holes.push_back({{"target_images", images}});
  }
  json arrays = json::array();
  for (const auto& arr : s.arrays) {
    json rows = json::array();
    for (int i = 0; i < arr.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < arr.cols(); ++j) row.push_back(element_to_json(arr.at(i, j)));
      rows.push_back(std::move(row));
    }
    arrays.push_back(std::move(rows));
  }
  return json{{"group", {{"factors", s.group.factors()}}},
              {"a", s.a},
              {"b", s.b},
              {"c", s.c()},
              {"gamma", element_to_json(s.gamma)},
              {"delta", element_to_json(s.delta)},
              {"hole", holes},
              {"arrays", arrays}};
}

namespace {

int positive_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) throw ParseError(std::string("missing integer field '") + key + "'");
  auto v = j[key].get<std::int64_t>();
  if (v < 1 || v > (1 << 24)) throw ParseError(std::string("field '") + key + "' out of range");
  return static_cast<int>(v);
}

}  // namespace

RectSet rect_set_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    if (!j.contains("group") || !j["group"].contains("factors") || !j["group"]["factors"].is_array())
      throw ParseError("missing group.factors");
    std::vector<std::int64_t> factors;
    for (const auto& f : j["group"]["factors"]) {
      if (!f.is_number_integer()) throw ParseError("group factors must be integers");
      factors.push_back(f.get<std::int64_t>());
    }
    RectSet s;
    s.group = Group(std::move(factors));
    s.a = positive_int(j, "a");
    s.b = positive_int(j, "b");
    int c = positive_int(j, "c");
    if (!j.contains("gamma") || !j.contains("delta")) throw ParseError("missing gamma/delta");
    s.gamma = element_from_json(j["gamma"], s.group);
    s.delta = element_from_json(j["delta"], s.group);
    if (j.contains("hole")) {
      if (!j["hole"].is_array()) throw ParseError("hole must be an array");
      for (const auto& h : j["hole"]) {
        if (!h.contains("target_images") || !h["target_images"].is_array())
          throw ParseError("hole entry needs target_images");
        std::vector<Element> images;
        for (const auto& img : h["target_images"]) images.push_back(element_from_json(img, s.group));
        s.hole.subgroups.push_back(Embedding::from_images(s.group, std::move(images)));
      }
    }
    if (!j.contains("arrays") || !j["arrays"].is_array()) throw ParseError("missing arrays");
    for (const auto& arr : j["arrays"]) {
      if (!arr.is_array()) throw ParseError("each array must be a list of rows");
      std::vector<Element> cells;
      int rows = 0;
      int cols = -1;
      for (const auto& row : arr) {
        if (!row.is_array()) throw ParseError("each row must be a list of elements");
        int width = 0;
        for (const auto& e : row) {
          cells.push_back(element_from_json(e, s.group));
          ++width;
        }
        if (cols >= 0 && width != cols) throw ParseError("ragged array rows");
        cols = width;
        ++rows;
      }
      s.arrays.emplace_back(rows, cols < 0 ? 0 : cols, std::move(cells));
    }
    if (s.c() != c)
      throw ParseError("declared c = " + std::to_string(c) + " but " + std::to_string(s.c()) + " arrays given");
    return s;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
}

RectSet read_rect_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return rect_set_from_json(j);
}

json to_json(const VerifyReport& report) {
  json failures = json::array();
  for (const auto& f : report.failures)
    failures.push_back({{"kind", to_string(f.kind)}, {"location", f.location()}, {"detail", f.detail}});
  return json{{"ok", report.ok}, {"failures", failures}};
}

std::string to_csv(const RectSet& s) {
  std::ostringstream out;
  out << "array,row";
  for (int j = 0; j < s.b; ++j) out << ",c" << j;
  out << '\n';
  for (int k = 0; k < s.c(); ++k) {
    const RectArray& arr = s.arrays[static_cast<std::size_t>(k)];
    for (int i = 0; i < arr.rows(); ++i) {
      out << k << ',' << i;
      for (int j = 0; j < arr.cols(); ++j) {
        out << ',';
        const Element& x = arr.at(i, j);
        for (std::size_t t = 0; t < x.size(); ++t) out << (t ? ";" : "") << x[t];
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string to_pretty(const RectSet& s) {
  std::size_t width = 0;
  for (const auto& arr : s.arrays)
    for (const auto& x : arr.cells()) width = std::max(width, to_string(x).size());
  std::ostringstream out;
  out << "group " << s.group.to_string() << "  " << s.a << "x" << s.b << " x " << s.c() << "  gamma "
      << to_string(s.gamma) << "  delta " << to_string(s.delta) << '\n';
  for (int k = 0; k < s.c(); ++k) {
    const RectArray& arr = s.arrays[static_cast<std::size_t>(k)];
    out << '\n';
    for (int i = 0; i < arr.rows(); ++i) {
      for (int j = 0; j < arr.cols(); ++j)
        out << (j ? "  " : "") << std::left << std::setw(static_cast<int>(width)) << to_string(arr.at(i, j));
      out << '\n';
    }
  }
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  static std::atomic<unsigned> counter{0};
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++) + "." +
         std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace mrs

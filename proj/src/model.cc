#include "mrs/model.hh"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "mrs/error.hh"

namespace mrs {

RectArray::RectArray(int rows, int cols, const Element& fill)
    : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows * cols), fill) {}

RectArray::RectArray(int rows, int cols, std::vector<Element> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (cells_.size() != static_cast<std::size_t>(rows * cols))
    throw DimensionError("array of shape " + std::to_string(rows) + "x" + std::to_string(cols) + " given " +
                         std::to_string(cells_.size()) + " cells");
}

std::vector<Element> hole_elements(const HoleSpec& hole, std::int64_t cap) {
  std::vector<Element> out;
  for (const auto& emb : hole.subgroups) {
    auto img = emb.image(cap);
    out.insert(out.end(), img.begin(), img.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::coverage_missing: return "coverage-missing";
    case FailureKind::coverage_duplicate: return "coverage-duplicate";
    case FailureKind::hole_violation: return "hole-violation";
    case FailureKind::row_sum: return "row-sum";
    case FailureKind::col_sum: return "col-sum";
    case FailureKind::shape: return "shape";
  }
  return "unknown";
}

std::string Failure::location() const {
  std::ostringstream out;
  if (array < 0) return "set";
  out << "array " << array;
  if (row >= 0) out << " row " << row;
  if (col >= 0) out << " col " << col;
  return out.str();
}

bool VerifyReport::has(FailureKind kind) const {
  return std::any_of(failures.begin(), failures.end(), [kind](const Failure& f) { return f.kind == kind; });
}

namespace {

void add_failure(VerifyReport& report, FailureKind kind, int array, int row, int col, std::string detail) {
  report.failures.push_back({kind, array, row, col, std::move(detail)});
}

}  // namespace

VerifyReport verify(const RectSet& s, const VerifyOptions& options) {
  VerifyReport report;
  const Group& g = s.group;
  if (s.a < 1 || s.b < 1)
    add_failure(report, FailureKind::shape, -1, -1, -1, "a and b must be positive");
  if (!g.contains(s.gamma))
    add_failure(report, FailureKind::shape, -1, -1, -1, "gamma " + to_string(s.gamma) + " not in group");
  if (!g.contains(s.delta))
    add_failure(report, FailureKind::shape, -1, -1, -1, "delta " + to_string(s.delta) + " not in group");
  for (const auto& emb : s.hole.subgroups)
    if (!(emb.target() == g))
      add_failure(report, FailureKind::shape, -1, -1, -1, "hole subgroup targets a different group");
  if (!report.failures.empty()) {
    report.ok = false;
    return report;
  }
  if (options.zero_sum) {
    if (s.gamma != g.zero())
      add_failure(report, FailureKind::row_sum, -1, -1, -1, "declared gamma " + to_string(s.gamma) + " is not zero");
    if (s.delta != g.zero())
      add_failure(report, FailureKind::col_sum, -1, -1, -1, "declared delta " + to_string(s.delta) + " is not zero");
  }

  if (g.order() > options.cap)
    throw CapExceeded("verify: group order " + std::to_string(g.order()) + " exceeds cap");
  const auto n = static_cast<std::size_t>(g.order());
  std::vector<bool> in_hole(n, false);
  std::int64_t hole_size = 0;
  for (const auto& h : hole_elements(s.hole, options.cap)) {
    in_hole[static_cast<std::size_t>(g.index_of(h))] = true;
    ++hole_size;
  }
  std::vector<int> count(n, 0);

  for (int k = 0; k < s.c(); ++k) {
    const RectArray& arr = s.arrays[static_cast<std::size_t>(k)];
    if (arr.rows() != s.a || arr.cols() != s.b) {
      add_failure(report, FailureKind::shape, k, -1, -1,
                  "shape " + std::to_string(arr.rows()) + "x" + std::to_string(arr.cols()) + " instead of " +
                      std::to_string(s.a) + "x" + std::to_string(s.b));
      continue;
    }
    bool entries_ok = true;
    for (int i = 0; i < arr.rows(); ++i) {
      for (int j = 0; j < arr.cols(); ++j) {
        const Element& x = arr.at(i, j);
        if (!g.contains(x)) {
          add_failure(report, FailureKind::shape, k, i, j, "entry " + to_string(x) + " not in " + g.to_string());
          entries_ok = false;
          continue;
        }
        auto idx = static_cast<std::size_t>(g.index_of(x));
        if (in_hole[idx]) add_failure(report, FailureKind::hole_violation, k, i, j, "entry " + to_string(x) + " lies in the hole");
        if (++count[idx] == 2)
          add_failure(report, FailureKind::coverage_duplicate, k, i, j, "entry " + to_string(x) + " repeated");
      }
    }
    if (!entries_ok) continue;
    for (int i = 0; i < arr.rows(); ++i) {
      Element sum = g.zero();
      for (int j = 0; j < arr.cols(); ++j) sum = g.add(sum, arr.at(i, j));
      if (sum != s.gamma)
        add_failure(report, FailureKind::row_sum, k, i, -1, "row sum " + to_string(sum) + " != gamma " + to_string(s.gamma));
    }
    for (int j = 0; j < arr.cols(); ++j) {
      Element sum = g.zero();
      for (int i = 0; i < arr.rows(); ++i) sum = g.add(sum, arr.at(i, j));
      if (sum != s.delta)
        add_failure(report, FailureKind::col_sum, k, -1, j, "column sum " + to_string(sum) + " != delta " + to_string(s.delta));
    }
  }

  for (std::size_t idx = 0; idx < n; ++idx)
    if (!in_hole[idx] && count[idx] == 0)
      add_failure(report, FailureKind::coverage_missing, -1, -1, -1,
                  "element " + to_string(g.element_at(static_cast<std::int64_t>(idx))) + " missing");

  std::int64_t cells = static_cast<std::int64_t>(s.a) * s.b * s.c();
  if (cells + hole_size != g.order())
    add_failure(report, FailureKind::shape, -1, -1, -1,
                std::to_string(cells) + " cells plus hole of " + std::to_string(hole_size) +
                    " do not account for group order " + std::to_string(g.order()));

  std::stable_sort(report.failures.begin(), report.failures.end(), [](const Failure& x, const Failure& y) {
    return std::tuple{x.array, x.row, x.col} < std::tuple{y.array, y.row, y.col};
  });
  report.ok = report.failures.empty();
  return report;
}

void require_verified(const RectSet& s, const std::string& what, const VerifyOptions& options) {
  VerifyReport report = verify(s, options);
  if (report.ok) return;
  std::ostringstream out;
  out << what << " failed verification:";
  std::size_t shown = 0;
  for (const auto& f : report.failures) {
    out << "\n  " << to_string(f.kind) << " at " << f.location() << ": " << f.detail;
    if (++shown == 8) break;
  }
  if (report.failures.size() > shown) out << "\n  ... " << report.failures.size() - shown << " more";
  throw VerificationFailed(out.str());
}

RectSet transpose(const RectSet& s) {
  RectSet t;
  t.group = s.group;
  t.a = s.b;
  t.b = s.a;
  t.gamma = s.delta;
  t.delta = s.gamma;
  t.hole = s.hole;
  for (const auto& arr : s.arrays) {
    RectArray out(arr.cols(), arr.rows(), s.group.zero());
    for (int i = 0; i < arr.rows(); ++i)
      for (int j = 0; j < arr.cols(); ++j) out.at(j, i) = arr.at(i, j);
    t.arrays.push_back(std::move(out));
  }
  return t;
}

namespace {

void check_grouping(const RectSet& s, int group_size, const char* op) {
  if (group_size < 1 || s.c() % group_size != 0)
    throw PreconditionError(std::string(op) + ": group size " + std::to_string(group_size) +
                            " does not divide array count " + std::to_string(s.c()));
}

}  // namespace

RectSet stack(const RectSet& s, int group_size) {
  check_grouping(s, group_size, "stack");
  RectSet out;
  out.group = s.group;
  out.a = s.a * group_size;
  out.b = s.b;
  out.gamma = s.gamma;
  out.delta = s.group.scalar_mul(group_size, s.delta);
  out.hole = s.hole;
  for (int first = 0; first < s.c(); first += group_size) {
    std::vector<Element> cells;
    for (int k = first; k < first + group_size; ++k) {
      const auto& src = s.arrays[static_cast<std::size_t>(k)].cells();
      cells.insert(cells.end(), src.begin(), src.end());
    }
    out.arrays.emplace_back(out.a, out.b, std::move(cells));
  }
  return out;
}

RectSet hconcat(const RectSet& s, int group_size) {
  check_grouping(s, group_size, "hconcat");
  RectSet out;
  out.group = s.group;
  out.a = s.a;
  out.b = s.b * group_size;
  out.gamma = s.group.scalar_mul(group_size, s.gamma);
  out.delta = s.delta;
  out.hole = s.hole;
  for (int first = 0; first < s.c(); first += group_size) {
    RectArray arr(out.a, out.b, s.group.zero());
    for (int k = 0; k < group_size; ++k) {
      const RectArray& src = s.arrays[static_cast<std::size_t>(first + k)];
      for (int i = 0; i < s.a; ++i)
        for (int j = 0; j < s.b; ++j) arr.at(i, k * s.b + j) = src.at(i, j);
    }
    out.arrays.push_back(std::move(arr));
  }
  return out;
}

RectSet map_entries(const RectSet& s, const Group& target, const std::function<Element(const Element&)>& phi) {
  RectSet out;
  out.group = target;
  out.a = s.a;
  out.b = s.b;
  out.gamma = phi(s.gamma);
  out.delta = phi(s.delta);
  for (const auto& emb : s.hole.subgroups) {
    std::vector<Element> images;
    for (const auto& img : emb.generator_images()) images.push_back(phi(img));
    out.hole.subgroups.emplace_back(emb.source(), target, std::move(images));
  }
  for (const auto& arr : s.arrays) {
    std::vector<Element> cells;
    cells.reserve(arr.cells().size());
    for (const auto& x : arr.cells()) cells.push_back(phi(x));
    out.arrays.emplace_back(arr.rows(), arr.cols(), std::move(cells));
  }
  return out;
}

std::function<Element(const Element&)> presentation_map(const Group& from, const Group& to) {
  auto src = primary_decomposition(from);
  auto dst = primary_decomposition(to);
  if (!(src.canonical == dst.canonical))
    throw PreconditionError("cannot relabel " + from.to_string() + " as non-isomorphic " + to.to_string());
  return [src = std::move(src), dst = std::move(dst)](const Element& x) {
    return dst.to_canonical.inverse(src.to_canonical.forward(x));
  };
}

RectSet relabel(const RectSet& s, const Group& target) {
  if (s.group == target) return s;
  return map_entries(s, target, presentation_map(s.group, target));
}

}  // namespace mrs

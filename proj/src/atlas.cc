#include "mrs/atlas.hh"

#include <algorithm>
#include <cctype>
#include <set>

#include "mrs/error.hh"

namespace mrs::atlas {

namespace {

// One array per entry, one string per row, entries separated by spaces.
// Coordinates are integer-linear in the symbols p, x, y, a, b, c, d.
using Literal = std::vector<std::vector<std::string_view>>;

const Literal kBase322 = {
    {
        "(1,0,0) (0,1,0) (1,0,1) (1,1,1)",
        "(0,1,1) (2,0,0) (2,0,1) (2,1,0)",
        "(2,1,1) (1,1,0) (0,0,0) (0,0,1)",
    },
};

const Literal kP24Head = {
    {
        "(1,0) (0,3) (p-1,0) (p,1)",
        "(p-1,1) (p,3) (1,3) (0,1)",
        "(p,2) (p+2,3) (0,2) (2p-2,1)",
        "(2,3) (2p-2,3) (2p-1,1) (1,1)",
        "(2p-2,2) (0,0) (p+1,2) (p+1,0)",
    },
    {
        "(2,0) (p-2,0) (2p-1,3) (p+1,1)",
        "(p-1,2) (p+2,0) (p-2,3) (p+1,3)",
        "(1,2) (2p-1,2) (p+2,2) (p-2,2)",
        "(p,0) (2p-1,0) (p-1,3) (2,1)",
        "(2p-2,0) (2,2) (p+2,1) (p-2,1)",
    },
};

const Literal kP24PairBlock = {
    {
        "(x,0) (-x,2) (x,1) (-x,1)",
        "(-x,0) (x,2) (-x,3) (x,3)",
    },
};

const Literal kP28Small = {
    {
        "(0,1) (0,3) (1,1) (5,3)",
        "(0,2) (0,6) (3,1) (3,7)",
        "(0,5) (0,7) (2,6) (4,6)",
    },
    {
        "(1,2) (3,2) (5,1) (3,3)",
        "(1,7) (2,1) (5,5) (4,3)",
        "(4,7) (1,5) (2,2) (5,2)",
    },
    {
        "(1,3) (4,1) (5,7) (2,5)",
        "(2,7) (4,5) (5,6) (1,6)",
        "(3,6) (4,2) (2,3) (3,5)",
    },
};

const Literal kP28Head = {
    {
        "(p,2) (0,2) (0,7) (p,5)",
        "(p+2,3) (p-2,2) (p+1,1) (p-1,2)",
        "(1,1) (1,3) (p-2,5) (p,7)",
        "(2p-2,3) (p+1,6) (2,2) (p-1,5)",
        "(2p-1,7) (0,3) (2p-1,1) (2,5)",
    },
    {
        "(0,5) (p,3) (2p-2,1) (p+2,7)",
        "(p-1,6) (0,6) (1,6) (p,6)",
        "(2,7) (p,1) (0,1) (p-2,7)",
        "(p+1,7) (p-1,1) (2,6) (2p-2,2)",
        "(2p-2,7) (p+1,5) (2p-1,2) (p+2,2)",
    },
    {
        "(p+1,3) (2p-1,3) (2,1) (p-2,1)",
        "(2,3) (p-2,3) (2p-2,5) (p+2,5)",
        "(p-1,7) (p+2,1) (1,2) (2p-2,6)",
        "(2p-1,5) (p+2,6) (p-2,6) (1,7)",
        "(2p-1,6) (p-1,3) (p+1,2) (1,5)",
    },
};

const Literal kP28QuadBlocks = {
    {
        "(x,1) (-x,1) (y,7) (-y,7)",
        "(-x,7) (x,7) (-y,1) (y,1)",
    },
    {
        "(x,2) (-x,2) (y,6) (-y,6)",
        "(-x,6) (x,6) (-y,2) (y,2)",
    },
    {
        "(x,3) (-x,3) (y,5) (-y,5)",
        "(-x,5) (x,5) (-y,3) (y,3)",
    },
};

const Literal kP48Small = {
    {
        "(2,2) (9,6) (7,2) (6,6)",
        "(3,5) (11,1) (1,3) (9,7)",
        "(7,1) (4,1) (4,3) (9,3)",
    },
    {
        "(0,5) (1,5) (7,7) (4,7)",
        "(1,6) (2,1) (6,3) (3,6)",
        "(11,5) (9,2) (11,6) (5,3)",
    },
    {
        "(9,1) (7,3) (10,1) (10,3)",
        "(8,1) (5,7) (9,5) (2,3)",
        "(7,6) (0,6) (5,2) (0,2)",
    },
    {
        "(5,5) (11,3) (2,7) (6,1)",
        "(5,6) (10,2) (10,6) (11,2)",
        "(2,5) (3,3) (0,3) (7,5)",
    },
    {
        "(1,1) (2,6) (3,2) (6,7)",
        "(1,2) (6,5) (11,7) (6,2)",
        "(10,5) (4,5) (10,7) (0,7)",
    },
    {
        "(8,6) (4,2) (4,6) (8,2)",
        "(8,3) (8,5) (5,1) (3,7)",
        "(8,7) (0,1) (3,1) (1,7)",
    },
};

const Literal kP48Head = {
    {
        "(2p-1,1) (3p-2,3) (3p+1,2) (2,2)",
        "(2p-2,5) (p-1,7) (3p+2,5) (2p+1,7)",
        "(0,5) (2p+1,6) (2p-1,2) (0,3)",
        "(p+1,6) (2,3) (p-2,2) (2p-1,5)",
        "(3p+2,7) (2p,5) (3p,5) (4p-2,7)",
    },
    {
        "(4p-2,2) (p+2,2) (p+2,5) (2p-2,7)",
        "(2,6) (3p-2,2) (p+1,7) (4p-1,1)",
        "(2p,7) (p-2,3) (p,1) (2,5)",
        "(2p,2) (3p+1,6) (3p-1,2) (0,6)",
        "(0,7) (1,3) (2p-2,1) (2p+1,5)",
    },
    {
        "(4p-2,5) (p+2,1) (2p-2,3) (p+2,7)",
        "(4p-2,6) (2,7) (p-1,2) (3p+1,1)",
        "(1,7) (p-1,6) (2p,6) (p,5)",
        "(p+1,5) (p-1,3) (2p+1,2) (4p-1,6)",
        "(3p+2,1) (p-2,7) (p+2,3) (3p-2,5)",
    },
    {
        "(2p+2,2) (3p-2,6) (3p,6) (0,2)",
        "(3p+2,6) (p-1,1) (3p-1,7) (p,2)",
        "(2p,1) (3p-1,3) (1,1) (3p,3)",
        "(3p-2,1) (2p+2,3) (3p+1,5) (4p-1,7)",
        "(2p-2,6) (3p+2,3) (3p-1,5) (1,2)",
    },
    {
        "(0,1) (4p-2,3) (2p+2,1) (2p,3)",
        "(p+2,6) (p-2,5) (3p-1,6) (3p+1,7)",
        "(p-2,1) (p+1,3) (p+1,1) (p,3)",
        "(1,5) (1,6) (3p-2,7) (p,6)",
        "(2p-1,3) (2p+2,7) (3p,1) (p-1,5)",
    },
    {
        "(p-2,6) (2p+2,6) (4p-1,2) (p+1,2)",
        "(2p+2,5) (2p-1,6) (2p-2,2) (2p+1,3)",
        "(4p-1,5) (3p,2) (3p+2,2) (2p-1,7)",
        "(2p+1,1) (4p-1,3) (3p-1,1) (3p+1,3)",
        "(3p,7) (p,7) (2,1) (4p-2,1)",
    },
};

const Literal kP48OctBlocks = {
    {
        "(a,1) (-a,1) (b,7) (-b,7)",
        "(-a,7) (a,7) (-b,1) (b,1)",
    },
    {
        "(a,2) (-a,2) (b,6) (-b,6)",
        "(-a,6) (a,6) (-b,2) (b,2)",
    },
    {
        "(a,3) (-a,3) (b,5) (-b,5)",
        "(-a,5) (a,5) (-b,3) (b,3)",
    },
    {
        "(c,1) (-c,1) (d,7) (-d,7)",
        "(-c,7) (c,7) (-d,1) (d,1)",
    },
    {
        "(c,2) (-c,2) (d,6) (-d,6)",
        "(-c,6) (c,6) (-d,2) (d,2)",
    },
    {
        "(c,3) (-c,3) (d,5) (-d,5)",
        "(-c,5) (c,5) (-d,3) (d,3)",
    },
};

const Literal kP88Head = {
    {
        "(0,3,3) (0,3,5) (0,5,3) (0,5,5)",
        "(1,6,6) (1,6,2) (p-1,2,6) (p-1,2,2)",
        "(p-1,7,7) (p-1,7,1) (1,1,7) (1,1,1)",
    },
    {
        "(0,3,2) (0,3,6) (0,5,2) (0,5,6)",
        "(1,6,1) (1,6,7) (p-1,2,1) (p-1,2,7)",
        "(p-1,7,5) (p-1,7,3) (1,1,5) (1,1,3)",
    },
    {
        "(0,3,1) (0,3,7) (0,5,1) (0,5,7)",
        "(1,6,5) (1,6,3) (p-1,2,5) (p-1,2,3)",
        "(p-1,7,2) (p-1,7,6) (1,1,2) (1,1,6)",
    },
    {
        "(0,2,3) (0,2,5) (0,6,3) (0,6,5)",
        "(p-1,1,6) (p-1,1,2) (1,7,6) (1,7,2)",
        "(1,5,7) (1,5,1) (p-1,3,7) (p-1,3,1)",
    },
    {
        "(0,2,2) (0,2,6) (0,6,2) (0,6,6)",
        "(p-1,1,1) (p-1,1,7) (1,7,1) (1,7,7)",
        "(1,5,5) (1,5,3) (p-1,3,5) (p-1,3,3)",
    },
    {
        "(0,2,1) (0,2,7) (0,6,1) (0,6,7)",
        "(p-1,1,5) (p-1,1,3) (1,7,5) (1,7,3)",
        "(1,5,2) (1,5,6) (p-1,3,2) (p-1,3,6)",
    },
    {
        "(0,1,3) (0,1,5) (0,7,3) (0,7,5)",
        "(p-1,5,6) (p-1,5,2) (1,3,6) (1,3,2)",
        "(1,2,7) (1,2,1) (p-1,6,7) (p-1,6,1)",
    },
    {
        "(0,1,2) (0,1,6) (0,7,2) (0,7,6)",
        "(p-1,5,1) (p-1,5,7) (1,3,1) (1,3,7)",
        "(1,2,5) (1,2,3) (p-1,6,5) (p-1,6,3)",
    },
    {
        "(0,1,1) (0,1,7) (0,7,1) (0,7,7)",
        "(p-1,5,5) (p-1,5,3) (1,3,5) (1,3,3)",
        "(1,2,2) (1,2,6) (p-1,6,2) (p-1,6,6)",
    },
};

const Literal kP88PairBlocks = {
    {
        "(x,1,1) (x,7,7) (-x,1,7) (-x,7,1)",
        "(-x,7,7) (-x,1,1) (x,7,1) (x,1,7)",
    },
    {
        "(x,1,2) (x,7,6) (-x,1,6) (-x,7,2)",
        "(-x,7,6) (-x,1,2) (x,7,2) (x,1,6)",
    },
    {
        "(x,1,3) (x,7,5) (-x,1,5) (-x,7,3)",
        "(-x,7,5) (-x,1,3) (x,7,3) (x,1,5)",
    },
    {
        "(x,2,1) (x,6,7) (-x,2,7) (-x,6,1)",
        "(-x,6,7) (-x,2,1) (x,6,1) (x,2,7)",
    },
    {
        "(x,2,2) (x,6,6) (-x,2,6) (-x,6,2)",
        "(-x,6,6) (-x,2,2) (x,6,2) (x,2,6)",
    },
    {
        "(x,2,3) (x,6,5) (-x,2,5) (-x,6,3)",
        "(-x,6,5) (-x,2,3) (x,6,3) (x,2,5)",
    },
    {
        "(x,3,1) (x,5,7) (-x,3,7) (-x,5,1)",
        "(-x,5,7) (-x,3,1) (x,5,1) (x,3,7)",
    },
    {
        "(x,3,2) (x,5,6) (-x,3,6) (-x,5,2)",
        "(-x,5,6) (-x,3,2) (x,5,2) (x,3,6)",
    },
    {
        "(x,3,3) (x,5,5) (-x,3,5) (-x,5,3)",
        "(-x,5,5) (-x,3,3) (x,5,3) (x,3,5)",
    },
};



std::int64_t evaluate_term_list(std::string_view s, const std::map<char, std::int64_t>& symbols) {
  std::int64_t total = 0;
  std::size_t i = 0;
  if (s.empty()) throw ParseError("empty coordinate expression");
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw ParseError("bad coordinate expression '" + std::string(s) + "'");
    }
    std::int64_t coeff = 1;
    bool have_digits = false;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      coeff = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) coeff = coeff * 10 + (s[i++] - '0');
      have_digits = true;
    }
    std::int64_t value = coeff;
    if (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
      auto it = symbols.find(s[i]);
      if (it == symbols.end()) throw ParseError(std::string("unbound symbol '") + s[i] + "'");
      value = coeff * it->second;
      ++i;
    } else if (!have_digits) {
      throw ParseError("bad coordinate expression '" + std::string(s) + "'");
    }
    total += sign * value;
  }
  return total;
}

std::vector<std::string_view> split_entries(std::string_view row) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < row.size()) {
    if (row[i] == ' ') {
      ++i;
      continue;
    }
    std::size_t close = row.find(')', i);
    if (row[i] != '(' || close == std::string_view::npos) throw ParseError("bad literal row '" + std::string(row) + "'");
    out.push_back(row.substr(i, close - i + 1));
    i = close + 1;
  }
  return out;
}

std::vector<RectArray> instantiate(const Literal& lit, const Group& g, const std::map<char, std::int64_t>& symbols) {
  std::vector<RectArray> out;
  for (const auto& rows : lit) {
    std::vector<Element> cells;
    int cols = -1;
    for (auto row : rows) {
      auto entries = split_entries(row);
      if (cols >= 0 && static_cast<int>(entries.size()) != cols) throw DimensionError("ragged literal array");
      cols = static_cast<int>(entries.size());
      for (auto e : entries) cells.push_back(g.reduce(evaluate_entry(e, symbols)));
    }
    out.emplace_back(static_cast<int>(rows.size()), cols, std::move(cells));
  }
  return out;
}

/// Appends block k of `blocks` below array k, for every k.
void append_blocks(std::vector<RectArray>& arrays, const std::vector<RectArray>& blocks) {
  for (std::size_t k = 0; k < arrays.size(); ++k) {
    RectArray& dst = arrays[k];
    const RectArray& src = blocks[k];
    std::vector<Element> cells = dst.cells();
    cells.insert(cells.end(), src.cells().begin(), src.cells().end());
    dst = RectArray(dst.rows() + src.rows(), dst.cols(), std::move(cells));
  }
}

void require_odd_prime(int p, int minimum, const char* what) {
  if (p < minimum || !is_prime(p) || p % 2 == 0)
    throw PreconditionError(std::string(what) + ": p = " + std::to_string(p) + " must be an odd prime >= " +
                            std::to_string(minimum));
}

RectSet zero_sum_set(Group g, std::vector<RectArray> arrays) {
  RectSet s;
  s.a = arrays.front().rows();
  s.b = arrays.front().cols();
  s.gamma = g.zero();
  s.delta = g.zero();
  s.group = std::move(g);
  s.arrays = std::move(arrays);
  return s;
}

HoleSpec second_coordinate_hole(const Group& g) {
  HoleSpec hole;
  hole.subgroups.push_back(Embedding::from_images(g, {Element{1, 0}, Element{0, 4}}));
  return hole;
}

std::vector<std::int64_t> excluded_residues(std::int64_t modulus, std::initializer_list<std::int64_t> raw) {
  std::set<std::int64_t> out;
  for (auto r : raw) out.insert(mod(r, modulus));
  return {out.begin(), out.end()};
}

}  // namespace

std::vector<std::int64_t> evaluate_entry(std::string_view text, const std::map<char, std::int64_t>& symbols) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    throw ParseError("literal entry '" + std::string(text) + "' is not parenthesised");
  std::vector<std::int64_t> coords;
  std::string_view body = text.substr(1, text.size() - 2);
  std::size_t start = 0;
  while (true) {
    std::size_t comma = body.find(',', start);
    coords.push_back(evaluate_term_list(body.substr(start, comma - start), symbols));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return coords;
}

FillerScheme filler_p_2_4(std::int64_t p) {
  FillerScheme s{FillerKind::pairs, 2 * p, excluded_residues(2 * p, {0, 1, 2, p - 2, p - 1, p, p + 1, p + 2, -2, -1}), {}};
  for (std::int64_t x = 3; x <= p - 3; ++x) s.blocks.push_back({x, 2 * p - x});
  return s;
}

FillerScheme filler_p_2_8(std::int64_t p) {
  FillerScheme s{FillerKind::quadruples, 2 * p,
                 excluded_residues(2 * p, {0, 1, 2, p - 2, p - 1, p, p + 1, p + 2, -2, -1}), {}};
  for (std::int64_t x = 3; x <= p - 4; x += 2) s.blocks.push_back({x, x + 1, 2 * p - x, 2 * p - x - 1});
  return s;
}

FillerScheme filler_p_4_8(std::int64_t p) {
  const std::int64_t n = 4 * p;
  FillerScheme s{FillerKind::octuples, n,
                 excluded_residues(n, {0, 1, 2, p - 2, p - 1, p, p + 1, p + 2, 2 * p - 2, 2 * p - 1, 2 * p, 2 * p + 1,
                                       2 * p + 2, -p - 2, -p - 1, -p, -p + 1, -p + 2, -2, -1}),
                 {}};
  for (std::int64_t a = 3; a <= p - 4; a += 2) {
    std::int64_t b = a + 1, c = p + a, d = c + 1;
    s.blocks.push_back({a, b, c, d, n - a, n - b, n - c, n - d});
  }
  return s;
}

FillerScheme filler_p_8_8(std::int64_t p) {
  FillerScheme s{FillerKind::pairs, p, excluded_residues(p, {0, 1, -1}), {}};
  for (std::int64_t x = 2; x <= (p - 1) / 2; ++x) s.blocks.push_back({x, p - x});
  return s;
}

bool filler_is_partition(const FillerScheme& scheme) {
  const std::int64_t n = scheme.modulus;
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (auto r : scheme.excluded) {
    if (r < 0 || r >= n) return false;
    ++seen[static_cast<std::size_t>(r)];
  }
  for (const auto& block : scheme.blocks) {
    std::set<std::int64_t> members(block.begin(), block.end());
    if (members.size() != block.size()) return false;
    for (auto r : block) {
      if (r < 0 || r >= n || !members.count(mod(-r, n))) return false;
      ++seen[static_cast<std::size_t>(r)];
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

CpPattern c_pattern(int p) {
  if (p < 3 || p % 2 == 0) throw PreconditionError("c_pattern: p = " + std::to_string(p) + " must be odd and >= 3");
  static constexpr std::array<std::array<int, 6>, 3> c3{{{3, -3, 2, -2, 1, -1}, {-2, 2, 1, -1, -3, 3}, {-1, 1, -3, 3, 2, -2}}};
  static constexpr std::array<std::array<int, 6>, 2> c2{{{3, -3, 2, -2, 1, -1}, {-3, 3, -2, 2, -1, 1}}};
  CpPattern c;
  c.p = p;
  c.grid.assign(c3.begin(), c3.end());
  for (int k = 0; k < (p - 3) / 2; ++k) c.grid.insert(c.grid.end(), c2.begin(), c2.end());
  return c;
}

bool c_pattern_invariants_hold(const CpPattern& c) {
  if (static_cast<int>(c.grid.size()) != c.p) return false;
  std::array<int, 6> col{};
  for (const auto& row : c.grid) {
    std::array<int, 6> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 6>{-3, -2, -1, 1, 2, 3}) return false;
    for (int l = 0; l < 6; l += 2)
      if (row[static_cast<std::size_t>(l)] + row[static_cast<std::size_t>(l + 1)] != 0) return false;
    for (std::size_t l = 0; l < 6; ++l) col[l] += row[l];
  }
  return std::all_of(col.begin(), col.end(), [](int s) { return s == 0; });
}

RectSet base_3_2_2() { return zero_sum_set(Group{3, 2, 2}, instantiate(kBase322, Group{3, 2, 2}, {})); }

RectSet family_p_2_4(int p) {
  require_odd_prime(p, 5, "family_p_2_4");
  Group g{2 * p, 4};
  auto arrays = instantiate(kP24Head, g, {{'p', p}});
  auto filler = filler_p_2_4(p);
  for (std::size_t i = 0; i < filler.blocks.size(); ++i) {
    auto block = instantiate(kP24PairBlock, g, {{'x', filler.blocks[i][0]}});
    RectArray& dst = arrays[i % 2];
    std::vector<Element> cells = dst.cells();
    cells.insert(cells.end(), block[0].cells().begin(), block[0].cells().end());
    dst = RectArray(dst.rows() + block[0].rows(), dst.cols(), std::move(cells));
  }
  return zero_sum_set(std::move(g), std::move(arrays));
}

RectSet imrs_p_2_8(int p) {
  require_odd_prime(p, 3, "imrs_p_2_8");
  Group g{2 * p, 8};
  std::vector<RectArray> arrays;
  if (p == 3) {
    arrays = instantiate(kP28Small, g, {});
  } else {
    arrays = instantiate(kP28Head, g, {{'p', p}});
    for (const auto& q : filler_p_2_8(p).blocks) append_blocks(arrays, instantiate(kP28QuadBlocks, g, {{'x', q[0]}, {'y', q[1]}}));
  }
  RectSet s = zero_sum_set(g, std::move(arrays));
  s.hole = second_coordinate_hole(g);
  return s;
}

RectSet imrs_p_4_8(int p) {
  require_odd_prime(p, 3, "imrs_p_4_8");
  Group g{4 * p, 8};
  std::vector<RectArray> arrays;
  if (p == 3) {
    arrays = instantiate(kP48Small, g, {});
  } else {
    arrays = instantiate(kP48Head, g, {{'p', p}});
    for (const auto& o : filler_p_4_8(p).blocks)
      append_blocks(arrays, instantiate(kP48OctBlocks, g, {{'a', o[0]}, {'b', o[1]}, {'c', o[2]}, {'d', o[3]}}));
  }
  RectSet s = zero_sum_set(g, std::move(arrays));
  s.hole = second_coordinate_hole(g);
  return s;
}

RectSet imrs_p_8_8_complement(int p) {
  require_odd_prime(p, 3, "imrs_p_8_8_complement");
  Group g{p, 8, 8};
  auto arrays = instantiate(kP88Head, g, {{'p', p}});
  for (const auto& pair : filler_p_8_8(p).blocks) append_blocks(arrays, instantiate(kP88PairBlocks, g, {{'x', pair[0]}}));
  RectSet s = zero_sum_set(g, std::move(arrays));
  s.hole.subgroups.push_back(Embedding::from_images(g, {Element{1, 0, 0}, Element{0, 4, 0}, Element{0, 0, 1}}));
  s.hole.subgroups.push_back(Embedding::from_images(g, {Element{1, 0, 0}, Element{0, 1, 0}, Element{0, 0, 4}}));
  return s;
}

}  // namespace mrs::atlas

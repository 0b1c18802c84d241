#include "mrs/search.hh"

#include <algorithm>
#include <map>
#include <set>

#include "mrs/atlas.hh"
#include "mrs/error.hh"

namespace mrs {

namespace {

/// Depth-first filler over element indices. One instance per (gamma, delta).
class Searcher {
 public:
  Searcher(const Group& g, int a, int b, int c, const std::vector<char>& allowed, BudgetMeter& meter)
      : n_(static_cast<int>(g.order())), a_(a), b_(b), c_(c), allowed_(allowed), meter_(meter) {
    add_.resize(static_cast<std::size_t>(n_) * n_);
    sub_.resize(static_cast<std::size_t>(n_) * n_);
    auto all = g.enumerate();
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y) {
        add_[idx(x, y)] = static_cast<int>(g.index_of(g.add(all[x], all[y])));
        sub_[idx(x, y)] = static_cast<int>(g.index_of(g.sub(all[x], all[y])));
      }
  }

  bool run(int gamma, int delta) {
    gamma_ = gamma;
    delta_ = delta;
    total_ = a_ * b_ * c_;
    cells_.assign(static_cast<std::size_t>(total_), -1);
    used_.assign(static_cast<std::size_t>(n_), 0);
    row_sum_.assign(static_cast<std::size_t>(a_ * c_), 0);
    col_sum_.assign(static_cast<std::size_t>(b_ * c_), 0);
    return step(0);
  }

  const std::vector<int>& cells() const { return cells_; }

 private:
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(x) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(y); }

  bool place(int t, int k, int i, int j, int v) {
    auto& rs = row_sum_[static_cast<std::size_t>(k * a_ + i)];
    auto& cs = col_sum_[static_cast<std::size_t>(k * b_ + j)];
    const int old_rs = rs, old_cs = cs;
    used_[static_cast<std::size_t>(v)] = 1;
    cells_[static_cast<std::size_t>(t)] = v;
    rs = add_[idx(rs, v)];
    cs = add_[idx(cs, v)];
    if (step(t + 1)) return true;
    rs = old_rs;
    cs = old_cs;
    used_[static_cast<std::size_t>(v)] = 0;
    cells_[static_cast<std::size_t>(t)] = -1;
    return false;
  }

  bool free_value(int v) const { return allowed_[static_cast<std::size_t>(v)] && !used_[static_cast<std::size_t>(v)]; }

  bool step(int t) {
    meter_.tick();
    if (t == total_) return true;
    const int per = a_ * b_;
    const int k = t / per, rem = t % per, i = rem / b_, j = rem % b_;
    const int rs = row_sum_[static_cast<std::size_t>(k * a_ + i)];
    const int cs = col_sum_[static_cast<std::size_t>(k * b_ + j)];
    // Lower bound from the normal form: first row and first column increase.
    int above = -1;
    if (i == 0 && j > 0) above = cells_[static_cast<std::size_t>(t - 1)];
    if (j == 0 && i > 0) above = cells_[static_cast<std::size_t>(t - b_)];

    if (j == b_ - 1 || i == a_ - 1) {
      int v = j == b_ - 1 ? sub_[idx(gamma_, rs)] : sub_[idx(delta_, cs)];
      if (j == b_ - 1 && i == a_ - 1 && v != sub_[idx(delta_, cs)]) return false;
      if (v <= above || !free_value(v)) return false;
      return place(t, k, i, j, v);
    }
    if (i == 0 && j == 0) {
      for (int v = 0; v < n_; ++v)
        if (free_value(v)) return place(t, k, i, j, v);
      return false;
    }
    for (int v = above + 1; v < n_; ++v)
      if (free_value(v) && place(t, k, i, j, v)) return true;
    return false;
  }

  int n_, a_, b_, c_;
  const std::vector<char>& allowed_;
  BudgetMeter& meter_;
  std::vector<int> add_, sub_;
  int gamma_ = 0, delta_ = 0, total_ = 0;
  std::vector<int> cells_;
  std::vector<char> used_;
  std::vector<int> row_sum_, col_sum_;
};

std::vector<char> allowed_mask(const SearchProblem& p) {
  const auto n = static_cast<std::size_t>(p.group.order());
  std::vector<char> allowed(n, p.universe ? 0 : 1);
  if (p.universe) {
    for (const auto& x : *p.universe) {
      if (!p.group.contains(x)) throw DimensionError("universe element " + to_string(x) + " not in " + p.group.to_string());
      allowed[static_cast<std::size_t>(p.group.index_of(x))] = 1;
    }
  } else {
    for (const auto& x : hole_elements(p.hole)) allowed[static_cast<std::size_t>(p.group.index_of(x))] = 0;
  }
  return allowed;
}

/// Admissible (gamma, delta) index pairs in lexicographic order; with
/// `translation`, only the smallest pair of each translation orbit.
std::vector<std::pair<int, int>> sum_pairs(const SearchProblem& p, const std::vector<char>& allowed, bool translation) {
  const Group& g = p.group;
  const int n = static_cast<int>(g.order());
  auto all = g.enumerate();
  Element total = g.zero();
  for (int v = 0; v < n; ++v)
    if (allowed[static_cast<std::size_t>(v)]) total = g.add(total, all[static_cast<std::size_t>(v)]);
  std::vector<int> gammas, deltas;
  for (int v = 0; v < n; ++v) {
    const Element& x = all[static_cast<std::size_t>(v)];
    bool gamma_ok = p.zero_sum ? v == 0 : (!p.gamma || *p.gamma == x);
    bool delta_ok = p.zero_sum ? v == 0 : (!p.delta || *p.delta == x);
    if (gamma_ok && g.scalar_mul(static_cast<std::int64_t>(p.c) * p.a, x) == total) gammas.push_back(v);
    if (delta_ok && g.scalar_mul(static_cast<std::int64_t>(p.c) * p.b, x) == total) deltas.push_back(v);
  }
  std::vector<std::pair<int, int>> out;
  for (int gv : gammas)
    for (int dv : deltas) {
      if (translation) {
        bool minimal = true;
        for (int s = 1; s < n && minimal; ++s) {
          const Element& shift = all[static_cast<std::size_t>(s)];
          int g2 = static_cast<int>(g.index_of(g.add(all[static_cast<std::size_t>(gv)], g.scalar_mul(p.b, shift))));
          int d2 = static_cast<int>(g.index_of(g.add(all[static_cast<std::size_t>(dv)], g.scalar_mul(p.a, shift))));
          if (std::pair{g2, d2} < std::pair{gv, dv}) minimal = false;
        }
        if (!minimal) continue;
      }
      out.emplace_back(gv, dv);
    }
  return out;
}

RectSet assemble(const SearchProblem& p, const std::vector<int>& cells, int gamma, int delta) {
  RectSet s;
  s.group = p.group;
  s.a = p.a;
  s.b = p.b;
  s.gamma = p.group.element_at(gamma);
  s.delta = p.group.element_at(delta);
  s.hole = p.hole;
  const int per = p.a * p.b;
  for (int k = 0; k < p.c; ++k) {
    std::vector<Element> entries;
    for (int t = 0; t < per; ++t) entries.push_back(p.group.element_at(cells[static_cast<std::size_t>(k * per + t)]));
    s.arrays.emplace_back(p.a, p.b, std::move(entries));
  }
  return s;
}

}  // namespace

std::optional<RectSet> synthesize(const SearchProblem& p, SearchStats* stats) {
  if (p.a < 2 || p.b < 2 || p.c < 1) throw PreconditionError("synthesize: need a, b >= 2 and c >= 1");
  if (p.universe && !p.hole.empty()) throw PreconditionError("synthesize: give either a universe or a hole");
  const auto allowed = allowed_mask(p);
  const auto cover = std::count(allowed.begin(), allowed.end(), 1);
  if (static_cast<std::int64_t>(p.a) * p.b * p.c != cover)
    throw PreconditionError("synthesize: " + std::to_string(p.a) + "x" + std::to_string(p.b) + "x" + std::to_string(p.c) +
                            " cells cannot cover " + std::to_string(cover) + " elements");
  const bool translation = !p.universe && p.hole.empty() && !p.zero_sum && !p.gamma && !p.delta;
  BudgetMeter meter(p.budget, "search over " + p.group.to_string());
  Searcher searcher(p.group, p.a, p.b, p.c, allowed, meter);
  SearchStats local;
  std::optional<RectSet> found;
  for (auto [gamma, delta] : sum_pairs(p, allowed, translation)) {
    ++local.sum_pairs;
    bool ok = false;
    try {
      ok = searcher.run(gamma, delta);
    } catch (const BudgetExhausted&) {
      local.nodes = meter.nodes();
      if (stats) *stats = local;
      throw;
    }
    if (ok) {
      found = assemble(p, searcher.cells(), gamma, delta);
      break;
    }
  }
  local.nodes = meter.nodes();
  if (stats) *stats = local;
  if (found) {
    if (p.universe) {
      if (!covers_universe(*found, *p.universe)) throw VerificationFailed("synthesize: result does not cover its universe");
    } else {
      require_verified(*found, "synthesize", {.zero_sum = p.zero_sum});
    }
  }
  return found;
}

bool covers_universe(const RectSet& s, const std::vector<Element>& universe) {
  std::vector<Element> seen;
  for (const auto& arr : s.arrays) {
    if (arr.rows() != s.a || arr.cols() != s.b) return false;
    seen.insert(seen.end(), arr.cells().begin(), arr.cells().end());
    for (int i = 0; i < s.a; ++i) {
      Element sum = s.group.zero();
      for (int j = 0; j < s.b; ++j) sum = s.group.add(sum, arr.at(i, j));
      if (sum != s.gamma) return false;
    }
    for (int j = 0; j < s.b; ++j) {
      Element sum = s.group.zero();
      for (int i = 0; i < s.a; ++i) sum = s.group.add(sum, arr.at(i, j));
      if (sum != s.delta) return false;
    }
  }
  std::vector<Element> want = universe;
  std::sort(seen.begin(), seen.end());
  std::sort(want.begin(), want.end());
  return seen == want;
}

OracleResult run_oracle(const Group& g, int a, int b, int c, std::int64_t cap, const Budget& budget) {
  if (a < 2 || b < 2 || c < 1) throw PreconditionError("oracle: need a, b > 1 and c >= 1");
  if (static_cast<std::int64_t>(a) * b * c != g.order())
    throw PreconditionError("oracle: a*b*c = " + std::to_string(static_cast<std::int64_t>(a) * b * c) +
                            " differs from |G| = " + std::to_string(g.order()));
  if (g.order() > cap)
    throw CapExceeded("oracle: |G| = " + std::to_string(g.order()) + " exceeds the exhaustive cap " + std::to_string(cap));
  SearchProblem p;
  p.group = g;
  p.a = a;
  p.b = b;
  p.c = c;
  p.budget = budget;
  OracleResult result;
  result.witness = synthesize(p, &result.stats);
  result.exists = result.witness.has_value();
  return result;
}

bool prove_nonexistence(const Group& g, int a, int b, int c, std::int64_t cap) { return !run_oracle(g, a, b, c, cap).exists; }

// ---------------------------------------------------------------------------
// Scalable bases

namespace {

// Modulus for header and gadget searches: larger than any partial sum of at
// most five entries from {-2..2}, so zero mod it means zero over Z.
constexpr std::int64_t kSymbolicModulus = 23;

Group s2_of(ScalableKind kind) { return kind == ScalableKind::p22 ? Group{2, 2} : Group{2, 2, 2}; }

int arrays_of(ScalableKind kind) { return kind == ScalableKind::p22 ? 1 : 2; }

Element with_first(std::int64_t first, const Element& rest) {
  std::vector<std::int64_t> raw{first};
  raw.insert(raw.end(), rest.coords.begin(), rest.coords.end());
  return Element(std::move(raw));
}

Group symbolic_group(const Group& s2) {
  std::vector<std::int64_t> f{kSymbolicModulus};
  f.insert(f.end(), s2.factors().begin(), s2.factors().end());
  return Group(f);
}

/// Searches blocks of `rows` x 4 over `firsts` x S_2 and returns them with
/// signed first coordinates.
std::optional<std::vector<RectArray>> search_blocks(ScalableKind kind, int rows, const std::vector<std::int64_t>& firsts,
                                                     const Budget& budget) {
  const Group s2 = s2_of(kind);
  SearchProblem p;
  p.group = symbolic_group(s2);
  p.a = rows;
  p.b = 4;
  p.c = arrays_of(kind);
  p.zero_sum = true;
  p.budget = budget;
  std::vector<Element> universe;
  for (auto r : firsts)
    for (const auto& h : s2.enumerate()) universe.push_back(with_first(mod(r, kSymbolicModulus), h));
  p.universe = universe;
  auto found = synthesize(p);
  if (!found) return std::nullopt;
  std::vector<RectArray> out;
  for (auto arr : found->arrays) {
    for (auto& x : arr.cells())
      if (2 * x[0] > kSymbolicModulus) x[0] -= kSymbolicModulus;
    out.push_back(std::move(arr));
  }
  return out;
}

std::vector<std::int64_t> symmetric_range(int k) {
  std::vector<std::int64_t> out;
  for (int r = -k; r <= k; ++r) out.push_back(r);
  return out;
}

/// Blocks over `firsts` x S_2 with integer-zero first-coordinate sums and
/// zero S_2 sums, covering the product exactly once.
bool blocks_sound(const std::vector<RectArray>& blocks, const Group& s2, int arrays, int rows,
                  const std::vector<std::int64_t>& firsts) {
  if (static_cast<int>(blocks.size()) != arrays) return false;
  std::vector<Element> seen;
  for (const auto& arr : blocks) {
    if (arr.rows() != rows || arr.cols() != 4) return false;
    auto rest = [&](const Element& x) {
      return Element(std::vector<std::int64_t>(x.coords.begin() + 1, x.coords.end()));
    };
    for (const auto& x : arr.cells()) {
      if (x.size() != s2.rank() + 1 || !s2.contains(rest(x))) return false;
      seen.push_back(x);
    }
    for (int i = 0; i < rows; ++i) {
      std::int64_t first = 0;
      Element sum = s2.zero();
      for (int j = 0; j < 4; ++j) {
        first += arr.at(i, j)[0];
        sum = s2.add(sum, rest(arr.at(i, j)));
      }
      if (first != 0 || sum != s2.zero()) return false;
    }
    for (int j = 0; j < 4; ++j) {
      std::int64_t first = 0;
      Element sum = s2.zero();
      for (int i = 0; i < rows; ++i) {
        first += arr.at(i, j)[0];
        sum = s2.add(sum, rest(arr.at(i, j)));
      }
      if (first != 0 || sum != s2.zero()) return false;
    }
  }
  std::vector<Element> want;
  for (auto r : firsts)
    for (const auto& h : s2.enumerate()) want.push_back(with_first(r, h));
  std::sort(seen.begin(), seen.end());
  std::sort(want.begin(), want.end());
  return seen == want;
}

nlohmann::json blocks_to_json(const std::vector<RectArray>& blocks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& arr : blocks) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < arr.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < arr.cols(); ++j) row.push_back(arr.at(i, j).coords);
      rows.push_back(std::move(row));
    }
    out.push_back(std::move(rows));
  }
  return out;
}

std::vector<RectArray> blocks_from_json(const nlohmann::json& j) {
  std::vector<RectArray> out;
  for (const auto& arr : j) {
    std::vector<Element> cells;
    int rows = 0, cols = 0;
    for (const auto& row : arr) {
      cols = 0;
      for (const auto& x : row) {
        cells.emplace_back(x.get<std::vector<std::int64_t>>());
        ++cols;
      }
      ++rows;
    }
    out.emplace_back(rows, cols, std::move(cells));
  }
  return out;
}

std::optional<ScalableScheme> load_scheme(ScalableKind kind, const Cache& cache) {
  auto j = cache.load("scalable-" + to_string(kind));
  if (!j) return std::nullopt;
  try {
    ScalableScheme s;
    s.kind = kind;
    s.s2 = s2_of(kind);
    s.arrays = arrays_of(kind);
    s.header_rows = j->at("header_rows").get<int>();
    s.header = blocks_from_json(j->at("header"));
    s.gadget = blocks_from_json(j->at("gadget"));
    if (scheme_is_sound(s)) return s;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(ScalableKind kind) { return kind == ScalableKind::p22 ? "p22" : "p222"; }

std::optional<std::vector<RectArray>> find_header(ScalableKind kind, int rows, const Budget& budget) {
  if (rows < 1 || rows % 2 == 0) throw PreconditionError("find_header: rows must be odd");
  return search_blocks(kind, rows, symmetric_range(rows / 2), budget);
}

bool scheme_is_sound(const ScalableScheme& s) {
  if (s.header_rows < 3 || s.header_rows % 2 == 0) return false;
  return blocks_sound(s.header, s.s2, s.arrays, s.header_rows, symmetric_range(s.header_rows / 2)) &&
         blocks_sound(s.gadget, s.s2, s.arrays, 2, {-1, 1});
}

ScalableScheme scalable_scheme(ScalableKind kind, const Budget& budget, const std::optional<Cache>& cache_in) {
  const Cache cache = cache_in ? *cache_in : default_cache();
  if (auto loaded = load_scheme(kind, cache)) return *loaded;
  ScalableScheme s;
  s.kind = kind;
  s.s2 = s2_of(kind);
  s.arrays = arrays_of(kind);
  for (int rows : {3, 5}) {
    if (auto header = find_header(kind, rows, budget)) {
      s.header_rows = rows;
      s.header = std::move(*header);
      break;
    }
  }
  if (s.header.empty()) throw BudgetExhausted("no header with at most 5 rows for " + to_string(kind));
  auto gadget = search_blocks(kind, 2, {-1, 1}, budget);
  if (!gadget) throw PreconditionError("no gadget exists for " + to_string(kind));
  s.gadget = std::move(*gadget);
  if (!scheme_is_sound(s)) throw VerificationFailed("scalable scheme for " + to_string(kind) + " is unsound");
  cache.store("scalable-" + to_string(kind),
              {{"kind", to_string(kind)}, {"header_rows", s.header_rows}, {"header", blocks_to_json(s.header)},
               {"gadget", blocks_to_json(s.gadget)}});
  return s;
}

RectSet synthesize_scalable_base(ScalableKind kind, int p, const Budget& budget, const std::optional<Cache>& cache) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw PreconditionError("synthesize_scalable_base: p = " + std::to_string(p) + " must be an odd prime");
  const Group s2 = s2_of(kind);
  std::vector<std::int64_t> factors{p};
  factors.insert(factors.end(), s2.factors().begin(), s2.factors().end());
  const Group g(factors);

  const ScalableScheme scheme = scalable_scheme(kind, budget, cache);
  if (p < scheme.header_rows) {
    if (kind == ScalableKind::p22 && p == 3) return atlas::base_3_2_2();
    SearchProblem problem;
    problem.group = g;
    problem.a = p;
    problem.b = 4;
    problem.c = scheme.arrays;
    problem.zero_sum = true;
    problem.budget = budget;
    auto found = synthesize(problem);
    if (!found) throw PreconditionError("no MRS* over " + g.to_string() + " of shape " + std::to_string(p) + "x4");
    return *found;
  }

  auto place = [&](const Element& x, std::int64_t scale) {
    std::vector<std::int64_t> raw = x.coords;
    raw[0] = scale * raw[0];
    return g.reduce(std::move(raw));
  };
  RectSet s;
  s.group = g;
  s.a = p;
  s.b = 4;
  s.gamma = g.zero();
  s.delta = g.zero();
  for (int k = 0; k < scheme.arrays; ++k) {
    std::vector<Element> cells;
    for (const auto& x : scheme.header[static_cast<std::size_t>(k)].cells()) cells.push_back(place(x, 1));
    for (int x = scheme.first_gadget(); x <= (p - 1) / 2; ++x)
      for (const auto& y : scheme.gadget[static_cast<std::size_t>(k)].cells()) cells.push_back(place(y, x));
    s.arrays.emplace_back(p, 4, std::move(cells));
  }
  require_verified(s, "synthesize_scalable_base", {.zero_sum = true});
  return s;
}

}  // namespace mrs

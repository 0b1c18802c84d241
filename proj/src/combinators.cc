#include "mrs/combinators.hh"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "mrs/atlas.hh"
#include "mrs/error.hh"
#include "mrs/json_io.hh"

namespace mrs {

namespace {

const VerifyOptions kZeroSum{.zero_sum = true};

void require_complete_zero_sum(const RectSet& s, const char* op, const char* role) {
  if (!s.is_zero_sum()) throw PreconditionError(std::string(op) + ": " + role + " is not zero-sum");
  if (!s.hole.empty()) throw PreconditionError(std::string(op) + ": " + role + " must not have a hole");
}

void require_same_shape(const RectSet& x, const RectSet& y, const char* op) {
  if (x.a != y.a || x.b != y.b)
    throw PreconditionError(std::string(op) + ": shape " + std::to_string(y.a) + "x" + std::to_string(y.b) +
                            " does not match " + std::to_string(x.a) + "x" + std::to_string(x.b));
}

/// Relabels `s` onto `source` if it is presented differently.
RectSet on_source(const RectSet& s, const Group& source, const char* op) {
  if (s.group == source) return s;
  if (!s.group.isomorphic_to(source))
    throw PreconditionError(std::string(op) + ": " + s.group.to_string() + " is not isomorphic to embedding source " +
                            source.to_string());
  return relabel(s, source);
}

std::vector<RectArray> embedded_arrays(const RectSet& s, const Embedding& emb) {
  std::vector<RectArray> out;
  for (const auto& arr : s.arrays) {
    std::vector<Element> cells;
    cells.reserve(arr.cells().size());
    for (const auto& x : arr.cells()) cells.push_back(emb.apply(x));
    out.emplace_back(arr.rows(), arr.cols(), std::move(cells));
  }
  return out;
}

std::vector<Element> sorted_image(const Embedding& emb) {
  auto img = emb.image();
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

RectSet complete_set(const RectSet& outer) {
  RectSet out;
  out.group = outer.group;
  out.a = outer.a;
  out.b = outer.b;
  out.gamma = outer.group.zero();
  out.delta = outer.group.zero();
  out.arrays = outer.arrays;
  return out;
}

}  // namespace

RectSet fill_hole(const RectSet& outer, const RectSet& inner_in, const Embedding& emb) {
  if (!outer.is_zero_sum()) throw PreconditionError("fill_hole: outer set is not zero-sum");
  require_complete_zero_sum(inner_in, "fill_hole", "inner set");
  require_same_shape(outer, inner_in, "fill_hole");
  if (!(emb.target() == outer.group)) throw PreconditionError("fill_hole: embedding does not target the outer group");
  if (!emb.is_injective()) throw PreconditionError("fill_hole: embedding is not injective");
  if (hole_elements(outer.hole) != sorted_image(emb))
    throw PreconditionError("fill_hole: outer hole differs from the embedded subgroup");
  RectSet inner = on_source(inner_in, emb.source(), "fill_hole");

  RectSet out = complete_set(outer);
  for (auto& arr : embedded_arrays(inner, emb)) out.arrays.push_back(std::move(arr));
  require_verified(out, "fill_hole", kZeroSum);
  return out;
}

RectSet fill_two_holes(const RectSet& outer, const RectSet& part1_in, const RectSet& part2_in, const Embedding& emb1,
                       const Embedding& emb2) {
  if (!outer.is_zero_sum() || !part1_in.is_zero_sum()) throw PreconditionError("fill_two_holes: inputs must be zero-sum");
  require_complete_zero_sum(part2_in, "fill_two_holes", "second part");
  require_same_shape(outer, part1_in, "fill_two_holes");
  require_same_shape(outer, part2_in, "fill_two_holes");
  if (!(emb1.target() == outer.group) || !(emb2.target() == outer.group))
    throw PreconditionError("fill_two_holes: embeddings must target the outer group");
  if (!emb1.is_injective() || !emb2.is_injective()) throw PreconditionError("fill_two_holes: embeddings must be injective");

  auto h1 = sorted_image(emb1);
  auto h2 = sorted_image(emb2);
  std::vector<Element> both, common;
  std::set_union(h1.begin(), h1.end(), h2.begin(), h2.end(), std::back_inserter(both));
  std::set_intersection(h1.begin(), h1.end(), h2.begin(), h2.end(), std::back_inserter(common));
  if (hole_elements(outer.hole) != both) throw PreconditionError("fill_two_holes: outer hole is not H1 u H2");

  RectSet part1 = on_source(part1_in, emb1.source(), "fill_two_holes");
  RectSet part2 = on_source(part2_in, emb2.source(), "fill_two_holes");
  std::vector<Element> part1_hole;
  for (const auto& x : hole_elements(part1.hole)) part1_hole.push_back(emb1.apply(x));
  std::sort(part1_hole.begin(), part1_hole.end());
  if (part1_hole != common) throw PreconditionError("fill_two_holes: first part's hole does not map onto H1 n H2");

  RectSet out = complete_set(outer);
  for (auto& arr : embedded_arrays(part1, emb1)) out.arrays.push_back(std::move(arr));
  for (auto& arr : embedded_arrays(part2, emb2)) out.arrays.push_back(std::move(arr));
  require_verified(out, "fill_two_holes", kZeroSum);
  return out;
}

RectSet double_2_2(const RectSet& s) {
  require_complete_zero_sum(s, "double_2_2", "input");
  if (s.b != 4 || s.a < 3 || s.a % 2 == 0)
    throw PreconditionError("double_2_2: shape must be p x 4 with p odd, got " + std::to_string(s.a) + "x" +
                            std::to_string(s.b));
  const auto& f = s.group.factors();
  const std::size_t r = f.size();
  if (r < 2 || f[r - 2] > 2 || f[r - 1] > 2)
    throw PreconditionError("double_2_2: the two trailing factors of " + s.group.to_string() + " must be Z1 or Z2");
  std::vector<std::int64_t> factors = f;
  factors[r - 2] *= 2;
  factors[r - 1] *= 2;
  Group g(factors);

  // Offsets z on the trailing pair: 0, (0,1), (1,0), (-1,-1).
  static constexpr std::array<std::array<int, 2>, 4> z{{{0, 0}, {0, 1}, {1, 0}, {-1, -1}}};
  // table[k][row class]: row class 0, 1, 2 for the first three rows, 3 for
  // the rest.
  static constexpr std::array<std::array<int, 4>, 4> three_mod_4{{{0, 0, 0, 0}, {1, 2, 3, 1}, {2, 3, 1, 2}, {3, 1, 2, 3}}};
  static constexpr std::array<std::array<int, 4>, 4> one_mod_4{{{2, 1, 3, 0}, {0, 2, 2, 2}, {1, 0, 1, 1}, {3, 3, 0, 3}}};
  const auto& table = s.a % 4 == 3 ? three_mod_4 : one_mod_4;

  RectSet out;
  out.group = g;
  out.a = s.a;
  out.b = s.b;
  out.gamma = g.zero();
  out.delta = g.zero();
  for (const auto& src : s.arrays) {
    for (std::size_t k = 0; k < 4; ++k) {
      RectArray arr(s.a, s.b, g.zero());
      for (int i = 0; i < s.a; ++i) {
        const auto& off = z[static_cast<std::size_t>(table[k][static_cast<std::size_t>(std::min(i, 3))])];
        for (int j = 0; j < s.b; ++j) {
          std::vector<std::int64_t> raw = src.at(i, j).coords;
          raw[r - 2] = 2 * raw[r - 2] + off[0];
          raw[r - 1] = 2 * raw[r - 1] + off[1];
          arr.at(i, j) = g.reduce(std::move(raw));
        }
      }
      out.arrays.push_back(std::move(arr));
    }
  }
  require_verified(out, "double_2_2", kZeroSum);
  return out;
}

Embedding expand_cp_hole(const Group& g) {
  std::vector<Element> images;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    Element e = g.zero();
    e[i] = i + 1 == g.rank() ? 4 % g.factors()[i] : 1 % g.factors()[i];
    images.push_back(std::move(e));
  }
  return Embedding::from_images(g, std::move(images));
}

RectSet expand_cp(const RectSet& s) {
  require_complete_zero_sum(s, "expand_cp", "input");
  if (s.b != 4 || s.a < 3 || s.a % 2 == 0)
    throw PreconditionError("expand_cp: shape must be p x 4 with p odd, got " + std::to_string(s.a) + "x" +
                            std::to_string(s.b));
  if (s.group.rank() == 0 || !is_power_of_two(s.group.factors().back()))
    throw PreconditionError("expand_cp: trailing factor of " + s.group.to_string() +
                            " must be a power of two (append Z1 for alpha = 0)");
  std::vector<std::int64_t> factors = s.group.factors();
  const std::size_t last = factors.size() - 1;
  factors[last] *= 8;
  Group g(factors);
  const atlas::CpPattern cp = atlas::c_pattern(s.a);
  // Which C_p column (0-based) feeds column j of output array k.
  static constexpr std::array<std::array<int, 4>, 6> columns{
      {{0, 1, 0, 1}, {1, 0, 1, 0}, {2, 3, 2, 3}, {3, 2, 3, 2}, {4, 5, 4, 5}, {5, 4, 5, 4}}};

  RectSet out;
  out.group = g;
  out.a = s.a;
  out.b = s.b;
  out.gamma = g.zero();
  out.delta = g.zero();
  for (const auto& src : s.arrays) {
    for (const auto& pattern : columns) {
      RectArray arr(s.a, s.b, g.zero());
      for (int i = 0; i < s.a; ++i)
        for (int j = 0; j < s.b; ++j) {
          std::vector<std::int64_t> raw = src.at(i, j).coords;
          raw[last] = 8 * raw[last] + cp.at(i, pattern[static_cast<std::size_t>(j)]);
          arr.at(i, j) = g.reduce(std::move(raw));
        }
      out.arrays.push_back(std::move(arr));
    }
  }
  out.hole.subgroups.push_back(expand_cp_hole(g));
  require_verified(out, "expand_cp", kZeroSum);
  return out;
}

// ---------------------------------------------------------------------------
// Shift plans

namespace {

/// Value domain of a plan: the list F plus the arithmetic used for sums.
struct Domain {
  LiftKind kind;
  Group group;
  std::int64_t t = 1;
  std::vector<Element> values;

  Element add(const Element& x, const Element& y) const {
    if (kind == LiftKind::direct_sum) return group.add(x, y);
    return Element{x[0] + y[0]};
  }
  Element neg(const Element& x) const {
    if (kind == LiftKind::direct_sum) return group.neg(x);
    return Element{-x[0]};
  }
  Element zero() const { return kind == LiftKind::direct_sum ? group.zero() : Element{0}; }
  bool contains(const Element& x) const {
    if (kind == LiftKind::direct_sum) return group.contains(x);
    return x.size() == 1 && 2 * std::abs(x[0]) < t;
  }
  std::int64_t index(const Element& x) const {
    return kind == LiftKind::direct_sum ? group.index_of(x) : x[0] + (t - 1) / 2;
  }
};

Domain domain_for(const LiftShiftPlan& plan) {
  Domain d{plan.kind, plan.group, plan.t, {}};
  if (plan.kind == LiftKind::direct_sum) {
    d.values = plan.group.enumerate();
  } else {
    for (std::int64_t r = -(plan.t - 1) / 2; r <= (plan.t - 1) / 2; ++r) d.values.push_back(Element{r});
  }
  return d;
}

/// A map F -> F given by the image of each value in Domain::values order.
using ValueMap = std::vector<Element>;

ValueMap negated(const Domain& d, const ValueMap& m) {
  ValueMap out;
  for (const auto& x : m) out.push_back(d.neg(x));
  return out;
}

ValueMap scaled(const Domain& d, const ValueMap& m, int sign) { return sign > 0 ? m : negated(d, m); }

/// Complete mapping of a small group: sigma[i] is the index of the image of
/// element i, with h -> h + sigma(h) injective. Depth-first with seeded
/// restarts, each restart allowed twice the nodes of the previous one.
std::vector<std::size_t> search_complete_mapping(const Group& g, BudgetMeter& meter) {
  const auto n = static_cast<std::size_t>(g.order());
  const auto all = g.enumerate();
  std::vector<std::vector<std::size_t>> sum_index(n, std::vector<std::size_t>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) sum_index[x][y] = static_cast<std::size_t>(g.index_of(g.add(all[x], all[y])));
  std::int64_t limit = 1024;
  for (unsigned attempt = 0;; ++attempt, limit *= 2) {
    std::mt19937 rng(attempt);
    std::vector<std::vector<std::size_t>> order(n);
    for (auto& o : order) {
      o.resize(n);
      std::iota(o.begin(), o.end(), std::size_t{0});
      if (attempt > 0) std::shuffle(o.begin(), o.end(), rng);
    }
    std::vector<char> used_image(n, 0), used_sum(n, 0);
    std::vector<std::size_t> cursor(n, 0), chosen(n, 0);
    std::size_t pos = 0;
    std::int64_t nodes = 0;
    bool exhausted = false;
    while (pos < n) {
      meter.tick();
      if (++nodes > limit) break;
      bool placed = false;
      for (std::size_t& c = cursor[pos]; c < n; ++c) {
        std::size_t v = order[pos][c];
        std::size_t sum = sum_index[pos][v];
        if (used_image[v] || used_sum[sum]) continue;
        used_image[v] = used_sum[sum] = 1;
        chosen[pos] = v;
        ++c;
        placed = true;
        break;
      }
      if (placed) {
        if (++pos < n) cursor[pos] = 0;
        continue;
      }
      if (pos == 0) {
        exhausted = true;
        break;
      }
      --pos;
      used_image[chosen[pos]] = used_sum[sum_index[pos][chosen[pos]]] = 0;
    }
    if (pos == n) return chosen;
    if (exhausted) throw PreconditionError("no complete mapping exists for " + g.to_string());
  }
}

/// Permutation sigma with h -> h + sigma(h) also a permutation. Works in the
/// primary decomposition: the identity on the odd part, and a searched
/// mapping on blocks of two (or three) cyclic 2-power factors.
ValueMap complete_mapping(const Domain& d, const Budget& budget) {
  const Group& g = d.group;
  BudgetMeter meter(budget, "complete mapping search over " + g.to_string());
  const auto pd = primary_decomposition(g);
  const auto& canon = pd.canonical.factors();
  std::vector<std::size_t> two;
  for (std::size_t i = 0; i < canon.size(); ++i)
    if (canon[i] % 2 == 0) two.push_back(i);
  if (two.size() == 1) throw PreconditionError("no complete mapping exists for " + g.to_string());
  struct Block {
    std::vector<std::size_t> coords;
    Group group;
    std::vector<std::size_t> sigma;
  };
  std::vector<Block> blocks;
  for (std::size_t k = 0; k + 1 < two.size(); k += 2) {
    Block blk;
    blk.coords = {two[k], two[k + 1]};
    if (two.size() % 2 == 1 && k + 3 == two.size()) blk.coords.push_back(two[k + 2]);
    std::vector<std::int64_t> f;
    for (auto c : blk.coords) f.push_back(canon[c]);
    blk.group = Group(f);
    blk.sigma = search_complete_mapping(blk.group, meter);
    blocks.push_back(std::move(blk));
  }
  ValueMap out;
  for (const auto& h : d.values) {
    Element x = pd.to_canonical.forward(h);
    for (const auto& blk : blocks) {
      Element part;
      for (auto c : blk.coords) part.coords.push_back(x[c]);
      Element image = blk.group.element_at(static_cast<std::int64_t>(blk.sigma[static_cast<std::size_t>(blk.group.index_of(part))]));
      for (std::size_t k = 0; k < blk.coords.size(); ++k) x[blk.coords[k]] = image[k];
    }
    out.push_back(pd.to_canonical.inverse(x));
  }
  return out;
}

std::array<ValueMap, 3> zero_sum_triple(const Domain& d, const Budget& budget) {
  ValueMap id = d.values;
  if (d.kind == LiftKind::odd_index) {
    auto triple = symmetric_zero_sum_triple(d.t);
    std::array<ValueMap, 3> out;
    for (std::size_t k = 0; k < 3; ++k)
      for (auto r : triple[k]) out[k].push_back(Element{r});
    return out;
  }
  const Group& g = d.group;
  if (g.order() % 2 == 1) {
    ValueMap minus_two;
    for (const auto& x : id) minus_two.push_back(g.scalar_mul(-2, x));
    return {id, id, minus_two};
  }
  if (is_cyclic_nontrivial_sylow2(g))
    throw PreconditionError("no zero-sum permutation triple over " + g.to_string() + " (cyclic Sylow 2-subgroup)");
  ValueMap sigma = complete_mapping(d, budget);
  ValueMap tau;
  for (std::size_t i = 0; i < id.size(); ++i) tau.push_back(g.neg(g.add(id[i], sigma[i])));
  return {id, sigma, tau};
}

/// L maps summing to zero pointwise: one triple when L is odd, then
/// (id, -id) pairs.
std::vector<ValueMap> zero_sum_family(const Domain& d, int length, const std::optional<std::array<ValueMap, 3>>& triple) {
  std::vector<ValueMap> out;
  int rest = length;
  if (length % 2 == 1) {
    out.assign(triple->begin(), triple->end());
    rest -= 3;
  }
  for (int k = 0; k < rest / 2; ++k) {
    out.push_back(d.values);
    out.push_back(negated(d, d.values));
  }
  return out;
}

LiftShiftPlan build_plan(LiftShiftPlan plan, const Budget& budget) {
  const Domain d = domain_for(plan);
  const int a = plan.a;
  const int b = plan.b;
  const std::size_t n = d.values.size();
  if (n > 1 && (a < 2 || b < 2))
    throw PreconditionError("no shift plan of shape " + std::to_string(a) + "x" + std::to_string(b) +
                            ": a line of length 1 cannot sum to zero");
  std::vector<std::vector<ValueMap>> cell(static_cast<std::size_t>(a), std::vector<ValueMap>(static_cast<std::size_t>(b)));
  auto sign = [](int k) { return k % 2 == 0 ? 1 : -1; };
  if (n == 1) {
    for (auto& row : cell)
      for (auto& c : row) c = d.values;
  } else if (b % 2 == 0) {
    std::optional<std::array<ValueMap, 3>> triple;
    if (a % 2 == 1) triple = zero_sum_triple(d, budget);
    auto rho = zero_sum_family(d, a, triple);
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) cell[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = scaled(d, rho[static_cast<std::size_t>(i)], sign(j));
  } else if (a % 2 == 0) {
    auto kappa = zero_sum_family(d, b, zero_sum_triple(d, budget));
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) cell[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = scaled(d, kappa[static_cast<std::size_t>(j)], sign(i));
  } else {
    // Both sides odd: a 3x3 Latin block of the triple in the corner, the
    // triple alternating in sign along the remaining rows and columns, and
    // +-id elsewhere.
    auto tau = zero_sum_triple(d, budget);
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) {
        ValueMap m;
        if (i < 3 && j < 3) m = tau[static_cast<std::size_t>((i + j) % 3)];
        else if (i < 3) m = scaled(d, tau[static_cast<std::size_t>(i)], sign(j - 3));
        else if (j < 3) m = scaled(d, tau[static_cast<std::size_t>(j)], sign(i - 3));
        else m = scaled(d, d.values, sign(i - 3) * sign(j - 3));
        cell[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(m);
      }
  }
  plan.shifts.clear();
  for (std::size_t k = 0; k < n; ++k) {
    RectArray arr(a, b, d.zero());
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) arr.at(i, j) = cell[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][k];
    plan.shifts.push_back(std::move(arr));
  }
  if (auto problem = check_plan(plan); !problem.empty()) throw VerificationFailed("shift plan " + plan.key() + ": " + problem);
  return plan;
}

LiftShiftPlan cached_plan(const LiftShiftPlan& shape, const Budget& budget, const std::optional<Cache>& cache_in) {
  const Cache cache = cache_in ? *cache_in : default_cache();
  const std::string key = shape.key();
  if (auto j = cache.load(key)) {
    try {
      LiftShiftPlan loaded = plan_from_json(*j);
      if (loaded.kind == shape.kind && loaded.a == shape.a && loaded.b == shape.b && loaded.group == shape.group &&
          loaded.t == shape.t && check_plan(loaded).empty())
        return loaded;
    } catch (const Error&) {
    }
  }
  LiftShiftPlan plan = build_plan(shape, budget);
  cache.store(key, to_json(plan));
  return plan;
}

}  // namespace

std::string LiftShiftPlan::key() const {
  std::string out = kind == LiftKind::direct_sum ? "plan-direct-" + group.to_string() : "plan-odd-t" + std::to_string(t);
  return out + "-" + std::to_string(a) + "x" + std::to_string(b);
}

std::string check_plan(const LiftShiftPlan& plan) {
  if (plan.kind == LiftKind::odd_index && (plan.t < 1 || plan.t % 2 == 0)) return "t must be odd and positive";
  const Domain d = domain_for(plan);
  const std::size_t n = d.values.size();
  if (plan.shifts.size() != n)
    return std::to_string(plan.shifts.size()) + " shift arrays, expected " + std::to_string(n);
  for (std::size_t k = 0; k < n; ++k) {
    const RectArray& arr = plan.shifts[k];
    if (arr.rows() != plan.a || arr.cols() != plan.b) return "shift array " + std::to_string(k) + " has the wrong shape";
    for (const auto& x : arr.cells())
      if (!d.contains(x)) return "shift array " + std::to_string(k) + " holds " + to_string(x) + " outside the fibre set";
    for (int i = 0; i < plan.a; ++i) {
      Element sum = d.zero();
      for (int j = 0; j < plan.b; ++j) sum = d.add(sum, arr.at(i, j));
      if (sum != d.zero()) return "shift array " + std::to_string(k) + " row " + std::to_string(i) + " sums to " + to_string(sum);
    }
    for (int j = 0; j < plan.b; ++j) {
      Element sum = d.zero();
      for (int i = 0; i < plan.a; ++i) sum = d.add(sum, arr.at(i, j));
      if (sum != d.zero()) return "shift array " + std::to_string(k) + " column " + std::to_string(j) + " sums to " + to_string(sum);
    }
  }
  for (int i = 0; i < plan.a; ++i)
    for (int j = 0; j < plan.b; ++j) {
      std::vector<char> seen(n, 0);
      for (const auto& arr : plan.shifts) {
        auto idx = static_cast<std::size_t>(d.index(arr.at(i, j)));
        if (seen[idx]++) return "position (" + std::to_string(i) + "," + std::to_string(j) + ") repeats " + to_string(arr.at(i, j));
      }
    }
  return {};
}

nlohmann::json to_json(const LiftShiftPlan& plan) {
  nlohmann::json shifts = nlohmann::json::array();
  for (const auto& arr : plan.shifts) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < arr.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < arr.cols(); ++j) row.push_back(arr.at(i, j).coords);
      rows.push_back(std::move(row));
    }
    shifts.push_back(std::move(rows));
  }
  return {{"kind", plan.kind == LiftKind::direct_sum ? "direct_sum" : "odd_index"},
          {"a", plan.a},
          {"b", plan.b},
          {"group", plan.group.factors()},
          {"t", plan.t},
          {"shifts", shifts}};
}

LiftShiftPlan plan_from_json(const nlohmann::json& j) {
  try {
    LiftShiftPlan plan;
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "direct_sum" && kind != "odd_index") throw ParseError("unknown plan kind " + kind);
    plan.kind = kind == "direct_sum" ? LiftKind::direct_sum : LiftKind::odd_index;
    plan.a = j.at("a").get<int>();
    plan.b = j.at("b").get<int>();
    plan.group = Group(j.at("group").get<std::vector<std::int64_t>>());
    plan.t = j.at("t").get<std::int64_t>();
    for (const auto& arr : j.at("shifts")) {
      std::vector<Element> cells;
      for (const auto& row : arr)
        for (const auto& x : row) cells.emplace_back(x.get<std::vector<std::int64_t>>());
      plan.shifts.emplace_back(plan.a, plan.b, std::move(cells));
    }
    return plan;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad plan document: ") + e.what());
  }
}

std::array<std::vector<std::int64_t>, 3> symmetric_zero_sum_triple(std::int64_t t) {
  if (t < 1 || t % 2 == 0) throw PreconditionError("symmetric_zero_sum_triple: t must be odd and positive");
  const std::int64_t m = (t - 1) / 2;
  std::array<std::vector<std::int64_t>, 3> out;
  for (std::int64_t r = -m; r <= m; ++r) {
    std::int64_t second = mod(r + m + m, t) - m;
    out[0].push_back(r);
    out[1].push_back(second);
    out[2].push_back(-r - second);
  }
  return out;
}

LiftShiftPlan direct_sum_plan(const Group& g2, int a, int b, const Budget& budget, const std::optional<Cache>& cache) {
  LiftShiftPlan shape;
  shape.kind = LiftKind::direct_sum;
  shape.a = a;
  shape.b = b;
  shape.group = g2;
  return cached_plan(shape, budget, cache);
}

LiftShiftPlan odd_index_plan(std::int64_t t, int a, int b, const std::optional<Cache>& cache) {
  if (t < 1 || t % 2 == 0) throw PreconditionError("odd_lift: t = " + std::to_string(t) + " must be odd");
  LiftShiftPlan shape;
  shape.kind = LiftKind::odd_index;
  shape.a = a;
  shape.b = b;
  shape.t = t;
  return cached_plan(shape, Budget{}, cache);
}

RectSet direct_sum_lift(const RectSet& s, const Group& g2, const Budget& budget, const std::optional<Cache>& cache) {
  if (!s.hole.empty()) throw PreconditionError("direct_sum_lift: input must not have a hole");
  if (g2.rank() == 0) return s;
  std::vector<std::int64_t> factors = s.group.factors();
  factors.insert(factors.end(), g2.factors().begin(), g2.factors().end());
  Group g(factors);
  auto join = [&](const Element& x, const Element& y) {
    std::vector<std::int64_t> raw = x.coords;
    raw.insert(raw.end(), y.coords.begin(), y.coords.end());
    return Element(std::move(raw));
  };
  const LiftShiftPlan plan = direct_sum_plan(g2, s.a, s.b, budget, cache);

  RectSet out;
  out.group = g;
  out.a = s.a;
  out.b = s.b;
  out.gamma = join(s.gamma, g2.zero());
  out.delta = join(s.delta, g2.zero());
  for (const auto& src : s.arrays)
    for (const auto& shift : plan.shifts) {
      RectArray arr(s.a, s.b, g.zero());
      for (int i = 0; i < s.a; ++i)
        for (int j = 0; j < s.b; ++j) arr.at(i, j) = join(src.at(i, j), shift.at(i, j));
      out.arrays.push_back(std::move(arr));
    }
  require_verified(out, "direct_sum_lift", {.zero_sum = s.is_zero_sum()});
  return out;
}

RectSet odd_lift(const RectSet& s, std::int64_t t, const std::optional<Cache>& cache) {
  if (!s.hole.empty()) throw PreconditionError("odd_lift: input must not have a hole");
  if (s.group.rank() == 0) throw PreconditionError("odd_lift: group needs a leading cyclic factor");
  if (t == 1) return s;
  const LiftShiftPlan plan = odd_index_plan(t, s.a, s.b, cache);
  std::vector<std::int64_t> factors = s.group.factors();
  factors[0] *= t;
  Group g(factors);
  auto lift = [&](const Element& x, std::int64_t shift) {
    std::vector<std::int64_t> raw = x.coords;
    raw[0] = t * raw[0] + shift;
    return g.reduce(std::move(raw));
  };

  RectSet out;
  out.group = g;
  out.a = s.a;
  out.b = s.b;
  out.gamma = lift(s.gamma, 0);
  out.delta = lift(s.delta, 0);
  for (const auto& src : s.arrays)
    for (const auto& shift : plan.shifts) {
      RectArray arr(s.a, s.b, g.zero());
      for (int i = 0; i < s.a; ++i)
        for (int j = 0; j < s.b; ++j) arr.at(i, j) = lift(src.at(i, j), shift.at(i, j)[0]);
      out.arrays.push_back(std::move(arr));
    }
  require_verified(out, "odd_lift", {.zero_sum = s.is_zero_sum()});
  return out;
}

}  // namespace mrs

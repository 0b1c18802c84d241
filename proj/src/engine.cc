#include "mrs/engine.hh"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>

#include "mrs/atlas.hh"
#include "mrs/combinators.hh"
#include "mrs/error.hh"
#include "mrs/search.hh"

namespace mrs {

std::string to_string(FeasibilityReason reason) {
  switch (reason) {
    case FeasibilityReason::both_even:
      return "both-even";
    case FeasibilityReason::sylow_trivial_or_noncyclic:
      return "sylow-trivial-or-noncyclic";
    case FeasibilityReason::violates_sylow_cyclic:
      return "violates-sylow-cyclic";
    case FeasibilityReason::violates_2xodd:
      return "violates-2xodd";
  }
  return "?";
}

std::string to_string(BuildStatus status) {
  switch (status) {
    case BuildStatus::constructed:
      return "constructed";
    case BuildStatus::infeasible:
      return "infeasible";
    case BuildStatus::not_constructed:
      return "feasible-but-not-constructed";
  }
  return "?";
}

namespace {

void require_shape(const Group& g, int a, int b, int c) {
  if (a < 2 || b < 2 || c < 1)
    throw PreconditionError("need a, b > 1 and c >= 1, got " + std::to_string(a) + ", " + std::to_string(b) + ", " +
                            std::to_string(c));
  if (static_cast<std::int64_t>(a) * b * c != g.order())
    throw PreconditionError("a*b*c = " + std::to_string(static_cast<std::int64_t>(a) * b * c) + " but |G| = " +
                            std::to_string(g.order()));
}

}  // namespace

FeasibilityVerdict feasible(const Group& g, int a, int b, int c) {
  require_shape(g, a, b, c);
  FeasibilityVerdict v;
  v.theta_note = is_cyclic_nontrivial_sylow2(g);
  if (a % 2 == 0 && b % 2 == 0) {
    v.feasible = true;
    v.reason = FeasibilityReason::both_even;
  } else if (v.theta_note) {
    v.reason = FeasibilityReason::violates_sylow_cyclic;
  } else if ((a == 2 || b == 2) && (static_cast<std::int64_t>(a) * b) % 4 != 0) {
    v.reason = FeasibilityReason::violates_2xodd;
  } else {
    v.feasible = true;
    v.reason = FeasibilityReason::sylow_trivial_or_noncyclic;
  }
  return v;
}

nlohmann::json to_json(const BuildTrace& trace) {
  nlohmann::json j{{"label", trace.label}, {"arrays", trace.arrays}, {"params", trace.params}};
  if (!trace.children.empty()) {
    j["children"] = nlohmann::json::array();
    for (const auto& child : trace.children) j["children"].push_back(to_json(child));
  }
  return j;
}

std::string check_trace_counts(const BuildTrace& t) {
  namespace L = trace_label;
  static const std::set<std::string> leaves{L::kAtlas, L::kSynthesized, L::kPlan};
  auto fail = [&](const std::string& why) { return t.label + " (" + t.params.dump() + "): " + why; };
  if (t.children.empty()) return leaves.count(t.label) ? "" : fail("not a leaf label");
  for (const auto& child : t.children)
    if (auto bad = check_trace_counts(child); !bad.empty()) return bad;
  auto child = [&](std::size_t i) { return static_cast<std::int64_t>(t.children.at(i).arrays); };
  const std::int64_t n = t.arrays;
  const std::size_t k = t.children.size();
  if (t.params.contains("s2_order") && n * 4 != t.params["s2_order"].get<std::int64_t>())
    return fail("array count differs from |S_2|/4");
  if (t.label == L::kDouble) return k == 1 && n == 4 * child(0) ? "" : fail("doubling is not x4");
  if (t.label == L::kExpand) return k == 1 && n == 6 * child(0) ? "" : fail("expansion is not x6");
  if (t.label == L::kFillHole) {
    if (k != 2 || n != child(0) + child(1)) return fail("hole filling is not additive");
    if (t.children[0].label == L::kExpand && t.params.contains("s2_order")) {
      // 6 * 2^(n-5) + 2^(n-4) = 2^(n-2) with 2^n = |S_2|.
      const std::int64_t order = t.params["s2_order"].get<std::int64_t>();
      if (child(0) * 32 != 6 * order || child(1) * 16 != order || n * 4 != order)
        return fail("expansion branch does not split as 6*2^(n-5) + 2^(n-4)");
    }
    return "";
  }
  if (t.label == L::kFillTwoHoles) return k == 3 && n == child(0) + child(1) + child(2) ? "" : fail("not additive");
  if (t.label == L::kOddLift || t.label == L::kDirectSumLift)
    return k == 2 && t.children[1].label == L::kPlan && n == child(0) * child(1) ? "" : fail("lift is not multiplicative");
  if (t.label == L::kStack || t.label == L::kHconcat) {
    const std::int64_t g = t.params.value("group_size", 0);
    return k == 1 && g > 0 && n * g == child(0) ? "" : fail("grouping count mismatch");
  }
  if (t.label == L::kTranspose) return k == 1 && n == child(0) ? "" : fail("transpose changed the count");
  return fail("unknown operation");
}

// ---------------------------------------------------------------------------
// build_core

namespace {

namespace L = trace_label;

using CoreKey = std::pair<int, std::vector<std::int64_t>>;

std::shared_mutex memo_mutex;
std::map<CoreKey, CoreResult> memo;

Group core_group(int p, const Group& s2) {
  std::vector<std::int64_t> f{p};
  f.insert(f.end(), s2.factors().begin(), s2.factors().end());
  return Group(f);
}

RectSet as_group(const RectSet& s, const Group& target) { return s.group == target ? s : relabel(s, target); }

BuildTrace node(std::string label, nlohmann::json params, const RectSet& s, std::vector<BuildTrace> children = {}) {
  return BuildTrace{std::move(label), std::move(params), s.c(), std::move(children)};
}

BuildTrace leaf_for(const std::string& label, const std::string& what, int p, const RectSet& s) {
  return node(label, {{"source", what}, {"p", p}, {"group", s.group.to_string()}}, s);
}

CoreResult compute_core(int p, const Group& s2, const EngineOptions& opt);

CoreResult core(int p, const Group& s2, const EngineOptions& opt) { return build_core(p, s2, opt); }

Group without_factor(const Group& g, std::size_t index) {
  std::vector<std::int64_t> f = g.factors();
  f.erase(f.begin() + static_cast<std::ptrdiff_t>(index));
  return Group(f);
}

CoreResult core_small_exponent(int p, const Group& s2, const EngineOptions& opt) {
  const Group target = core_group(p, s2);
  const auto& f = s2.factors();
  if (s2.order() == 4) {
    RectSet s = synthesize_scalable_base(ScalableKind::p22, p, opt.budget, opt.cache);
    return {as_group(s, target), leaf_for(p == 3 ? L::kAtlas : L::kSynthesized, "p22", p, s)};
  }
  if (s2.order() == 8 && f == std::vector<std::int64_t>{2, 2, 2}) {
    RectSet s = synthesize_scalable_base(ScalableKind::p222, p, opt.budget, opt.cache);
    return {as_group(s, target), leaf_for(L::kSynthesized, "p222", p, s)};
  }
  if (s2.order() == 8) {  // Z2 + Z4
    if (p >= 5) {
      RectSet s = atlas::family_p_2_4(p);
      return {as_group(s, target), leaf_for(L::kAtlas, "family_p_2_4", p, s)};
    }
    SearchProblem problem;
    problem.group = target;
    problem.a = p;
    problem.b = 4;
    problem.c = 2;
    problem.zero_sum = true;
    problem.budget = opt.budget;
    auto s = synthesize(problem);
    if (!s) throw VerificationFailed("no MRS* over " + target.to_string());
    return {*s, leaf_for(L::kSynthesized, "search", p, *s)};
  }
  // Halve the two largest factors, recurse, then double them back.
  std::vector<std::int64_t> rest(f.begin(), f.end() - 2);
  const std::int64_t u = f[f.size() - 2] / 2, v = f.back() / 2;
  std::vector<std::int64_t> inner_factors = rest;
  for (auto x : {u, v})
    if (x > 1) inner_factors.push_back(x);
  const Group inner_s2 = Group(inner_factors).canonical();
  CoreResult inner = core(p, inner_s2, opt);
  std::vector<std::int64_t> layout{p};
  layout.insert(layout.end(), rest.begin(), rest.end());
  layout.push_back(u);
  layout.push_back(v);
  RectSet doubled = double_2_2(as_group(inner.set, Group(layout)));
  RectSet out = as_group(doubled, target);
  return {out, node(L::kDouble, {{"p", p}, {"s2", s2.to_string()}, {"s2_order", s2.order()}}, out, {inner.trace})};
}

CoreResult core_with_hole(int p, const Group& s2, const RectSet& outer, BuildTrace outer_trace, const Group& inner_s2,
                          const EngineOptions& opt) {
  const Group target = core_group(p, s2);
  if (outer.hole.subgroups.size() != 1) throw Error("expected a single hole");
  const Embedding& emb = outer.hole.subgroups[0];
  CoreResult inner = core(p, inner_s2, opt);
  RectSet filled = fill_hole(outer, as_group(inner.set, emb.source()), emb);
  RectSet out = as_group(filled, target);
  return {out, node(L::kFillHole, {{"p", p}, {"s2", s2.to_string()}, {"s2_order", s2.order()}}, out,
                    {std::move(outer_trace), inner.trace})};
}

CoreResult compute_core(int p, const Group& s2, const EngineOptions& opt) {
  const Group target = core_group(p, s2);
  const auto& f = s2.factors();
  if (s2.exponent() <= 4) return core_small_exponent(p, s2, opt);

  if (f == std::vector<std::int64_t>{2, 8}) {
    RectSet outer = atlas::imrs_p_2_8(p);
    return core_with_hole(p, s2, outer, leaf_for(L::kAtlas, "imrs_p_2_8", p, outer), Group{2, 2}, opt);
  }
  if (f == std::vector<std::int64_t>{4, 8}) {
    RectSet outer = atlas::imrs_p_4_8(p);
    return core_with_hole(p, s2, outer, leaf_for(L::kAtlas, "imrs_p_4_8", p, outer), Group{2, 4}, opt);
  }
  if (f == std::vector<std::int64_t>{8, 8}) {
    RectSet outer = atlas::imrs_p_8_8_complement(p);
    const Group g = outer.group;
    const Group h{2 * static_cast<std::int64_t>(p), 8};
    Embedding emb1(h, g, {Element{1, 4, 0}, Element{0, 0, 1}});
    Embedding emb2(h, g, {Element{1, 0, 4}, Element{0, 1, 0}});
    RectSet part1 = atlas::imrs_p_2_8(p);
    CoreResult part2 = core(p, Group{2, 8}, opt);
    RectSet filled = fill_two_holes(outer, part1, as_group(part2.set, h), emb1, emb2);
    RectSet out = as_group(filled, target);
    return {out, node(L::kFillTwoHoles, {{"p", p}, {"s2", s2.to_string()}, {"s2_order", s2.order()}}, out,
                      {leaf_for(L::kAtlas, "imrs_p_8_8_complement", p, outer), leaf_for(L::kAtlas, "imrs_p_2_8", p, part1),
                       part2.trace})};
  }

  // s2 = N + Z_{2^beta} with 2^beta = exp(s2): expand a core over
  // N + Z_{2^(beta-3)}, then fill the hole with a core over N + Z_{2^(beta-2)}.
  const std::int64_t top = f.back();
  const Group n = without_factor(s2, f.size() - 1);
  std::vector<std::int64_t> small_factors = n.factors();
  if (top / 8 > 1) small_factors.push_back(top / 8);
  CoreResult small = core(p, Group(small_factors).canonical(), opt);
  std::vector<std::int64_t> layout{p};
  layout.insert(layout.end(), n.factors().begin(), n.factors().end());
  layout.push_back(top / 8);
  RectSet expanded = expand_cp(as_group(small.set, Group(layout)));
  BuildTrace expand_trace =
      node(L::kExpand, {{"p", p}, {"alpha", static_cast<int>(std::countr_zero(static_cast<std::uint64_t>(top / 8)))},
                        {"H", n.to_string()}},
           expanded, {small.trace});
  std::vector<std::int64_t> fill_factors = n.factors();
  fill_factors.push_back(top / 4);
  return core_with_hole(p, s2, expanded, std::move(expand_trace), Group(fill_factors).canonical(), opt);
}

}  // namespace

CoreResult build_core(int p, const Group& s2_in, const EngineOptions& options) {
  if (p < 3 || !is_prime(p)) throw PreconditionError("build_core: p = " + std::to_string(p) + " must be an odd prime");
  if (!is_power_of_two(s2_in.order()) || s2_in.order() < 4)
    throw PreconditionError("build_core: " + s2_in.to_string() + " is not a 2-group of order >= 4");
  const Group s2 = s2_in.canonical();
  if (is_cyclic_nontrivial_sylow2(s2)) throw PreconditionError("build_core: " + s2.to_string() + " is cyclic");
  const CoreKey key{p, s2.factors()};
  {
    std::shared_lock lock(memo_mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  CoreResult r = compute_core(p, s2, options);
  require_verified(r.set, "build_core", {.zero_sum = true});
  if (r.set.c() * 4 != s2.order()) throw VerificationFailed("build_core: wrong array count");
  std::unique_lock lock(memo_mutex);
  return memo.emplace(key, std::move(r)).first->second;
}

// ---------------------------------------------------------------------------
// build

namespace {

std::int64_t smallest_prime_factor(std::int64_t n) { return factorize(n).front().first; }

BuildResult pipeline(const Group& g, int a, int b, bool swapped, const EngineOptions& opt) {
  // Here a is odd >= 3 and b = 2^n with n >= 2.
  auto [s2, odd] = sylow2(g);
  const int p = static_cast<int>(smallest_prime_factor(a));
  CoreResult core_result = build_core(p, s2, opt);
  RectSet s = core_result.set;
  BuildTrace trace = core_result.trace;

  // Split the odd part as Z_{p^alpha} + rest.
  std::size_t pick = odd.rank();
  for (std::size_t i = 0; i < odd.rank(); ++i)
    if (odd.factors()[i] % p == 0) pick = i;
  const std::int64_t t = odd.factors()[pick] / p;
  const Group rest = without_factor(odd, pick);

  if (t > 1) {
    LiftShiftPlan plan = odd_index_plan(t, s.a, s.b, opt.cache);
    s = odd_lift(s, t, opt.cache);
    trace = node(L::kOddLift, {{"t", t}}, s,
                 {std::move(trace), BuildTrace{L::kPlan, {{"key", plan.key()}}, static_cast<int>(plan.shifts.size()), {}}});
  }
  if (rest.rank() > 0) {
    LiftShiftPlan plan = direct_sum_plan(rest, s.a, s.b, opt.budget, opt.cache);
    s = direct_sum_lift(s, rest, opt.budget, opt.cache);
    trace = node(L::kDirectSumLift, {{"group", rest.to_string()}}, s,
                 {std::move(trace), BuildTrace{L::kPlan, {{"key", plan.key()}}, static_cast<int>(plan.shifts.size()), {}}});
  }
  if (a / p > 1) {
    s = stack(s, a / p);
    trace = node(L::kStack, {{"group_size", a / p}}, s, {std::move(trace)});
  }
  if (b / 4 > 1) {
    s = hconcat(s, b / 4);
    trace = node(L::kHconcat, {{"group_size", b / 4}}, s, {std::move(trace)});
  }
  if (swapped) {
    s = transpose(s);
    trace = node(L::kTranspose, nlohmann::json::object(), s, {std::move(trace)});
  }
  s = as_group(s, g);
  BuildResult r;
  r.status = BuildStatus::constructed;
  r.set = std::move(s);
  r.trace = std::move(trace);
  return r;
}

}  // namespace

BuildResult build(const Group& g, int a, int b, int c, const EngineOptions& options) {
  BuildResult r;
  r.verdict = feasible(g, a, b, c);
  if (!r.verdict.feasible) {
    r.status = BuildStatus::infeasible;
    return r;
  }
  auto odd_by_power = [](int x, int y) { return x % 2 == 1 && x >= 3 && y >= 4 && is_power_of_two(y); };
  if (odd_by_power(a, b) || odd_by_power(b, a)) {
    const bool swapped = !odd_by_power(a, b);
    BuildResult built = swapped ? pipeline(g, b, a, true, options) : pipeline(g, a, b, false, options);
    built.verdict = r.verdict;
    r = std::move(built);
  } else if (g.order() <= options.search_cap) {
    SearchProblem problem;
    problem.group = g;
    problem.a = a;
    problem.b = b;
    problem.c = c;
    problem.zero_sum = options.zero_sum;
    problem.budget = options.fallback_budget;
    try {
      if (auto s = synthesize(problem)) {
        r.status = BuildStatus::constructed;
        r.set = std::move(*s);
        r.trace = BuildTrace{L::kSynthesized, {{"source", "search"}, {"group", g.to_string()}}, c, {}};
      } else {
        r.note = "search exhausted without a witness";
      }
    } catch (const BudgetExhausted& e) {
      r.note = e.what();
    }
    if (!r.set) r.status = BuildStatus::not_constructed;
  } else {
    r.status = BuildStatus::not_constructed;
    r.note = "shape outside the odd x 2^n pipeline and |G| above the search cap";
  }
  if (r.set) {
    require_verified(*r.set, "build", {.zero_sum = options.zero_sum});
    if (r.set->c() != c || r.set->a != a || r.set->b != b) throw VerificationFailed("build: wrong shape or count");
  }
  return r;
}

}  // namespace mrs

#include <doctest.h>

#include <filesystem>

#include "mrs/engine.hh"
#include "mrs/error.hh"
#include "mrs/search.hh"

using namespace mrs;

namespace {

const VerifyOptions kZeroSum{.zero_sum = true};

EngineOptions temp_options() {
  auto dir = std::filesystem::temp_directory_path() / "mrs_engine_cache";
  EngineOptions o;
  o.cache = Cache(dir.string());
  return o;
}

std::vector<Group> noncyclic_two_groups(std::int64_t max_order) {
  std::vector<Group> out;
  for (std::int64_t n = 4; n <= max_order; n *= 2)
    for (const auto& g : abelian_groups_of_order(n))
      if (g.rank() >= 2) out.push_back(g);
  return out;
}

// Divisor triples (a, b, c) with a, b > 1 and abc = n.
std::vector<std::array<int, 3>> shapes(int n) {
  std::vector<std::array<int, 3>> out;
  for (int a = 2; a <= n; ++a)
    for (int b = 2; a * b <= n; ++b)
      if (n % (a * b) == 0) out.push_back({a, b, n / (a * b)});
  return out;
}

}  // namespace

TEST_CASE("abelian groups of small orders") {
  CHECK(abelian_groups_of_order(16).size() == 5);
  CHECK(abelian_groups_of_order(64).size() == 11);
  CHECK(abelian_groups_of_order(72).size() == 6);
  CHECK(abelian_groups_of_order(1).size() == 1);
}

TEST_CASE("feasibility verdicts") {
  auto v = feasible(Group{6}, 2, 3, 1);
  CHECK_FALSE(v.feasible);
  CHECK(v.reason == FeasibilityReason::violates_sylow_cyclic);
  CHECK(v.theta_note);
  v = feasible(Group{2, 2, 3}, 2, 3, 2);
  CHECK_FALSE(v.feasible);
  CHECK(v.reason == FeasibilityReason::violates_2xodd);
  v = feasible(Group{9, 2, 8}, 9, 4, 4);
  CHECK(v.feasible);
  CHECK(v.reason == FeasibilityReason::sylow_trivial_or_noncyclic);
  v = feasible(Group{8}, 2, 4, 1);
  CHECK(v.feasible);
  CHECK(v.reason == FeasibilityReason::both_even);
  CHECK(feasible(Group{15}, 3, 5, 1).feasible);
  CHECK_THROWS_AS(feasible(Group{6}, 2, 2, 1), PreconditionError);
  CHECK_THROWS_AS(feasible(Group{6}, 1, 6, 1), PreconditionError);
}

TEST_CASE("classifier matches the exhaustive oracle up to order 12") {
  for (int n = 4; n <= 12; ++n)
    for (const auto& g : abelian_groups_of_order(n))
      for (auto [a, b, c] : shapes(n)) {
        CAPTURE(g.to_string());
        CAPTURE(a);
        CAPTURE(b);
        CHECK(feasible(g, a, b, c).feasible == run_oracle(g, a, b, c).exists);
      }
}

TEST_CASE("build_core examples") {
  auto opt = temp_options();
  auto base = build_core(3, Group{2, 2}, opt);
  CHECK(base.set.c() == 1);
  CHECK(base.trace.label == trace_label::kAtlas);
  auto r = build_core(5, Group{2, 8}, opt);
  CHECK(r.set.c() == 4);
  CHECK(r.trace.label == trace_label::kFillHole);
  CHECK(verify(r.set, kZeroSum).ok);
  auto deep = build_core(3, Group{2, 128}, opt);
  CHECK(deep.set.c() == 256 / 4);
  CHECK(verify(deep.set, kZeroSum).ok);
  CHECK(deep.trace.children.at(0).label == trace_label::kExpand);
  CHECK(check_trace_counts(deep.trace).empty());
  CHECK_THROWS_AS(build_core(3, Group{8}, opt), PreconditionError);
  CHECK_THROWS_AS(build_core(9, Group{2, 2}, opt), PreconditionError);
}

TEST_CASE("build_core over every noncyclic 2-group up to 64") {
  auto opt = temp_options();
  for (int p : {3, 5, 7}) {
    for (const auto& s2 : noncyclic_two_groups(64)) {
      CAPTURE(p);
      CAPTURE(s2.to_string());
      auto r = build_core(p, s2, opt);
      CHECK(r.set.c() * 4 == s2.order());
      CHECK(verify(r.set, kZeroSum).ok);
      CHECK(check_trace_counts(r.trace) == "");
    }
  }
}

TEST_CASE("trace checker rejects bad counts") {
  BuildTrace leaf{trace_label::kAtlas, {}, 2, {}};
  BuildTrace good{trace_label::kDouble, {}, 8, {leaf}};
  CHECK(check_trace_counts(good).empty());
  BuildTrace bad{trace_label::kDouble, {}, 6, {leaf}};
  CHECK_FALSE(check_trace_counts(bad).empty());
  BuildTrace odd_leaf{"mystery", {}, 2, {}};
  CHECK_FALSE(check_trace_counts(odd_leaf).empty());
}

TEST_CASE("build pipeline examples") {
  auto opt = temp_options();
  auto r = build(Group{9, 2, 8}, 9, 4, 4, opt);
  REQUIRE(r.status == BuildStatus::constructed);
  CHECK(verify(*r.set, kZeroSum).ok);
  CHECK(r.set->c() == 4);
  CHECK(check_trace_counts(*r.trace).empty());

  r = build(Group{45, 4, 4}, 15, 16, 3, opt);
  REQUIRE(r.status == BuildStatus::constructed);
  CHECK(verify(*r.set, kZeroSum).ok);
  CHECK(r.set->group == Group({45, 4, 4}));

  r = build(Group{3, 2, 32}, 8, 3, 8, opt);
  REQUIRE(r.status == BuildStatus::constructed);
  CHECK(r.set->a == 8);
  CHECK(verify(*r.set, kZeroSum).ok);
  CHECK(check_trace_counts(*r.trace).empty());
}

TEST_CASE("build verdicts and fallback") {
  auto r = build(Group{6}, 2, 3, 1);
  CHECK(r.status == BuildStatus::infeasible);
  CHECK(r.verdict.reason == FeasibilityReason::violates_sylow_cyclic);
  r = build(Group{4}, 2, 2, 1);
  REQUIRE(r.status == BuildStatus::constructed);
  CHECK(verify(*r.set).ok);
  r = build(Group{2, 2, 2, 2, 2, 2, 2}, 8, 16, 1);
  CHECK(r.status == BuildStatus::not_constructed);
}

TEST_CASE("build is deterministic") {
  auto x = build(Group{15, 2, 4}, 15, 4, 2, temp_options());
  auto y = build(Group{15, 2, 4}, 15, 4, 2, temp_options());
  REQUIRE(x.set);
  REQUIRE(y.set);
  for (std::size_t k = 0; k < x.set->arrays.size(); ++k) CHECK(x.set->arrays[k].cells() == y.set->arrays[k].cells());
}

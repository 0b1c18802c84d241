// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "mrs/atlas.hh"
#include "mrs/engine.hh"
#include "mrs/json_io.hh"
#include "mrs/search.hh"

using namespace mrs;

namespace {

// Wall-clock limits per criterion, in seconds.
constexpr double kFixtureLimit = 1.0;
constexpr double kFamilyLimit = 30.0;
constexpr double kCoreLimit = 300.0;
constexpr double kPipelineLimit = 60.0;
constexpr double kNecessityLimit = 120.0;
// Criterion 6 reuses the traces of criterion 3; its own work is a tree walk.
constexpr double kAlgebraLimit = 5.0;

constexpr std::int64_t kOracleMaxOrder = 16;
const std::vector<int> kFamilyPrimes{3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
const std::vector<int> kCorePrimes{3, 5, 7, 11, 13};
constexpr std::int64_t kCoreMaxOrder = 128;

const VerifyOptions kZeroSum{.zero_sum = true};

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::vector<BuildTrace> core_traces;

RectSet fixture(const std::string& name) { return read_rect_set(std::string(MRS_FIXTURE_DIR) + "/" + name + ".json"); }

Outcome fixtures() {
  Outcome o;
  struct Item {
    std::string name;
    RectSet built;
    bool holed;
    int arrays;
  };
  std::vector<Item> items{{"base_3_2_2", atlas::base_3_2_2(), false, 1},
                          {"imrs_p_2_8_p3", atlas::imrs_p_2_8(3), true, 3},
                          {"imrs_p_4_8_p3", atlas::imrs_p_4_8(3), true, 6}};
  for (const auto& it : items) {
    RectSet stored = fixture(it.name);
    if (!(stored == it.built)) o.fail(it.name + " differs from the stored arrays");
    if (!verify(stored, kZeroSum).ok) o.fail(it.name + " does not verify");
    if (stored.hole.empty() == it.holed) o.fail(it.name + " has the wrong hole");
    if (stored.c() != it.arrays) o.fail(it.name + " has the wrong array count");
  }
  if (o.ok) o.detail = "3 fixtures match and verify";
  return o;
}

Outcome families(const EngineOptions& opt) {
  Outcome o;
  int checked = 0;
  for (int p : kFamilyPrimes) {
    std::vector<std::pair<std::string, RectSet>> sets;
    // The Z2+Z4 family starts at p = 5; p = 3 comes from the search base.
    sets.emplace_back("p_2_4", p >= 5 ? atlas::family_p_2_4(p) : build_core(3, Group{2, 4}, opt).set);
    sets.emplace_back("p_2_8", atlas::imrs_p_2_8(p));
    sets.emplace_back("p_4_8", atlas::imrs_p_4_8(p));
    sets.emplace_back("p_8_8", atlas::imrs_p_8_8_complement(p));
    for (const auto& [name, s] : sets) {
      ++checked;
      if (!verify(s, kZeroSum).ok) o.fail(name + " fails at p = " + std::to_string(p));
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " sets verify (p = 3 Z2+Z4 from search)";
  return o;
}

Outcome cores(const EngineOptions& opt) {
  Outcome o;
  int checked = 0;
  for (int p : kCorePrimes)
    for (std::int64_t n = 4; n <= kCoreMaxOrder; n *= 2)
      for (const auto& s2 : abelian_groups_of_order(n)) {
        if (s2.rank() < 2) continue;
        ++checked;
        CoreResult r = build_core(p, s2, opt);
        core_traces.push_back(r.trace);
        if (r.set.c() * 4 != s2.order()) o.fail("wrong count for p = " + std::to_string(p) + ", " + s2.to_string());
        if (!verify(r.set, kZeroSum).ok) o.fail("verify fails for p = " + std::to_string(p) + ", " + s2.to_string());
      }
  if (o.ok) o.detail = std::to_string(checked) + " (p, S_2) pairs verify";
  return o;
}

Outcome pipeline(const EngineOptions& opt) {
  Outcome o;
  struct Case {
    Group g;
    int a, b, c;
  };
  std::vector<Case> cases{{Group{9, 2, 8}, 9, 4, 4}, {Group{45, 4, 4}, 15, 16, 3}, {Group{3, 2, 32}, 3, 8, 8}};
  for (const auto& k : cases) {
    BuildResult r = build(k.g, k.a, k.b, k.c, opt);
    const std::string name = k.g.to_string() + " " + std::to_string(k.a) + "x" + std::to_string(k.b);
    if (r.status != BuildStatus::constructed) {
      o.fail(name + ": " + to_string(r.status));
      continue;
    }
    if (!verify(*r.set).ok || r.set->c() != k.c || r.set->a != k.a || r.set->b != k.b) o.fail(name + " does not verify");
  }
  if (o.ok) o.detail = "3 builds verify";
  return o;
}

Outcome necessity() {
  Outcome o;
  if (!prove_nonexistence(Group{6}, 2, 3, 1)) o.fail("Z6 2x3 has a witness");
  if (!prove_nonexistence(Group{2, 2, 3}, 2, 3, 2)) o.fail("Z2+Z2+Z3 2x3 has a witness");
  int checked = 0;
  for (std::int64_t n = 4; n <= kOracleMaxOrder; ++n)
    for (const auto& g : abelian_groups_of_order(n))
      for (int a = 2; a <= n; ++a)
        for (int b = 2; a * b <= n; ++b) {
          if (n % (a * b) != 0) continue;
          const int c = static_cast<int>(n / (a * b));
          ++checked;
          const bool classified = feasible(g, a, b, c).feasible;
          OracleResult r = run_oracle(g, a, b, c);
          if (r.exists != classified)
            o.fail("disagreement on " + g.to_string() + " " + std::to_string(a) + "x" + std::to_string(b));
          if (r.witness && !verify(*r.witness).ok) o.fail("bad witness on " + g.to_string());
        }
  if (o.ok) o.detail = std::to_string(checked) + " (G, a, b, c) agree";
  return o;
}

Outcome algebra() {
  Outcome o;
  if (core_traces.empty()) o.fail("no traces from criterion 3");
  for (const auto& t : core_traces)
    if (auto bad = check_trace_counts(t); !bad.empty()) o.fail(bad);
  if (o.ok) o.detail = std::to_string(core_traces.size()) + " traces consistent";
  return o;
}

bool report(int number, const std::string& title, double limit, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit) o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(limit) + " s");
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2fs", secs);
  std::cout << (o.ok ? "PASS" : "FAIL") << " " << number << " " << title << " [" << timing << "] " << o.detail << "\n";
  return o.ok;
}

}  // namespace

int main() {
  auto cache_dir = std::filesystem::temp_directory_path() / "mrs_acceptance_cache";
  std::filesystem::remove_all(cache_dir);
  EngineOptions opt;
  opt.cache = Cache(cache_dir.string());

  bool ok = true;
  ok &= report(1, "fixture fidelity", kFixtureLimit, fixtures);
  ok &= report(2, "parametric families", kFamilyLimit, [&] { return families(opt); });
  ok &= report(3, "core construction suite", kCoreLimit, [&] { return cores(opt); });
  ok &= report(4, "end-to-end pipeline", kPipelineLimit, [&] { return pipeline(opt); });
  ok &= report(5, "necessity and oracle agreement", kNecessityLimit, necessity);
  ok &= report(6, "combinator count identities", kAlgebraLimit, algebra);
  return ok ? 0 : 1;
}

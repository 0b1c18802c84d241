#pragma once

// Existence verdicts and the recursive builder that assembles full sets from
// the atlas, the combinators and the search.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrs/budget.hh"
#include "mrs/cache.hh"
#include "mrs/model.hh"

namespace mrs {

enum class FeasibilityReason { both_even, sylow_trivial_or_noncyclic, violates_sylow_cyclic, violates_2xodd };

std::string to_string(FeasibilityReason reason);

struct FeasibilityVerdict {
  bool feasible = false;
  FeasibilityReason reason = FeasibilityReason::both_even;
  /// The group has exactly one element of order 2.
  bool theta_note = false;
};

/// Throws PreconditionError unless a, b > 1 and abc = |g|.
FeasibilityVerdict feasible(const Group& g, int a, int b, int c);

namespace trace_label {
inline constexpr const char* kAtlas = "atlas fixture";
inline constexpr const char* kSynthesized = "synthesized base";
inline constexpr const char* kPlan = "cached plan";
inline constexpr const char* kDouble = "double_2_2";
inline constexpr const char* kExpand = "expand_cp";
inline constexpr const char* kFillHole = "fill_hole";
inline constexpr const char* kFillTwoHoles = "fill_two_holes";
inline constexpr const char* kOddLift = "odd_lift";
inline constexpr const char* kDirectSumLift = "direct_sum_lift";
inline constexpr const char* kStack = "stack";
inline constexpr const char* kHconcat = "hconcat";
inline constexpr const char* kTranspose = "transpose";
}  // namespace trace_label

/// Provenance of a constructed set. `arrays` is the array count of the node's
/// output; children are the inputs in the order the operation takes them.
struct BuildTrace {
  std::string label;
  nlohmann::json params = nlohmann::json::object();
  int arrays = 0;
  std::vector<BuildTrace> children;
};

nlohmann::json to_json(const BuildTrace& trace);

/// Empty when every node's array count matches its operation (x4 doubling,
/// x6 expansion, additive hole filling, multiplicative lifts, grouping) and
/// every leaf is an atlas fixture, synthesized base or cached plan; else the
/// first mismatch.
std::string check_trace_counts(const BuildTrace& trace);

struct EngineOptions {
  Budget budget;
  /// Plan and scheme cache; default_cache() when absent.
  std::optional<Cache> cache;
  /// Largest |G| handed to the search fallback.
  std::int64_t search_cap = 64;
  /// Ask the search fallback for gamma = delta = 0.
  bool zero_sum = false;
  Budget fallback_budget{.max_nodes = 20'000'000};
};

struct CoreResult {
  RectSet set;
  BuildTrace trace;
};

/// MRS*(p,4;|s2|/4) over Z_p + s2 (s2 in canonical order after Z_p). s2 must
/// be a noncyclic 2-group. Memoized per (p, canonical s2).
CoreResult build_core(int p, const Group& s2, const EngineOptions& options = {});

enum class BuildStatus { constructed, infeasible, not_constructed };

std::string to_string(BuildStatus status);

struct BuildResult {
  BuildStatus status = BuildStatus::not_constructed;
  FeasibilityVerdict verdict;
  std::optional<RectSet> set;
  std::optional<BuildTrace> trace;
  std::string note;
};

/// Full construction of MRS_g(a,b;c). Shapes odd x 2^n (n >= 2, either
/// orientation) run the core pipeline; other feasible shapes go to the search
/// when |g| <= search_cap and are otherwise reported not_constructed.
BuildResult build(const Group& g, int a, int b, int c, const EngineOptions& options = {});

}  // namespace mrs

#pragma once

// Constructions that turn smaller (incomplete) zero-sum rectangle sets into
// larger ones. Every public operation runs the verifier on its result and
// throws VerificationFailed rather than return a bad set.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrs/budget.hh"
#include "mrs/cache.hh"
#include "mrs/model.hh"

namespace mrs {

/// Adds `inner`, mapped through `emb`, to `outer`. The image of `emb` must be
/// exactly outer's hole; inner must live on emb.source() with the same shape.
RectSet fill_hole(const RectSet& outer, const RectSet& inner, const Embedding& emb);

/// Two-hole variant: outer misses image(emb1) u image(emb2); part1 lives on
/// emb1.source() and misses the preimage of image(emb1) n image(emb2); part2
/// is complete on emb2.source().
RectSet fill_two_holes(const RectSet& outer, const RectSet& part1, const RectSet& part2, const Embedding& emb1,
                       const Embedding& emb2);

/// Doubles the two trailing factors (each 1 or 2) of a zero-sum p x 4 set:
/// four output arrays per input array.
RectSet double_2_2(const RectSet& s);

/// Replaces the trailing factor 2^alpha by 2^(alpha+3) using the C_p sign
/// pattern: six arrays per input array. The result misses the subgroup
/// (w, 4x), recorded as its hole.
RectSet expand_cp(const RectSet& s);

/// The embedding expand_cp records as the hole of its output.
Embedding expand_cp_hole(const Group& source);

enum class LiftKind { direct_sum, odd_index };

/// |F| shift arrays of shape a x b. Every position sees each value of F once
/// across the arrays, and every array has zero row and column sums. For
/// direct_sum, F is all of `group`; for odd_index, F = {-m..m} as integers
/// (m = (t-1)/2), stored as one-coordinate elements, and sums vanish over Z.
struct LiftShiftPlan {
  LiftKind kind = LiftKind::direct_sum;
  int a = 0;
  int b = 0;
  Group group;
  std::int64_t t = 1;
  std::vector<RectArray> shifts;

  std::string key() const;
};

/// Empty string when the plan satisfies its invariants, else the first
/// problem found.
std::string check_plan(const LiftShiftPlan& plan);

nlohmann::json to_json(const LiftShiftPlan& plan);
LiftShiftPlan plan_from_json(const nlohmann::json& j);

/// Builds (or loads from `cache` and re-checks) the plan for a direct-sum
/// lift over g2. An absent cache means default_cache(). Throws
/// PreconditionError when the shape admits none (a or b equal to 1, or an odd
/// side with a cyclic nontrivial Sylow 2-subgroup).
LiftShiftPlan direct_sum_plan(const Group& g2, int a, int b, const Budget& budget = {},
                              const std::optional<Cache>& cache = std::nullopt);
LiftShiftPlan odd_index_plan(std::int64_t t, int a, int b, const std::optional<Cache>& cache = std::nullopt);

/// Three permutations of Z_t's symmetric residues {-m..m} summing to zero
/// over the integers. Entry k of each vector is the image of k - m.
std::array<std::vector<std::int64_t>, 3> symmetric_zero_sum_triple(std::int64_t t);

/// Entries (x, T_k) for every source array and every plan array k; the
/// result group is s.group followed by g2's factors.
RectSet direct_sum_lift(const RectSet& s, const Group& g2, const Budget& budget = {},
                        const std::optional<Cache>& cache = std::nullopt);

/// s lives on Z_m + H, read as the multiples of t inside Z_{mt} + H. Entries
/// (x, h) become (t x + T_k, h), giving c t arrays over Z_{mt} + H.
RectSet odd_lift(const RectSet& s, std::int64_t t, const std::optional<Cache>& cache = std::nullopt);

}  // namespace mrs

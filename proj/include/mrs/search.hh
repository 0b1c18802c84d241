#pragma once

// Backtracking over rectangle sets: a synthesizer for base cases, an
// exhaustive existence oracle for small groups, and header-plus-gadget bases
// that extend to every odd prime p.

#include <optional>
#include <string>
#include <vector>

#include "mrs/budget.hh"
#include "mrs/cache.hh"
#include "mrs/model.hh"

namespace mrs {

struct SearchProblem {
  Group group;
  int a = 0;
  int b = 0;
  int c = 0;
  HoleSpec hole;
  /// When set, the arrays must cover exactly these elements instead of the
  /// group minus the hole.
  std::optional<std::vector<Element>> universe;
  bool zero_sum = false;
  std::optional<Element> gamma;
  std::optional<Element> delta;
  Budget budget;
};

struct SearchStats {
  std::int64_t nodes = 0;
  std::int64_t sum_pairs = 0;
};

/// Entries are filled array by array, row-major, values in index order. The
/// last cell of each row and column is forced by the required sums. Each
/// array is normalised so its corner is its minimum (and the smallest
/// element not yet placed) with first row and first column increasing.
///
/// Returns nullopt when every admissible (gamma, delta) was exhausted; throws
/// BudgetExhausted when the budget runs out first. Deterministic.
std::optional<RectSet> synthesize(const SearchProblem& problem, SearchStats* stats = nullptr);

/// Exact coverage of `universe` plus the declared row and column sums.
/// Used for problems whose cover set is not a group minus a hole.
bool covers_universe(const RectSet& s, const std::vector<Element>& universe);

inline constexpr std::int64_t kOracleCap = 24;

struct OracleResult {
  bool exists = false;
  std::optional<RectSet> witness;
  SearchStats stats;
};

/// Exhaustive: every (gamma, delta) with c a gamma = c b delta = sum(G), one
/// per orbit of the translation action (gamma, delta) -> (gamma + b g,
/// delta + a g). Throws CapExceeded above `cap` and PreconditionError unless
/// a, b > 1 and abc = |G|.
OracleResult run_oracle(const Group& g, int a, int b, int c, std::int64_t cap = kOracleCap, const Budget& budget = {});

/// True iff no MRS_g(a,b;c) exists (proved by run_oracle).
bool prove_nonexistence(const Group& g, int a, int b, int c, std::int64_t cap = kOracleCap);

enum class ScalableKind { p22, p222 };

std::string to_string(ScalableKind kind);

/// Header rows over {-k..k} x S_2 (as integers in the first coordinate) with
/// zero row and column sums over the integers, plus a 2-row gadget over
/// {+-1} x S_2 per array that is scaled to {+-x} x S_2.
struct ScalableScheme {
  ScalableKind kind;
  Group s2;
  int arrays = 0;
  int header_rows = 0;
  std::vector<RectArray> header;
  std::vector<RectArray> gadget;

  /// Smallest x the gadgets start at: header_rows / 2 + 1.
  int first_gadget() const { return header_rows / 2 + 1; }
};

/// The scheme used for `kind`: the 3-row header when one exists, else a
/// 5-row one. Results are cached under `cache` (default_cache() if absent)
/// and re-checked on load.
ScalableScheme scalable_scheme(ScalableKind kind, const Budget& budget = {},
                               const std::optional<Cache>& cache = std::nullopt);

/// Exhaustive check for a 3-row header; nullopt when none exists.
std::optional<std::vector<RectArray>> find_header(ScalableKind kind, int rows, const Budget& budget = {});

/// The header and gadget invariants, independent of p.
bool scheme_is_sound(const ScalableScheme& scheme);

/// MRS*_{Z_p + S_2}(p,4;|S_2|/4) for S_2 = Z2^2 (kind p22) or Z2^3 (p222).
/// Primes below the header's reach use the atlas (p22, p = 3) or a direct
/// search.
RectSet synthesize_scalable_base(ScalableKind kind, int p, const Budget& budget = {},
                                 const std::optional<Cache>& cache = std::nullopt);

}  // namespace mrs

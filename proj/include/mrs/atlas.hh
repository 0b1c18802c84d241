#pragma once

// Explicit arrays and parametric array families, reproduced entry for entry
// and extended to full height p with deterministic filler rows.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mrs/model.hh"

namespace mrs::atlas {

enum class FillerKind { pairs, quadruples, octuples };

/// Partition of Z_modulus minus `excluded` into negation-closed blocks.
struct FillerScheme {
  FillerKind kind;
  std::int64_t modulus = 0;
  std::vector<std::int64_t> excluded;
  std::vector<std::vector<std::int64_t>> blocks;
};

/// Pairs {x, 2p-x}, x = 3..p-3, over Z_{2p}.
FillerScheme filler_p_2_4(std::int64_t p);
/// Quadruples {x, x+1, -x, -x-1}, x = 3, 5, .., p-4, over Z_{2p}.
FillerScheme filler_p_2_8(std::int64_t p);
/// Octuples {a, b, c, d, -a, -b, -c, -d} with a = 3+2k, b = a+1, c = p+a,
/// d = c+1, over Z_{4p}.
FillerScheme filler_p_4_8(std::int64_t p);
/// Pairs {x, -x}, x = 2..(p-1)/2, over Z_p.
FillerScheme filler_p_8_8(std::int64_t p);

/// Checks disjointness, negation closure and exact coverage of the
/// complement of `excluded`.
bool filler_is_partition(const FillerScheme& scheme);

/// p x 6 sign pattern over {+-1, +-2, +-3}: the 3-row head pattern followed
/// by (p-3)/2 copies of the 2-row repeat pattern.
struct CpPattern {
  int p = 0;
  std::vector<std::array<int, 6>> grid;

  int at(int row, int col) const { return grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]; }
};

CpPattern c_pattern(int p);
/// Row permutation, zero column sums and adjacent-pair cancellation.
bool c_pattern_invariants_hold(const CpPattern& c);

/// MRS*(3,4;1) over Z3+Z2+Z2.
RectSet base_3_2_2();

/// MRS*(p,4;2) over Z_{2p}+Z4, p >= 5 prime.
RectSet family_p_2_4(int p);

/// IMRS*(p,4;3) over Z_{2p}+Z8 with hole Z_{2p}+{0,4}.
RectSet imrs_p_2_8(int p);

/// IMRS*(p,4;6) over Z_{4p}+Z8 with hole Z_{4p}+{0,4}.
RectSet imrs_p_4_8(int p);

/// IMRS*(p,4;9) over Zp+Z8+Z8 with hole H1 u H2, where H1 fixes the middle
/// coordinate in {0,4} and H2 the last.
RectSet imrs_p_8_8_complement(int p);

/// Evaluates one literal entry such as "(2p-1,-x)" with the given symbol
/// values. Exposed for tests.
std::vector<std::int64_t> evaluate_entry(std::string_view text, const std::map<char, std::int64_t>& symbols);

}  // namespace mrs::atlas

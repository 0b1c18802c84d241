#pragma once

// Data model for (incomplete) magic rectangle sets and the verifier that
// gates every construction.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mrs/abelian.hh"

namespace mrs {

/// Row-major rows x cols grid of group elements.
class RectArray {
 public:
  RectArray() = default;
  RectArray(int rows, int cols, const Element& fill);
  RectArray(int rows, int cols, std::vector<Element> cells);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Element& at(int i, int j) const { return cells_[static_cast<std::size_t>(i * cols_ + j)]; }
  Element& at(int i, int j) { return cells_[static_cast<std::size_t>(i * cols_ + j)]; }
  const std::vector<Element>& cells() const { return cells_; }
  std::vector<Element>& cells() { return cells_; }

  friend bool operator==(const RectArray&, const RectArray&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Element> cells_;
};

/// Union of embedded subgroups excluded from an incomplete set.
struct HoleSpec {
  std::vector<Embedding> subgroups;

  bool empty() const { return subgroups.empty(); }
  friend bool operator==(const HoleSpec&, const HoleSpec&) = default;
};

/// Enumerated union of the subgroup images, sorted lexicographically.
std::vector<Element> hole_elements(const HoleSpec& hole, std::int64_t cap = kDefaultEnumerationCap);

/// c arrays of shape a x b over `group`, with declared row sum gamma and
/// column sum delta, optionally missing a hole.
struct RectSet {
  Group group;
  int a = 0;
  int b = 0;
  std::vector<RectArray> arrays;
  Element gamma;
  Element delta;
  HoleSpec hole;

  int c() const { return static_cast<int>(arrays.size()); }
  bool is_zero_sum() const { return gamma == group.zero() && delta == group.zero(); }

  friend bool operator==(const RectSet&, const RectSet&) = default;
};

enum class FailureKind { coverage_missing, coverage_duplicate, hole_violation, row_sum, col_sum, shape };

std::string to_string(FailureKind kind);

/// One verifier complaint. Indices are -1 where they do not apply.
struct Failure {
  FailureKind kind;
  int array = -1;
  int row = -1;
  int col = -1;
  std::string detail;

  std::string location() const;
};

struct VerifyReport {
  bool ok = true;
  std::vector<Failure> failures;

  bool has(FailureKind kind) const;
};

struct VerifyOptions {
  /// Also require gamma = delta = 0 (the MRS* / IMRS* variants).
  bool zero_sum = false;
  std::int64_t cap = kDefaultEnumerationCap;
};

/// Checks coverage of G minus the hole (exact occurrence counts), hole
/// avoidance, and every row and column sum. Failures are ordered by array,
/// then row, then column.
VerifyReport verify(const RectSet& s, const VerifyOptions& options = {});

/// Throws VerificationFailed carrying the first failures when verify fails.
void require_verified(const RectSet& s, const std::string& what, const VerifyOptions& options = {});

RectSet transpose(const RectSet& s);

/// Stacks consecutive groups of `group_size` arrays vertically.
RectSet stack(const RectSet& s, int group_size);

/// Concatenates consecutive groups of `group_size` arrays side by side.
RectSet hconcat(const RectSet& s, int group_size);

/// Applies a group isomorphism `phi` into `target` to every entry, to gamma
/// and delta, and to the hole generators.
RectSet map_entries(const RectSet& s, const Group& target, const std::function<Element(const Element&)>& phi);

/// Rewrites `s` into another presentation of the same abstract group through
/// both primary decompositions. Throws PreconditionError if the canonical
/// forms differ.
RectSet relabel(const RectSet& s, const Group& target);

/// The coordinate map used by relabel.
std::function<Element(const Element&)> presentation_map(const Group& from, const Group& to);

}  // namespace mrs

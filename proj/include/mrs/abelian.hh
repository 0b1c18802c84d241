#pragma once

// Finite abelian groups presented as ordered direct sums of cyclic groups.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mrs {

/// Largest group order `enumerate` and friends will walk by default.
inline constexpr std::int64_t kDefaultEnumerationCap = std::int64_t{1} << 22;

/// Residue vector; coordinate i lives in Z_{n_i} of the owning group.
struct Element {
  std::vector<std::int64_t> coords;

  Element() = default;
  explicit Element(std::vector<std::int64_t> c) : coords(std::move(c)) {}
  Element(std::initializer_list<std::int64_t> c) : coords(c) {}

  std::size_t size() const { return coords.size(); }
  std::int64_t operator[](std::size_t i) const { return coords[i]; }
  std::int64_t& operator[](std::size_t i) { return coords[i]; }

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

std::string to_string(const Element& x);

class Group {
 public:
  Group() = default;
  /// Throws ParseError on a factor < 1.
  explicit Group(std::vector<std::int64_t> factors);
  Group(std::initializer_list<std::int64_t> factors)
      : Group(std::vector<std::int64_t>(factors)) {}

  const std::vector<std::int64_t>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  std::int64_t order() const { return order_; }
  std::int64_t exponent() const;

  /// "Z4+Z2"; the empty presentation prints as "Z1".
  std::string to_string() const;

  /// Prime-power factors sorted by (prime, power), trivial factors dropped.
  Group canonical() const;
  bool isomorphic_to(const Group& other) const;

  Element zero() const;
  bool contains(const Element& x) const;
  /// Reduces arbitrary integers coordinate-wise into the group.
  Element reduce(std::vector<std::int64_t> raw) const;

  Element add(const Element& x, const Element& y) const;
  Element sub(const Element& x, const Element& y) const;
  Element neg(const Element& x) const;
  Element scalar_mul(std::int64_t k, const Element& x) const;
  std::int64_t element_order(const Element& x) const;
  /// Sum of every element of the group.
  Element total_sum() const;

  /// Mixed-radix rank in lexicographic coordinate order.
  std::int64_t index_of(const Element& x) const;
  Element element_at(std::int64_t index) const;
  /// Every element once, lexicographically. Throws CapExceeded above `cap`.
  std::vector<Element> enumerate(std::int64_t cap = kDefaultEnumerationCap) const;

  friend bool operator==(const Group&, const Group&) = default;

 private:
  void check(const Element& x) const;

  std::vector<std::int64_t> factors_;
  std::int64_t order_ = 1;
};

/// Parses `Z<n>("+"Z<n>)*`, case-insensitive, whitespace ignored.
Group parse_group(std::string_view spec);

/// Bijective coordinate map between two presentations of one abstract group.
/// Target coordinate k is source coordinate `source_index[k]` reduced modulo
/// the k-th target factor; the inverse recombines with CRT.
class Isomorphism {
 public:
  Isomorphism() = default;
  Isomorphism(Group source, Group target, std::vector<std::size_t> source_index);

  const Group& source() const { return source_; }
  const Group& target() const { return target_; }

  Element forward(const Element& x) const;
  Element inverse(const Element& y) const;

 private:
  Group source_;
  Group target_;
  std::vector<std::size_t> source_index_;
  // crt_[k]: multiplier for target coordinate k when rebuilding its source
  // coordinate.
  std::vector<std::int64_t> crt_;
};

struct PrimaryDecomposition {
  Group canonical;
  Isomorphism to_canonical;
};

PrimaryDecomposition primary_decomposition(const Group& g);

/// (S_2, H): the 2-power part and the odd-order complement, both canonical.
std::pair<Group, Group> sylow2(const Group& g);

bool is_cyclic_nontrivial_sylow2(const Group& g);

/// Homomorphism from `source` into `target` given by generator images.
class Embedding {
 public:
  Embedding() = default;
  /// Throws PreconditionError when an image's order does not divide its
  /// source factor.
  Embedding(Group source, Group target, std::vector<Element> generator_images);

  /// Source factor i is taken to be the order of image i.
  static Embedding from_images(Group target, std::vector<Element> generator_images);

  const Group& source() const { return source_; }
  const Group& target() const { return target_; }
  const std::vector<Element>& generator_images() const { return images_; }

  Element apply(const Element& x) const;
  /// Image set, lexicographic by source element.
  std::vector<Element> image(std::int64_t cap = kDefaultEnumerationCap) const;
  bool is_injective(std::int64_t cap = kDefaultEnumerationCap) const;

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  Group source_;
  Group target_;
  std::vector<Element> images_;
};

/// Integer helpers shared by the other modules.
std::int64_t mod(std::int64_t x, std::int64_t n);
std::int64_t gcd64(std::int64_t x, std::int64_t y);
std::int64_t lcm64(std::int64_t x, std::int64_t y);
bool is_prime(std::int64_t n);
/// Ascending (prime, exponent) pairs.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
bool is_power_of_two(std::int64_t n);

/// One canonical representative per isomorphism type of order n.
std::vector<Group> abelian_groups_of_order(std::int64_t n);

}  // namespace mrs

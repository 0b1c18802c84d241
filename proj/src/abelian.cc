#include "mrs/abelian.hh"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "mrs/error.hh"

namespace mrs {

std::int64_t mod(std::int64_t x, std::int64_t n) {
  std::int64_t r = x % n;
  return r < 0 ? r + n : r;
}

std::int64_t gcd64(std::int64_t x, std::int64_t y) { return std::gcd(x, y); }

std::int64_t lcm64(std::int64_t x, std::int64_t y) { return std::lcm(x, y); }

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e > 0) out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_power_of_two(std::int64_t n) { return n >= 1 && (n & (n - 1)) == 0; }

namespace {

// Inverse of x modulo m for gcd(x, m) = 1.
std::int64_t inverse_mod(std::int64_t x, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t old_r = mod(x, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  return mod(old_s, m);
}

std::int64_t mulmod(std::int64_t x, std::int64_t y, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(x) * y % m);
}

}  // namespace

std::string to_string(const Element& x) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
  out << ')';
  return out.str();
}

Group::Group(std::vector<std::int64_t> factors) : factors_(std::move(factors)) {
  for (auto n : factors_) {
    if (n < 1) throw ParseError("cyclic factor order must be >= 1, got " + std::to_string(n));
    order_ *= n;
  }
}

std::int64_t Group::exponent() const {
  std::int64_t e = 1;
  for (auto n : factors_) e = lcm64(e, n);
  return e;
}

std::string Group::to_string() const {
  if (factors_.empty()) return "Z1";
  std::string out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += '+';
    out += 'Z' + std::to_string(factors_[i]);
  }
  return out;
}

Group Group::canonical() const { return primary_decomposition(*this).canonical; }

bool Group::isomorphic_to(const Group& other) const { return canonical() == other.canonical(); }

Element Group::zero() const { return Element(std::vector<std::int64_t>(factors_.size(), 0)); }

bool Group::contains(const Element& x) const {
  if (x.size() != factors_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < 0 || x[i] >= factors_[i]) return false;
  return true;
}

void Group::check(const Element& x) const {
  if (x.size() != factors_.size())
    throw DimensionError("element " + mrs::to_string(x) + " does not match group " + to_string());
}

Element Group::reduce(std::vector<std::int64_t> raw) const {
  Element x(std::move(raw));
  check(x);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod(x[i], factors_[i]);
  return x;
}

Element Group::add(const Element& x, const Element& y) const {
  check(x);
  check(y);
  Element z = x;
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] += y[i];
    if (z[i] >= factors_[i]) z[i] -= factors_[i];
  }
  return z;
}

Element Group::sub(const Element& x, const Element& y) const { return add(x, neg(y)); }

Element Group::neg(const Element& x) const {
  check(x);
  Element z = x;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = z[i] == 0 ? 0 : factors_[i] - z[i];
  return z;
}

Element Group::scalar_mul(std::int64_t k, const Element& x) const {
  check(x);
  Element z = x;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = mulmod(mod(k, factors_[i]), x[i], factors_[i]);
  return z;
}

std::int64_t Group::element_order(const Element& x) const {
  check(x);
  std::int64_t o = 1;
  for (std::size_t i = 0; i < x.size(); ++i) o = lcm64(o, factors_[i] / gcd64(x[i], factors_[i]));
  return o;
}

Element Group::total_sum() const {
  // Z_n sums to n/2 for even n and to 0 otherwise; the total is nonzero only
  // when exactly one factor is even.
  Element s = zero();
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] % 2 != 0) continue;
    std::int64_t copies = order_ / factors_[i];
    s[i] = mulmod(copies % factors_[i], factors_[i] / 2, factors_[i]);
  }
  return s;
}

std::int64_t Group::index_of(const Element& x) const {
  check(x);
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) idx = idx * factors_[i] + x[i];
  return idx;
}

Element Group::element_at(std::int64_t index) const {
  Element x = zero();
  for (std::size_t i = factors_.size(); i-- > 0;) {
    x[i] = index % factors_[i];
    index /= factors_[i];
  }
  return x;
}

std::vector<Element> Group::enumerate(std::int64_t cap) const {
  if (order_ > cap)
    throw CapExceeded("group " + to_string() + " of order " + std::to_string(order_) +
                      " exceeds enumeration cap " + std::to_string(cap));
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(order_));
  for (std::int64_t i = 0; i < order_; ++i) out.push_back(element_at(i));
  return out;
}

Group parse_group(std::string_view spec) {
  std::string s;
  for (char ch : spec)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += static_cast<char>(std::tolower(ch));
  if (s.empty()) throw ParseError("empty group spec");
  std::vector<std::int64_t> factors;
  std::size_t pos = 0;
  while (true) {
    if (pos >= s.size() || s[pos] != 'z')
      throw ParseError("expected 'Z' at offset " + std::to_string(pos) + " in group spec '" +
                       std::string(spec) + "'");
    ++pos;
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start || pos - start > 12)
      throw ParseError("expected a modulus after 'Z' in group spec '" + std::string(spec) + "'");
    std::int64_t n = std::stoll(s.substr(start, pos - start));
    if (n == 0) throw ParseError("zero modulus in group spec '" + std::string(spec) + "'");
    factors.push_back(n);
    if (pos == s.size()) break;
    if (s[pos] != '+')
      throw ParseError("unexpected '" + std::string(1, s[pos]) + "' in group spec '" +
                       std::string(spec) + "'");
    ++pos;
  }
  return Group(std::move(factors));
}

Isomorphism::Isomorphism(Group source, Group target, std::vector<std::size_t> source_index)
    : source_(std::move(source)), target_(std::move(target)), source_index_(std::move(source_index)) {
  if (source_index_.size() != target_.rank())
    throw PreconditionError("isomorphism needs one source index per target factor");
  std::vector<std::int64_t> covered(source_.rank(), 1);
  for (std::size_t k = 0; k < target_.rank(); ++k) {
    std::size_t i = source_index_[k];
    if (i >= source_.rank()) throw PreconditionError("isomorphism source index out of range");
    std::int64_t q = target_.factors()[k];
    if (gcd64(covered[i], q) != 1)
      throw PreconditionError("isomorphism splits a factor into non-coprime parts");
    covered[i] *= q;
  }
  for (std::size_t i = 0; i < source_.rank(); ++i)
    if (covered[i] != source_.factors()[i])
      throw PreconditionError("isomorphism does not split source factor Z" +
                              std::to_string(source_.factors()[i]) + " exactly");
  crt_.resize(target_.rank());
  for (std::size_t k = 0; k < target_.rank(); ++k) {
    std::int64_t n = source_.factors()[source_index_[k]];
    std::int64_t q = target_.factors()[k];
    std::int64_t cofactor = n / q;
    crt_[k] = mulmod(cofactor, inverse_mod(cofactor % q, q), n);
  }
}

Element Isomorphism::forward(const Element& x) const {
  if (!source_.contains(x))
    throw DimensionError("element " + to_string(x) + " not in " + source_.to_string());
  Element y = target_.zero();
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[source_index_[k]] % target_.factors()[k];
  return y;
}

Element Isomorphism::inverse(const Element& y) const {
  if (!target_.contains(y))
    throw DimensionError("element " + to_string(y) + " not in " + target_.to_string());
  Element x = source_.zero();
  for (std::size_t k = 0; k < y.size(); ++k) {
    std::size_t i = source_index_[k];
    std::int64_t n = source_.factors()[i];
    x[i] = (x[i] + mulmod(y[k], crt_[k], n)) % n;
  }
  return x;
}

PrimaryDecomposition primary_decomposition(const Group& g) {
  struct Part {
    std::int64_t prime;
    std::int64_t power;
    std::size_t source;
  };
  std::vector<Part> parts;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    for (auto [prime, e] : factorize(g.factors()[i])) {
      std::int64_t q = 1;
      for (int k = 0; k < e; ++k) q *= prime;
      parts.push_back({prime, q, i});
    }
  }
  std::stable_sort(parts.begin(), parts.end(), [](const Part& x, const Part& y) {
    return std::pair{x.prime, x.power} < std::pair{y.prime, y.power};
  });
  std::vector<std::int64_t> factors;
  std::vector<std::size_t> index;
  for (const auto& part : parts) {
    factors.push_back(part.power);
    index.push_back(part.source);
  }
  Group canonical(factors);
  return {canonical, Isomorphism(g, canonical, std::move(index))};
}

std::pair<Group, Group> sylow2(const Group& g) {
  std::vector<std::int64_t> two, odd;
  const Group canonical = g.canonical();
  for (auto q : canonical.factors()) (q % 2 == 0 ? two : odd).push_back(q);
  return {Group(two), Group(odd)};
}

bool is_cyclic_nontrivial_sylow2(const Group& g) { return sylow2(g).first.rank() == 1; }

Embedding::Embedding(Group source, Group target, std::vector<Element> generator_images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(generator_images)) {
  if (images_.size() != source_.rank())
    throw DimensionError("embedding needs one image per source generator");
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (!target_.contains(images_[i]))
      throw DimensionError("generator image " + to_string(images_[i]) + " not in " +
                           target_.to_string());
    if (source_.factors()[i] % target_.element_order(images_[i]) != 0)
      throw PreconditionError("image of generator " + std::to_string(i) + " has order not dividing " +
                              std::to_string(source_.factors()[i]));
  }
}

Embedding Embedding::from_images(Group target, std::vector<Element> generator_images) {
  std::vector<std::int64_t> orders;
  for (const auto& img : generator_images) {
    if (!target.contains(img))
      throw DimensionError("generator image " + to_string(img) + " not in " + target.to_string());
    orders.push_back(target.element_order(img));
  }
  return Embedding(Group(orders), std::move(target), std::move(generator_images));
}

Element Embedding::apply(const Element& x) const {
  if (!source_.contains(x))
    throw DimensionError("element " + to_string(x) + " not in " + source_.to_string());
  Element y = target_.zero();
  for (std::size_t i = 0; i < images_.size(); ++i) y = target_.add(y, target_.scalar_mul(x[i], images_[i]));
  return y;
}

std::vector<Element> Embedding::image(std::int64_t cap) const {
  std::vector<Element> out;
  for (const auto& x : source_.enumerate(cap)) out.push_back(apply(x));
  return out;
}

bool Embedding::is_injective(std::int64_t cap) const {
  if (target_.order() > cap) throw CapExceeded("embedding target exceeds enumeration cap");
  std::vector<bool> seen(static_cast<std::size_t>(target_.order()), false);
  for (const auto& y : image(cap)) {
    auto idx = static_cast<std::size_t>(target_.index_of(y));
    if (seen[idx]) return false;
    seen[idx] = true;
  }
  return true;
}

namespace {

void partitions(int n, int max_part, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(current);
    return;
  }
  for (int part = std::min(n, max_part); part >= 1; --part) {
    current.push_back(part);
    partitions(n - part, part, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Group> abelian_groups_of_order(std::int64_t n) {
  if (n < 1) throw PreconditionError("abelian_groups_of_order: n must be positive");
  std::vector<std::vector<std::int64_t>> combos{{}};
  for (auto [prime, e] : factorize(n)) {
    std::vector<std::vector<int>> parts;
    std::vector<int> current;
    partitions(e, e, current, parts);
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& prefix : combos)
      for (auto part : parts) {
        std::sort(part.begin(), part.end());
        auto f = prefix;
        for (int k : part) {
          std::int64_t q = 1;
          for (int i = 0; i < k; ++i) q *= prime;
          f.push_back(q);
        }
        next.push_back(std::move(f));
      }
    combos = std::move(next);
  }
  std::vector<Group> out;
  for (auto& f : combos) out.push_back(Group(f).canonical());
  return out;
}

}  // namespace mrs

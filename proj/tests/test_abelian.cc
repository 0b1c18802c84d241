#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "mrs/abelian.hh"
#include "mrs/error.hh"

using namespace mrs;

TEST_CASE("group basics") {
  Group g{4, 6};
  CHECK(g.order() == 24);
  CHECK(g.exponent() == 12);
  CHECK(g.rank() == 2);
  CHECK(g.to_string() == "Z4+Z6");
  CHECK(Group{}.to_string() == "Z1");
  CHECK(Group{}.order() == 1);
  CHECK_THROWS_AS(Group({3, 0}), ParseError);
}

TEST_CASE("parse_group") {
  CHECK(parse_group("Z3+Z2+Z2") == Group{3, 2, 2});
  CHECK(parse_group(" z4 + Z8 ") == Group{4, 8});
  CHECK_THROWS_AS(parse_group("Z0"), ParseError);
  CHECK_THROWS_AS(parse_group("Z3+"), ParseError);
  CHECK_THROWS_AS(parse_group("Q8"), ParseError);
  CHECK_THROWS_AS(parse_group(""), ParseError);
}

TEST_CASE("arithmetic") {
  Group g{3, 8};
  Element x{2, 5};
  Element y{2, 7};
  CHECK(g.add(x, y) == Element{1, 4});
  CHECK(g.sub(x, y) == Element{0, 6});
  CHECK(g.neg(x) == Element{1, 3});
  CHECK(g.scalar_mul(3, x) == Element{0, 7});
  CHECK(g.scalar_mul(-1, x) == g.neg(x));
  CHECK(g.element_order(Element{1, 2}) == 12);
  CHECK(g.element_order(g.zero()) == 1);
  CHECK(g.reduce({-1, 17}) == Element{2, 1});
  CHECK_THROWS_AS(g.add(Element{1}, y), DimensionError);
}

TEST_CASE("total_sum matches brute force") {
  for (auto factors : std::vector<std::vector<std::int64_t>>{{2}, {3}, {2, 2}, {4, 2}, {3, 2, 2}, {8}, {6, 4}, {5, 5}}) {
    Group g(factors);
    Element sum = g.zero();
    for (const auto& x : g.enumerate()) sum = g.add(sum, x);
    CHECK(g.total_sum() == sum);
  }
}

TEST_CASE("index_of round trip") {
  Group g{3, 4, 2};
  auto all = g.enumerate();
  REQUIRE(all.size() == 24);
  CHECK(all.front() == g.zero());
  CHECK(all[1] == Element{0, 0, 1});
  for (std::int64_t i = 0; i < g.order(); ++i) {
    CHECK(g.index_of(all[static_cast<std::size_t>(i)]) == i);
    CHECK(g.element_at(i) == all[static_cast<std::size_t>(i)]);
  }
  CHECK_THROWS_AS(g.enumerate(10), CapExceeded);
}

TEST_CASE("canonical form") {
  CHECK(Group{12, 2}.canonical() == Group{2, 4, 3});
  CHECK(Group{6}.canonical() == Group{2, 3});
  CHECK(Group{1, 1}.canonical() == Group{});
  CHECK(Group{6, 4}.isomorphic_to(Group{2, 12}));
  CHECK_FALSE(Group{4}.isomorphic_to(Group{2, 2}));
}

TEST_CASE("primary decomposition is a bijective homomorphism") {
  for (auto factors : std::vector<std::vector<std::int64_t>>{{12, 2}, {6, 10}, {24}, {3, 2, 2}, {30, 4}}) {
    Group g(factors);
    auto pd = primary_decomposition(g);
    CHECK(pd.canonical == g.canonical());
    std::set<Element> images;
    std::mt19937 rng(7);
    auto all = g.enumerate();
    for (const auto& x : all) {
      Element y = pd.to_canonical.forward(x);
      CHECK(pd.canonical.contains(y));
      CHECK(pd.to_canonical.inverse(y) == x);
      images.insert(y);
    }
    CHECK(images.size() == all.size());
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int t = 0; t < 50; ++t) {
      const Element& x = all[pick(rng)];
      const Element& y = all[pick(rng)];
      CHECK(pd.to_canonical.forward(g.add(x, y)) ==
            pd.canonical.add(pd.to_canonical.forward(x), pd.to_canonical.forward(y)));
    }
  }
}

TEST_CASE("sylow2") {
  auto [s2, h] = sylow2(Group{12, 2});
  CHECK(s2 == Group{2, 4});
  CHECK(h == Group{3});
  CHECK(is_cyclic_nontrivial_sylow2(Group{12}));
  CHECK(is_cyclic_nontrivial_sylow2(Group{3, 2}));
  CHECK_FALSE(is_cyclic_nontrivial_sylow2(Group{6, 2}));
  CHECK_FALSE(is_cyclic_nontrivial_sylow2(Group{15}));
}

TEST_CASE("embedding") {
  Group g{6, 8};
  auto e = Embedding::from_images(g, {Element{1, 0}, Element{0, 4}});
  CHECK(e.source() == Group{6, 2});
  CHECK(e.is_injective());
  auto img = e.image();
  CHECK(img.size() == 12);
  for (const auto& x : img) CHECK((x[1] == 0 || x[1] == 4));
  CHECK_THROWS_AS(Embedding(Group{4}, g, {Element{0, 3}}), PreconditionError);
  Embedding collapse(Group{4}, g, {Element{0, 4}});
  CHECK_FALSE(collapse.is_injective());
}

TEST_CASE("integer helpers") {
  CHECK(mod(-7, 3) == 2);
  CHECK(gcd64(12, 18) == 6);
  CHECK(lcm64(4, 6) == 12);
  CHECK(is_prime(2));
  CHECK(is_prime(101));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
  CHECK(factorize(360) == std::vector<std::pair<std::int64_t, int>>{{2, 3}, {3, 2}, {5, 1}});
  CHECK(is_power_of_two(64));
  CHECK_FALSE(is_power_of_two(12));
}

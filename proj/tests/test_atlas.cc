#include <doctest.h>

#include <set>

#include "mrs/atlas.hh"
#include "mrs/error.hh"
#include "mrs/json_io.hh"

using namespace mrs;
using namespace mrs::atlas;

namespace {

RectSet fixture(const std::string& name) { return read_rect_set(std::string(MRS_FIXTURE_DIR) + "/" + name + ".json"); }

std::vector<int> odd_primes_up_to(int n, int from = 3) {
  std::vector<int> out;
  for (int p = from; p <= n; ++p)
    if (p % 2 == 1 && is_prime(p)) out.push_back(p);
  return out;
}

void check_imrs(const RectSet& s) {
  auto report = verify(s, {.zero_sum = true});
  for (const auto& f : report.failures) INFO(to_string(f.kind), " ", f.location(), " ", f.detail);
  CHECK(report.ok);
}

}  // namespace

TEST_CASE("entry evaluator") {
  CHECK(evaluate_entry("(2p-1,-x)", {{'p', 5}, {'x', 3}}) == std::vector<std::int64_t>{9, -3});
  CHECK(evaluate_entry("(p+2,3)", {{'p', 7}}) == std::vector<std::int64_t>{9, 3});
  CHECK(evaluate_entry("(0,1,1)", {}) == std::vector<std::int64_t>{0, 1, 1});
  CHECK_THROWS_AS(evaluate_entry("(q,1)", {{'p', 3}}), ParseError);
  CHECK_THROWS_AS(evaluate_entry("1,2", {}), ParseError);
  CHECK_THROWS_AS(evaluate_entry("(1,)", {}), ParseError);
}

TEST_CASE("displayed arrays match the fixtures") {
  CHECK(base_3_2_2() == fixture("base_3_2_2"));
  CHECK(base_3_2_2().arrays[0].at(0, 1) == Element{0, 1, 0});
  CHECK(family_p_2_4(5) == fixture("family_p_2_4_p5"));
  CHECK(imrs_p_2_8(3) == fixture("imrs_p_2_8_p3"));
  CHECK(imrs_p_2_8(5) == fixture("imrs_p_2_8_p5"));
  CHECK(imrs_p_4_8(3) == fixture("imrs_p_4_8_p3"));
  CHECK(imrs_p_4_8(5) == fixture("imrs_p_4_8_p5"));
  CHECK(imrs_p_8_8_complement(3) == fixture("imrs_p_8_8_p3"));
}

TEST_CASE("fixtures verify on their own") {
  for (const char* name : {"base_3_2_2", "family_p_2_4_p5", "imrs_p_2_8_p3", "imrs_p_2_8_p5", "imrs_p_4_8_p3",
                           "imrs_p_4_8_p5", "imrs_p_8_8_p3"}) {
    INFO(name);
    check_imrs(fixture(name));
  }
  CHECK(hole_elements(fixture("imrs_p_8_8_p3").hole).size() == 84);
}

TEST_CASE("every family verifies for odd primes up to 31") {
  check_imrs(base_3_2_2());
  for (int p : odd_primes_up_to(31)) {
    CAPTURE(p);
    if (p >= 5) check_imrs(family_p_2_4(p));
    check_imrs(imrs_p_2_8(p));
    check_imrs(imrs_p_4_8(p));
    check_imrs(imrs_p_8_8_complement(p));
  }
}

TEST_CASE("shapes and block counts") {
  auto s = family_p_2_4(13);
  CHECK(s.c() == 2);
  CHECK(s.a == 13);
  CHECK(imrs_p_2_8(11).c() == 3);
  CHECK(imrs_p_4_8(7).c() == 6);
  CHECK(imrs_p_8_8_complement(7).c() == 9);
  CHECK(imrs_p_8_8_complement(7).a == 7);
  CHECK_THROWS_AS(family_p_2_4(3), PreconditionError);
  CHECK_THROWS_AS(imrs_p_2_8(9), PreconditionError);
}

TEST_CASE("filler schemes") {
  CHECK(filler_p_2_4(7).blocks == std::vector<std::vector<std::int64_t>>{{3, 11}, {4, 10}});
  CHECK(filler_p_2_4(7).excluded == std::vector<std::int64_t>{0, 1, 2, 5, 6, 7, 8, 9, 12, 13});
  CHECK(filler_p_2_8(11).blocks == std::vector<std::vector<std::int64_t>>{{3, 4, 19, 18}, {5, 6, 17, 16}, {7, 8, 15, 14}});
  CHECK(filler_p_4_8(7).blocks == std::vector<std::vector<std::int64_t>>{{3, 4, 10, 11, 25, 24, 18, 17}});
  CHECK(filler_p_8_8(5).blocks == std::vector<std::vector<std::int64_t>>{{2, 3}});
  CHECK(filler_p_8_8(7).blocks == std::vector<std::vector<std::int64_t>>{{2, 5}, {3, 4}});
  for (int p : odd_primes_up_to(101)) {
    CAPTURE(p);
    if (p >= 5) {
      CHECK(filler_is_partition(filler_p_2_4(p)));
      CHECK(static_cast<int>(filler_p_2_4(p).blocks.size()) == p - 5);
      CHECK(filler_is_partition(filler_p_2_8(p)));
      CHECK(static_cast<int>(filler_p_2_8(p).blocks.size()) == (p - 5) / 2);
      CHECK(filler_is_partition(filler_p_4_8(p)));
      CHECK(static_cast<int>(filler_p_4_8(p).blocks.size()) == (p - 5) / 2);
    }
    CHECK(filler_is_partition(filler_p_8_8(p)));
    CHECK(static_cast<int>(filler_p_8_8(p).blocks.size()) == (p - 3) / 2);
  }
  FillerScheme broken = filler_p_2_4(7);
  broken.blocks[0] = {3, 10};
  CHECK_FALSE(filler_is_partition(broken));
}

TEST_CASE("c pattern") {
  auto j = nlohmann::json::parse(R"({"c3": [[3,-3,2,-2,1,-1],[-2,2,1,-1,-3,3],[-1,1,-3,3,2,-2]],
                                     "c2": [[3,-3,2,-2,1,-1],[-3,3,-2,2,-1,1]]})");
  auto c3 = c_pattern(3);
  REQUIRE(c3.grid.size() == 3);
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 6; ++l) CHECK(c3.at(i, l) == j["c3"][i][l].get<int>());
  auto c5 = c_pattern(5);
  for (int i = 3; i < 5; ++i)
    for (int l = 0; l < 6; ++l) CHECK(c5.at(i, l) == j["c2"][i - 3][l].get<int>());
  for (int p = 3; p <= 101; p += 2) CHECK(c_pattern_invariants_hold(c_pattern(p)));
  CHECK_THROWS_AS(c_pattern(4), PreconditionError);
}

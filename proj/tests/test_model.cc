#include <doctest.h>

#include <filesystem>

#include "mrs/error.hh"
#include "mrs/json_io.hh"
#include "mrs/model.hh"

using namespace mrs;

namespace {

// 2x2 over Z4, rows (0,1),(3,2): row sums are 1, so gamma = 2 is wrong
// everywhere. Used for failure reporting only.
RectSet tiny() {
  RectSet s;
  s.group = Group{4};
  s.a = 2;
  s.b = 2;
  s.gamma = Element{2};
  s.delta = Element{3};
  s.arrays.emplace_back(2, 2, std::vector<Element>{{0}, {1}, {3}, {2}});
  return s;
}

}  // namespace

TEST_CASE("verify accepts a magic set and rejects a perturbed copy") {
  // 2x2 over Z2+Z2: single array [[0,(1,1)],[(1,0),(0,1)]] has row sums
  // (1,1),(1,1) and column sums (1,0),(1,0).
  RectSet s;
  s.group = Group{2, 2};
  s.a = 2;
  s.b = 2;
  s.gamma = Element{1, 1};
  s.delta = Element{1, 0};
  s.arrays.emplace_back(2, 2, std::vector<Element>{{0, 0}, {1, 1}, {1, 0}, {0, 1}});
  auto report = verify(s);
  CHECK(report.ok);
  CHECK_FALSE(verify(s, {.zero_sum = true}).ok);

  RectSet bad = s;
  std::swap(bad.arrays[0].at(0, 0), bad.arrays[0].at(0, 1));
  auto r2 = verify(bad);
  CHECK_FALSE(r2.ok);
  CHECK(r2.has(FailureKind::col_sum));
  CHECK_FALSE(r2.has(FailureKind::row_sum));
}

TEST_CASE("verify reports duplicates, holes and missing elements") {
  RectSet s = tiny();
  s.arrays[0].at(1, 1) = Element{0};
  auto r = verify(s);
  CHECK(r.has(FailureKind::coverage_duplicate));
  CHECK(r.has(FailureKind::coverage_missing));

  RectSet h = tiny();
  h.hole.subgroups.push_back(Embedding::from_images(h.group, {Element{2}}));
  auto rh = verify(h);
  CHECK(rh.has(FailureKind::hole_violation));
  CHECK(rh.has(FailureKind::shape));

  RectSet shape = tiny();
  shape.arrays[0] = RectArray(1, 4, std::vector<Element>{{0}, {1}, {2}, {3}});
  CHECK(verify(shape).has(FailureKind::shape));

  RectSet foreign = tiny();
  foreign.arrays[0].at(0, 0) = Element{0, 0};
  CHECK(verify(foreign).has(FailureKind::shape));
}

TEST_CASE("failures are ordered by array, row, column") {
  RectSet s = tiny();
  auto r = verify(s);
  REQUIRE_FALSE(r.ok);
  for (std::size_t i = 1; i < r.failures.size(); ++i) {
    const auto& x = r.failures[i - 1];
    const auto& y = r.failures[i];
    CHECK(std::tuple{x.array, x.row, x.col} <= std::tuple{y.array, y.row, y.col});
  }
  CHECK_THROWS_AS(require_verified(s, "tiny"), VerificationFailed);
}

TEST_CASE("transpose, stack and hconcat preserve validity") {
  RectSet s;
  s.group = Group{2, 2};
  s.a = 2;
  s.b = 2;
  s.gamma = Element{1, 1};
  s.delta = Element{1, 0};
  s.arrays.emplace_back(2, 2, std::vector<Element>{{0, 0}, {1, 1}, {1, 0}, {0, 1}});
  RectSet t = transpose(s);
  CHECK(t.a == 2);
  CHECK(t.gamma == s.delta);
  CHECK(verify(t).ok);
  CHECK(transpose(t) == s);
  CHECK(verify(stack(s, 1)).ok);
  CHECK_THROWS_AS(stack(s, 2), PreconditionError);
  CHECK_THROWS_AS(hconcat(s, 0), PreconditionError);
}

TEST_CASE("relabel between presentations") {
  RectSet s;
  s.group = Group{2, 2};
  s.a = 2;
  s.b = 2;
  s.gamma = Element{1, 1};
  s.delta = Element{1, 0};
  s.arrays.emplace_back(2, 2, std::vector<Element>{{0, 0}, {1, 1}, {1, 0}, {0, 1}});
  RectSet r = relabel(s, Group{2, 2, 1});
  CHECK(r.group == Group{2, 2, 1});
  CHECK(verify(r).ok);
  CHECK_THROWS_AS(relabel(s, Group{4}), PreconditionError);
}

TEST_CASE("json round trip") {
  RectSet s = tiny();
  s.hole.subgroups.push_back(Embedding::from_images(s.group, {Element{2}}));
  auto j = to_json(s);
  CHECK(j["c"] == 1);
  RectSet back = rect_set_from_json(j);
  CHECK(back == s);

  auto broken = j;
  broken["c"] = 2;
  CHECK_THROWS_AS(rect_set_from_json(broken), ParseError);
  broken = j;
  broken["arrays"][0][0][0] = nlohmann::json::array({1, 2});
  CHECK_THROWS_AS(rect_set_from_json(broken), ParseError);
  broken = j;
  broken.erase("group");
  CHECK_THROWS_AS(rect_set_from_json(broken), ParseError);
  CHECK_THROWS_AS(rect_set_from_json(nlohmann::json::parse("[1,2]")), ParseError);
}

TEST_CASE("csv and pretty output") {
  RectSet s = tiny();
  CHECK(to_csv(s) == "array,row,c0,c1\n0,0,0,1\n0,1,3,2\n");
  auto pretty = to_pretty(s);
  CHECK(pretty.find("Z4") != std::string::npos);
  CHECK(pretty.find("(3)") != std::string::npos);
}

TEST_CASE("atomic write") {
  auto dir = std::filesystem::temp_directory_path() / "mrs_model_test";
  std::filesystem::remove_all(dir);
  auto path = (dir / "sub" / "x.json").string();
  write_file_atomic(path, "{}");
  write_file_atomic(path, "[]");
  CHECK(std::filesystem::file_size(path) == 2);
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir / "sub")) ++entries;
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
}

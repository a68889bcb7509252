#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gma/geometry.hpp"
#include "helpers.hpp"

using namespace gma;

// brute-force shared-pixel count
static std::uint64_t pixel_intersection(const Box& a, const Box& b) {
  std::uint64_t n = 0;
  for (int y = std::min(a.y1, b.y1); y < std::max(a.y2, b.y2); ++y)
    for (int x = std::min(a.x1, b.x1); x < std::max(a.x2, b.x2); ++x)
      if (x >= a.x1 && x < a.x2 && y >= a.y1 && y < a.y2 && x >= b.x1 &&
          x < b.x2 && y >= b.y1 && y < b.y2)
        ++n;
  return n;
}

TEST_CASE("area") {
  CHECK(area(Box{0, 0, 1, 1}) == 1);
  CHECK(area(Box{1, 1, 7, 7}) == 36);
  CHECK(area(Box{3, 2, 10, 5}) == 21);
}

TEST_CASE("box intersection area") {
  CHECK(box_intersection_area(Box{0, 0, 2, 2}, Box{0, 0, 2, 2}) == 4);
  CHECK(box_intersection_area(Box{0, 0, 1, 1}, Box{2, 2, 3, 3}) == 0);
  // [1,7)x[1,7) vs [1,5)x[1,7): pixel enumeration gives 24
  const Box a{1, 1, 7, 7}, b{1, 1, 5, 7};
  CHECK(pixel_intersection(a, b) == 24);
  CHECK(box_intersection_area(a, b) == 24);
}

TEST_CASE("iou") {
  CHECK(iou(Box{2, 3, 9, 8}, Box{2, 3, 9, 8}) == doctest::Approx(1.0));
  CHECK(iou(Box{0, 0, 1, 1}, Box{2, 2, 3, 3}) == doctest::Approx(0.0));
  CHECK(iou(Box{1, 1, 7, 7}, Box{1, 1, 5, 7}) ==
        doctest::Approx(24.0 / 36.0));
}

TEST_CASE("giou") {
  CHECK(giou(Box{2, 3, 9, 8}, Box{2, 3, 9, 8}) == doctest::Approx(1.0));
  // disjoint unit boxes: 0 - (9-2)/9
  CHECK(giou(Box{0, 0, 1, 1}, Box{2, 2, 3, 3}) ==
        doctest::Approx(-7.0 / 9.0));
  // nested: enclosing box equals the union's hull, penalty term vanishes
  CHECK(giou(Box{0, 0, 4, 4}, Box{1, 1, 3, 3}) == doctest::Approx(0.25));
}

TEST_CASE("diou") {
  CHECK(diou(Box{2, 3, 9, 8}, Box{2, 3, 9, 8}) == doctest::Approx(1.0));
  CHECK(diou(Box{0, 0, 4, 4}, Box{1, 1, 3, 3}) == doctest::Approx(0.25));
  // d^2 = 8, c^2 = 32
  CHECK(diou(Box{0, 0, 2, 2}, Box{2, 2, 4, 4}) == doctest::Approx(-0.25));
}

TEST_CASE("center") {
  CHECK(center(Box{0, 0, 2, 2}) == std::pair{1.0, 1.0});
  CHECK(center(Box{1, 1, 7, 7}) == std::pair{4.0, 4.0});
  CHECK(center(Box{0, 0, 5, 3}) == std::pair{2.5, 1.5});
  CHECK(center(FloatBox{0.0, 0.0, 5.0, 3.0}) == std::pair{2.5, 1.5});
}

TEST_CASE("randomized properties in a 64x64 frame") {
  std::mt19937_64 rng(1234);
  for (int t = 0; t < 500; ++t) {
    const Box a = gmatest::random_box(rng, 64);
    const Box b = gmatest::random_box(rng, 64);

    CHECK(box_intersection_area(a, b) == pixel_intersection(a, b));
    CHECK(box_intersection_area(a, b) == box_intersection_area(b, a));

    const double i = iou(a, b), g = giou(a, b), d = diou(a, b);
    CHECK(i == iou(b, a));
    CHECK(g == doctest::Approx(giou(b, a)));
    CHECK(d == doctest::Approx(diou(b, a)));

    CHECK(i >= 0.0);
    CHECK(i <= 1.0);
    CHECK(g > -1.0);
    CHECK(g <= i + 1e-12);
    CHECK(d > -1.0);
    CHECK(d <= i + 1e-12);
    const auto [acx, acy] = center(a);
    const auto [bcx, bcy] = center(b);
    if (acx == bcx && acy == bcy) CHECK(d == doctest::Approx(i));

    CHECK(iou(a, a) == doctest::Approx(1.0));
    CHECK(giou(a, a) == doctest::Approx(1.0));
    CHECK(diou(a, a) == doctest::Approx(1.0));
    if (i == 1.0) CHECK(a == b);
  }
}

TEST_CASE("snap covers the fractional box") {
  const auto s = snap_to_grid(FloatBox{1.2, 0.7, 3.1, 2.0}, 8, 8);
  REQUIRE(s.has_value());
  CHECK(*s == Box{1, 0, 4, 2});
  CHECK_FALSE(snap_to_grid(FloatBox{-3.0, -3.0, -1.0, -1.0}, 8, 8));
  CHECK_FALSE(snap_to_grid(FloatBox{9.0, 0.0, 12.0, 2.0}, 8, 8));
}

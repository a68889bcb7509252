#ifndef GMA_TEST_HELPERS_HPP
#define GMA_TEST_HELPERS_HPP

#include <cstdlib>
#include <random>
#include <string>

#include "gma/geometry.hpp"
#include "gma/mask.hpp"

namespace gmatest {

inline gma::Box random_box(std::mt19937_64& rng, int size) {
  std::uniform_int_distribution<int> coord(0, size);
  for (;;) {
    int x1 = coord(rng), x2 = coord(rng);
    int y1 = coord(rng), y2 = coord(rng);
    if (x1 > x2) std::swap(x1, x2);
    if (y1 > y2) std::swap(y1, y2);
    if (x2 > x1 && y2 > y1) return gma::Box{x1, y1, x2, y2};
  }
}

// union of 1..3 random rectangles, never empty
inline gma::RasterMask random_mask(std::mt19937_64& rng, int size) {
  std::uniform_int_distribution<int> coord(0, size - 1);
  gma::RasterMask m(size, size);
  const int rects = 1 + static_cast<int>(rng() % 3);
  for (int r = 0; r < rects; ++r) {
    int x1 = coord(rng), x2 = coord(rng);
    int y1 = coord(rng), y2 = coord(rng);
    if (x1 > x2) std::swap(x1, x2);
    if (y1 > y2) std::swap(y1, y2);
    for (int y = y1; y <= y2; ++y)
      for (int x = x1; x <= x2; ++x) m.set(x, y);
  }
  return m;
}

// independent point-in-polygon oracle: crossing number of the ray going
// right from the query point
inline bool point_in_polygon(const gma::Polygon& poly, double px, double py) {
  const auto& v = poly.vertices;
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > py) != (v[j].y > py)) {
      const double xint =
          v[j].x + (py - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (px < xint) inside = !inside;
    }
  }
  return inside;
}

inline std::string env_or_die(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

}  // namespace gmatest

#endif

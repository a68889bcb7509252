#ifndef GMA_MASK_HPP
#define GMA_MASK_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gma/geometry.hpp"

namespace gma {

/// Binary per-pixel mask inside a width x height image frame.
class RasterMask {
 public:
  RasterMask(int width, int height)
      : width_(width), height_(height),
        bits_(static_cast<std::size_t>(width) * height, 0) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("RasterMask: frame must be at least 1x1");
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool get(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool v = true) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
  }

  std::uint64_t pixel_count() const {
    std::uint64_t n = 0;
    for (auto b : bits_) n += b;
    return n;
  }

  /// Tight bounding box of the set pixels. Throws on an empty mask.
  Box tight_box() const;

  bool operator==(const RasterMask&) const = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

/// Prefix-sum table over a mask: entry (i,j) counts set pixels in
/// [0,i) x [0,j). Size (width+1) x (height+1); rectangle sums are O(1).
class IntegralImage {
 public:
  explicit IntegralImage(const RasterMask& mask);

  /// Test hook: wrap a raw (width+1)*(height+1) table, x-major.
  static IntegralImage from_raw(int width, int height,
                                std::vector<std::uint64_t> table);

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint64_t at(int i, int j) const {
    return table_[static_cast<std::size_t>(i) * (height_ + 1) + j];
  }

  /// Total set pixels of the source mask; the table's last entry.
  std::uint64_t total() const { return at(width_, height_); }

 private:
  IntegralImage(int width, int height)
      : width_(width), height_(height),
        table_(static_cast<std::size_t>(width + 1) * (height + 1), 0) {}

  int width_;
  int height_;
  std::vector<std::uint64_t> table_;
};

/// Ordered real-valued vertices, implicitly closed. Carrier for COCO
/// polygon segmentations.
struct Polygon {
  struct Point {
    double x = 0.0;
    double y = 0.0;
  };
  std::vector<Point> vertices;
};

/// Scanline even-odd rasterization sampled at pixel centers (x+0.5, y+0.5).
/// Multi-part shapes rasterize each part and OR the results.
RasterMask rasterize(const std::vector<Polygon>& parts, int width, int height);
RasterMask rasterize(const Polygon& poly, int width, int height);

inline IntegralImage build_integral(const RasterMask& mask) {
  return IntegralImage(mask);
}

inline std::uint64_t mask_area(const IntegralImage& ii) { return ii.total(); }

/// Set-pixel count inside box b via the four-corner lookup. The box is
/// clipped to the frame first; a box fully outside yields 0.
std::uint64_t box_mask_intersection(const IntegralImage& ii, const Box& b);

}  // namespace gma

#endif

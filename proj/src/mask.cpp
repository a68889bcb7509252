#include "gma/mask.hpp"

#include <algorithm>
#include <cmath>

namespace gma {

Box RasterMask::tight_box() const {
  int minx = width_, miny = height_, maxx = -1, maxy = -1;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (!get(x, y)) continue;
      minx = std::min(minx, x);
      miny = std::min(miny, y);
      maxx = std::max(maxx, x);
      maxy = std::max(maxy, y);
    }
  }
  if (maxx < 0) throw std::invalid_argument("tight_box: empty mask");
  return Box{minx, miny, maxx + 1, maxy + 1};
}

IntegralImage::IntegralImage(const RasterMask& mask)
    : IntegralImage(mask.width(), mask.height()) {
  const int h1 = height_ + 1;
  for (int i = 1; i <= width_; ++i) {
    for (int j = 1; j <= height_; ++j) {
      const std::uint64_t bit = mask.get(i - 1, j - 1) ? 1 : 0;
      table_[static_cast<std::size_t>(i) * h1 + j] =
          bit + table_[static_cast<std::size_t>(i - 1) * h1 + j] +
          table_[static_cast<std::size_t>(i) * h1 + j - 1] -
          table_[static_cast<std::size_t>(i - 1) * h1 + j - 1];
    }
  }
}

IntegralImage IntegralImage::from_raw(int width, int height,
                                      std::vector<std::uint64_t> table) {
  IntegralImage ii(width, height);
  if (table.size() != ii.table_.size())
    throw std::invalid_argument("from_raw: table size mismatch");
  ii.table_ = std::move(table);
  return ii;
}

std::uint64_t box_mask_intersection(const IntegralImage& ii, const Box& b) {
  const auto c = clip_to_frame(b, ii.width(), ii.height());
  if (!c) return 0;
  return ii.at(c->x2, c->y2) + ii.at(c->x1, c->y1) - ii.at(c->x2, c->y1) -
         ii.at(c->x1, c->y2);
}

namespace {

// One scanline of even-odd fill at y-center yc: collect edge crossings,
// sort, set pixels whose center lies between crossing pairs.
void fill_scanline(const Polygon& poly, double yc, int y, int width,
                   RasterMask& out) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  std::vector<double> xs;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % n];
    if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y)) {
      xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
    }
  }
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
    // pixel centers x+0.5 in [xs[i], xs[i+1])
    int x_lo = static_cast<int>(std::ceil(xs[i] - 0.5));
    int x_hi = static_cast<int>(std::ceil(xs[i + 1] - 0.5));  // exclusive
    x_lo = std::max(x_lo, 0);
    x_hi = std::min(x_hi, width);
    for (int x = x_lo; x < x_hi; ++x) out.set(x, y);
  }
}

}  // namespace

RasterMask rasterize(const std::vector<Polygon>& parts, int width,
                     int height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("rasterize: frame must be at least 1x1");
  for (const auto& p : parts) {
    if (p.vertices.size() < 3)
      throw std::invalid_argument("rasterize: polygon needs >= 3 vertices");
  }
  RasterMask out(width, height);
  for (const auto& p : parts) {
    for (int y = 0; y < height; ++y) {
      fill_scanline(p, y + 0.5, y, width, out);
    }
  }
  return out;
}

RasterMask rasterize(const Polygon& poly, int width, int height) {
  return rasterize(std::vector<Polygon>{poly}, width, height);
}

}  // namespace gma

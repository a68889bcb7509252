#include "gma/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>

namespace gma::oracle {

PixelSet PixelSet::from_mask(const RasterMask& m) {
  PixelSet p;
  p.width = m.width();
  p.height = m.height();
  p.bits.assign(static_cast<std::size_t>(p.width) * p.height, 0);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x)
      if (m.get(x, y)) p.set(x, y);
  return p;
}

PixelSet PixelSet::from_box(const Box& b, int width, int height) {
  PixelSet p;
  p.width = width;
  p.height = height;
  p.bits.assign(static_cast<std::size_t>(width) * height, 0);
  const auto c = clip_to_frame(b, width, height);
  if (c) {
    for (int y = c->y1; y < c->y2; ++y)
      for (int x = c->x1; x < c->x2; ++x) p.set(x, y);
  }
  return p;
}

std::uint64_t PixelSet::count() const {
  std::uint64_t n = 0;
  for (auto b : bits) n += b;
  return n;
}

std::uint64_t brute_box_mask_intersection(const RasterMask& mask,
                                          const Box& b) {
  const auto c = clip_to_frame(b, mask.width(), mask.height());
  if (!c) return 0;
  std::uint64_t n = 0;
  for (int y = c->y1; y < c->y2; ++y)
    for (int x = c->x1; x < c->x2; ++x)
      if (mask.get(x, y)) ++n;
  return n;
}

ExactRatio brute_gmaiou_general_terms(const Box& anchor, const PixelSet& p,
                                      const RasterMask& mask) {
  const std::uint64_t m = mask.pixel_count();
  if (m == 0)
    throw std::domain_error("brute_gmaiou_general: zero mask area");
  const auto c = clip_to_frame(anchor, mask.width(), mask.height());
  if (!c) return ExactRatio{0, 1};
  const std::uint64_t inter_m = brute_box_mask_intersection(mask, *c);
  std::uint64_t inter_p = 0;
  for (int y = c->y1; y < c->y2; ++y)
    for (int x = c->x1; x < c->x2; ++x)
      if (p.get(x, y)) ++inter_p;
  const std::uint64_t p_area = p.count();
  const std::uint64_t uni = area(*c) + p_area - inter_p;
  return ExactRatio{p_area * inter_m, m * uni};
}

double brute_gmaiou_general(const Box& anchor, const PixelSet& p,
                            const RasterMask& mask) {
  return brute_gmaiou_general_terms(anchor, p, mask).value();
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RasterMask random_blob_mask(std::mt19937_64& rng, int size) {
  // union of a few random rectangles; retried until non-empty
  std::uniform_int_distribution<int> coord(0, size - 1);
  RasterMask m(size, size);
  for (;;) {
    const int rects = 1 + static_cast<int>(rng() % 3);
    for (int r = 0; r < rects; ++r) {
      int x1 = coord(rng), x2 = coord(rng);
      int y1 = coord(rng), y2 = coord(rng);
      if (x1 > x2) std::swap(x1, x2);
      if (y1 > y2) std::swap(y1, y2);
      for (int y = y1; y <= y2; ++y)
        for (int x = x1; x <= x2; ++x) m.set(x, y);
    }
    if (m.pixel_count() > 0) return m;
  }
}

Box random_box(std::mt19937_64& rng, int size) {
  std::uniform_int_distribution<int> coord(0, size);
  for (;;) {
    int x1 = coord(rng), x2 = coord(rng);
    int y1 = coord(rng), y2 = coord(rng);
    if (x1 > x2) std::swap(x1, x2);
    if (y1 > y2) std::swap(y1, y2);
    if (x2 > x1 && y2 > y1) return Box{x1, y1, x2, y2};
  }
}

}  // namespace

BenchmarkReport benchmark_pairing(int n_anchors, int n_gts, int mask_size,
                                  int repeats, std::uint64_t seed) {
  if (n_anchors < 1 || n_gts < 1 || mask_size < 1 || repeats < 1)
    throw std::invalid_argument("benchmark_pairing: all counts >= 1");
  std::mt19937_64 rng(seed);
  std::vector<RasterMask> masks;
  std::vector<Box> gt_boxes;
  masks.reserve(n_gts);
  for (int g = 0; g < n_gts; ++g) {
    masks.push_back(random_blob_mask(rng, mask_size));
    gt_boxes.push_back(masks.back().tight_box());
  }
  std::vector<Box> anchors;
  anchors.reserve(n_anchors);
  for (int a = 0; a < n_anchors; ++a)
    anchors.push_back(random_box(rng, mask_size));

  using clock = std::chrono::steady_clock;
  BenchmarkReport rep;
  volatile double sink = 0.0;  // keep the loops observable

  for (int r = 0; r < repeats; ++r) {
    // brute force: per-pair pixel enumeration of |B n M|
    auto t0 = clock::now();
    double acc = 0.0;
    for (int g = 0; g < n_gts; ++g) {
      const std::uint64_t m = masks[g].pixel_count();
      const std::uint64_t b_area = area(gt_boxes[g]);
      for (const Box& a : anchors) {
        const std::uint64_t inter_m =
            brute_box_mask_intersection(masks[g], a);
        const std::uint64_t uni =
            area(a) + b_area - box_intersection_area(a, gt_boxes[g]);
        acc += static_cast<double>(b_area * inter_m) /
               static_cast<double>(m * uni);
      }
    }
    sink = sink + acc;
    auto t1 = clock::now();

    // fast path: integral image per gt, O(1) lookups per pair
    acc = 0.0;
    for (int g = 0; g < n_gts; ++g) {
      const IntegralImage ii = build_integral(masks[g]);
      const std::uint64_t m = ii.total();
      const std::uint64_t b_area = area(gt_boxes[g]);
      for (const Box& a : anchors) {
        const std::uint64_t inter_m = box_mask_intersection(ii, a);
        const std::uint64_t uni =
            area(a) + b_area - box_intersection_area(a, gt_boxes[g]);
        acc += static_cast<double>(b_area * inter_m) /
               static_cast<double>(m * uni);
      }
    }
    sink = sink + acc;
    auto t2 = clock::now();

    rep.brute_ms.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
    rep.fast_ms.push_back(
        std::chrono::duration<double, std::milli>(t2 - t1).count());
  }
  rep.brute_median_ms = median(rep.brute_ms);
  rep.fast_median_ms = median(rep.fast_ms);
  rep.speedup = rep.brute_median_ms / rep.fast_median_ms;
  return rep;
}

}  // namespace gma::oracle

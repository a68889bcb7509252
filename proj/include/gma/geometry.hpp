#ifndef GMA_GEOMETRY_HPP
#define GMA_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

namespace gma {

/// Axis-aligned box on the integer pixel grid, half-open:
/// covers pixels with x in [x1, x2), y in [y1, y2).
struct Box {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  bool valid() const { return x2 > x1 && y2 > y1; }
  bool operator==(const Box&) const = default;
};

/// Real-valued box, same half-open semantics. Anchor generators produce
/// fractional coordinates; boxes are snapped before any mask lookup.
struct FloatBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  bool valid() const { return x2 > x1 && y2 > y1; }
};

inline std::uint64_t area(const Box& b) {
  return static_cast<std::uint64_t>(b.x2 - b.x1) *
         static_cast<std::uint64_t>(b.y2 - b.y1);
}

inline std::uint64_t box_intersection_area(const Box& a, const Box& b) {
  const int w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const int h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0 || h <= 0) return 0;
  return static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(h);
}

inline Box enclosing_box(const Box& a, const Box& b) {
  return Box{std::min(a.x1, b.x1), std::min(a.y1, b.y1),
             std::max(a.x2, b.x2), std::max(a.y2, b.y2)};
}

inline double iou(const Box& a, const Box& b) {
  const std::uint64_t inter = box_intersection_area(a, b);
  const std::uint64_t uni = area(a) + area(b) - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// GIoU (Rezatofighi et al.): IoU - (|C| - |A u B|) / |C|,
/// C the smallest enclosing box.
inline double giou(const Box& a, const Box& b) {
  const std::uint64_t inter = box_intersection_area(a, b);
  const std::uint64_t uni = area(a) + area(b) - inter;
  const std::uint64_t hull = area(enclosing_box(a, b));
  const double iou_v = static_cast<double>(inter) / static_cast<double>(uni);
  return iou_v - static_cast<double>(hull - uni) / static_cast<double>(hull);
}

inline std::pair<double, double> center(const Box& b) {
  return {0.5 * (b.x1 + b.x2), 0.5 * (b.y1 + b.y2)};
}

inline std::pair<double, double> center(const FloatBox& b) {
  return {0.5 * (b.x1 + b.x2), 0.5 * (b.y1 + b.y2)};
}

/// DIoU (Zheng et al.): IoU - d^2 / c^2, d the center distance,
/// c the enclosing-box diagonal.
inline double diou(const Box& a, const Box& b) {
  const auto [acx, acy] = center(a);
  const auto [bcx, bcy] = center(b);
  const double d2 = (acx - bcx) * (acx - bcx) + (acy - bcy) * (acy - bcy);
  const Box hull = enclosing_box(a, b);
  const double cw = hull.x2 - hull.x1;
  const double ch = hull.y2 - hull.y1;
  const double c2 = cw * cw + ch * ch;
  return iou(a, b) - d2 / c2;
}

/// Clip a box to a width x height frame. Empty result -> nullopt.
inline std::optional<Box> clip_to_frame(const Box& b, int width, int height) {
  Box c{std::max(b.x1, 0), std::max(b.y1, 0), std::min(b.x2, width),
        std::min(b.y2, height)};
  if (!c.valid()) return std::nullopt;
  return c;
}

/// Cover-snap: clip to the frame, then round x1,y1 down and x2,y2 up, so
/// every pixel the fractional box touches stays covered. The snapped box is
/// used for all terms of a mask-aware score, box-only ones included.
inline std::optional<Box> snap_to_grid(const FloatBox& b, int width,
                                       int height) {
  const double cx1 = std::max(b.x1, 0.0);
  const double cy1 = std::max(b.y1, 0.0);
  const double cx2 = std::min(b.x2, static_cast<double>(width));
  const double cy2 = std::min(b.y2, static_cast<double>(height));
  if (cx2 <= cx1 || cy2 <= cy1) return std::nullopt;
  Box s{static_cast<int>(std::floor(cx1)), static_cast<int>(std::floor(cy1)),
        static_cast<int>(std::ceil(cx2)), static_cast<int>(std::ceil(cy2))};
  if (!s.valid()) return std::nullopt;
  return s;
}

}  // namespace gma

#endif

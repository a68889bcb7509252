#include "gma/gmaiou.hpp"

#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gma {

GroundTruth make_ground_truth(RasterMask mask, int class_id) {
  if (mask.pixel_count() == 0)
    throw std::invalid_argument("make_ground_truth: empty mask");
  Box box = mask.tight_box();
  IntegralImage ii = build_integral(mask);
  return GroundTruth{box, std::move(mask), std::move(ii), class_id};
}

double mob_ratio(const Box& b, const GroundTruth& gt) {
  const auto c =
      clip_to_frame(b, gt.mask.width(), gt.mask.height());
  if (!c) return 0.0;
  const std::uint64_t inter = box_mask_intersection(gt.integral, *c);
  return static_cast<double>(inter) / static_cast<double>(area(*c));
}

namespace {

ExactRatio terms_impl(const Box& anchor, const GroundTruth& gt,
                      GmaMode mode) {
  const std::uint64_t m = mask_area(gt.integral);
  if (m == 0)
    throw std::domain_error("gmaiou: ground truth with zero mask area");
  const auto c = clip_to_frame(anchor, gt.mask.width(), gt.mask.height());
  if (!c) return ExactRatio{0, 1};
  const std::uint64_t inter_m = box_mask_intersection(gt.integral, *c);
  if (mode == GmaMode::PolyIsBox) {
    const std::uint64_t p = area(gt.box);
    const std::uint64_t uni =
        area(*c) + p - box_intersection_area(*c, gt.box);
    return ExactRatio{p * inter_m, m * uni};
  }
  const std::uint64_t uni = area(*c) + m - inter_m;  // |P| = |M| cancels
  return ExactRatio{inter_m, uni};
}

}  // namespace

double gma_intersection(const Box& anchor, const GroundTruth& gt,
                        GmaMode mode) {
  const std::uint64_t m = mask_area(gt.integral);
  if (m == 0)
    throw std::domain_error("gma_intersection: zero mask area");
  const auto c = clip_to_frame(anchor, gt.mask.width(), gt.mask.height());
  if (!c) return 0.0;
  const std::uint64_t inter_m = box_mask_intersection(gt.integral, *c);
  const std::uint64_t p =
      mode == GmaMode::PolyIsBox ? area(gt.box) : m;
  return static_cast<double>(p) / static_cast<double>(m) *
         static_cast<double>(inter_m);
}

double gma_union(const Box& anchor, const GroundTruth& gt, GmaMode mode) {
  const auto c = clip_to_frame(anchor, gt.mask.width(), gt.mask.height());
  if (!c) {
    return mode == GmaMode::PolyIsBox
               ? static_cast<double>(area(gt.box))
               : static_cast<double>(mask_area(gt.integral));
  }
  if (mode == GmaMode::PolyIsBox) {
    return static_cast<double>(area(*c) + area(gt.box) -
                               box_intersection_area(*c, gt.box));
  }
  return static_cast<double>(area(*c) + mask_area(gt.integral) -
                             box_mask_intersection(gt.integral, *c));
}

ExactRatio gmaiou_terms(const Box& anchor, const GroundTruth& gt,
                        GmaMode mode) {
  return terms_impl(anchor, gt, mode);
}

double gmaiou(const Box& anchor, const GroundTruth& gt, GmaMode mode) {
  return terms_impl(anchor, gt, mode).value();
}

std::uint64_t Histogram2D::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

Histogram2D joint_histogram(std::span<const std::pair<double, double>> scores,
                            int bins) {
  if (bins < 1) throw std::invalid_argument("joint_histogram: bins >= 1");
  Histogram2D h;
  h.bins = bins;
  h.counts.assign(static_cast<std::size_t>(bins) * bins, 0);
  auto bin_of = [bins](double v) {
    int b = static_cast<int>(v * bins);
    return std::min(std::max(b, 0), bins - 1);
  };
  for (const auto& [a, b] : scores) ++h.at(bin_of(a), bin_of(b));
  return h;
}

double score_anchor(const FloatBox& anchor, const GroundTruth& gt,
                    Measure measure) {
  const auto snapped =
      snap_to_grid(anchor, gt.mask.width(), gt.mask.height());
  if (!snapped) return 0.0;
  switch (measure) {
    case Measure::Iou:
      return iou(*snapped, gt.box);
    case Measure::Giou:
      return giou(*snapped, gt.box);
    case Measure::Diou:
      return diou(*snapped, gt.box);
    case Measure::GmaiouBox:
      return gmaiou(*snapped, gt, GmaMode::PolyIsBox);
    case Measure::GmaiouMask:
      return gmaiou(*snapped, gt, GmaMode::PolyIsMask);
  }
  return 0.0;
}

std::vector<double> score_matrix(std::span<const FloatBox> anchors,
                                 std::span<const GroundTruth> gts,
                                 Measure measure, int threads) {
  std::vector<double> out(anchors.size() * gts.size(), 0.0);
  const std::int64_t n = static_cast<std::int64_t>(anchors.size());
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (std::int64_t a = 0; a < n; ++a) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      out[static_cast<std::size_t>(a) * gts.size() + g] =
          score_anchor(anchors[a], gts[g], measure);
    }
  }
  return out;
}

}  // namespace gma

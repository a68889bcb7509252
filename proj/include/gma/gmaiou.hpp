#ifndef GMA_GMAIOU_HPP
#define GMA_GMAIOU_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gma/geometry.hpp"
#include "gma/mask.hpp"

namespace gma {

/// Which polygon carries the ground truth's energy: its bounding box
/// (mask-aware IoU) or the mask itself (box-vs-mask IoU).
enum class GmaMode { PolyIsBox, PolyIsMask };

/// One annotated instance: tight box, raster mask, and the mask's
/// integral image built once at construction.
struct GroundTruth {
  Box box;
  RasterMask mask;
  IntegralImage integral;
  int class_id = 0;
};

/// Builds a GroundTruth from a mask; recomputes the tight box so
/// MOB(box, mask) <= 1 holds exactly. Throws on an empty mask.
GroundTruth make_ground_truth(RasterMask mask, int class_id = 0);

/// Exact integer numerator/denominator of a score, before the division.
struct ExactRatio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

/// a/b vs c/d compared without division.
inline bool ratio_less(const ExactRatio& a, const ExactRatio& b) {
  return static_cast<unsigned __int128>(a.num) * b.den <
         static_cast<unsigned __int128>(b.num) * a.den;
}
inline bool ratio_equal(const ExactRatio& a, const ExactRatio& b) {
  return static_cast<unsigned __int128>(a.num) * b.den ==
         static_cast<unsigned __int128>(b.num) * a.den;
}

/// Mask-over-box ratio |B n M| / |B| of box b against gt's mask.
/// b is clipped to the frame; the clipped box feeds both terms.
double mob_ratio(const Box& b, const GroundTruth& gt);

/// Weighted intersection (|P|/|M|) * |B n M|.
double gma_intersection(const Box& anchor, const GroundTruth& gt,
                        GmaMode mode);

/// Weighted union |B u P|: pure box algebra for PolyIsBox, one integral
/// lookup for PolyIsMask.
double gma_union(const Box& anchor, const GroundTruth& gt, GmaMode mode);

/// Exact terms of the score: num = |P| * |B n M|, den = |M| * |B u P|,
/// with the common |M| factor cancelled for PolyIsMask.
ExactRatio gmaiou_terms(const Box& anchor, const GroundTruth& gt,
                        GmaMode mode);

double gmaiou(const Box& anchor, const GroundTruth& gt, GmaMode mode);

/// Square 2-D count grid over [0,1] x [0,1] score pairs.
struct Histogram2D {
  int bins = 0;
  std::vector<std::uint64_t> counts;  // x-bin major, bins*bins cells

  std::uint64_t& at(int bx, int by) {
    return counts[static_cast<std::size_t>(bx) * bins + by];
  }
  std::uint64_t at(int bx, int by) const {
    return counts[static_cast<std::size_t>(bx) * bins + by];
  }
  std::uint64_t total() const;
};

Histogram2D joint_histogram(std::span<const std::pair<double, double>> scores,
                            int bins);

/// Proximity measures an assigner can rank anchors by.
enum class Measure { Iou, Giou, Diou, GmaiouBox, GmaiouMask };

/// Evaluates one measure for a fractional anchor against a ground truth.
/// The anchor is cover-snapped to the gt's frame; an anchor entirely
/// outside the frame scores 0.
double score_anchor(const FloatBox& anchor, const GroundTruth& gt,
                    Measure measure);

/// Full anchors x gts score grid, anchor-major. OpenMP-parallel over
/// anchors when threads != 1; threads <= 0 means machine parallelism.
std::vector<double> score_matrix(std::span<const FloatBox> anchors,
                                 std::span<const GroundTruth> gts,
                                 Measure measure, int threads = 1);

}  // namespace gma

#endif

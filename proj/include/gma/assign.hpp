#ifndef GMA_ASSIGN_HPP
#define GMA_ASSIGN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gma/geometry.hpp"
#include "gma/gmaiou.hpp"

namespace gma {

/// One pyramid level of the anchor layout. anchors per location =
/// scales x aspect_ratios; anchor width = scale*sqrt(ar), height =
/// scale/sqrt(ar).
struct LevelSpec {
  int stride = 0;
  std::vector<double> scales;
  std::vector<double> aspect_ratios;
};

struct Anchor {
  FloatBox box;
  int level = 0;
};

/// Dense anchors over an image, level-major then row-major then
/// per-location anchor index. Centers always lie inside the frame.
struct AnchorGrid {
  int image_w = 0;
  int image_h = 0;
  std::vector<Anchor> anchors;
  std::vector<std::size_t> level_offsets;  // per level, start index

  std::size_t level_begin(int level) const { return level_offsets[level]; }
  std::size_t level_end(int level) const {
    return level + 1 < static_cast<int>(level_offsets.size())
               ? level_offsets[level + 1]
               : anchors.size();
  }
  int level_count() const { return static_cast<int>(level_offsets.size()); }
};

AnchorGrid generate_anchors(int image_w, int image_h,
                            std::span<const LevelSpec> levels);

/// "yolact-550" (3 anchors/location, strides 8..128) or "atss-550"
/// (1 anchor/location, base scale 8). Throws on unknown names.
std::vector<LevelSpec> anchor_preset(const std::string& name);

struct FixedThresholdConfig {
  double pos_thr = 0.5;  // tau+
  double neg_thr = 0.4;  // tau-

  bool valid() const {
    return 0.0 <= neg_thr && neg_thr <= pos_thr && pos_thr <= 1.0;
  }
};

struct AtssConfig {
  int k = 9;  // candidates per pyramid level
  Measure measure = Measure::Iou;
};

enum class Label : std::uint8_t { Negative, Positive, Ignore };

struct AssignmentResult {
  struct Entry {
    Label label = Label::Negative;
    std::int32_t gt_index = -1;  // valid iff Positive
    double score = 0.0;          // best score seen for this anchor
  };
  std::vector<Entry> entries;
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
  std::uint64_t ignores = 0;
};

/// Per anchor, s = max over gts of the measure; s >= tau+ -> Positive of
/// the argmax gt (ties to the lowest index), s < tau- -> Negative,
/// otherwise Ignore. No ground truths -> all Negative.
AssignmentResult assign_fixed(std::span<const Anchor> anchors,
                              std::span<const GroundTruth> gts,
                              const FixedThresholdConfig& cfg,
                              Measure measure, int threads = 1);

/// ATSS: per gt, top-k nearest-center anchors per level become candidates;
/// adaptive threshold = mean + population stddev of candidate scores;
/// candidates at or above it whose centers lie inside the gt box are
/// positive. Multi-gt conflicts go to the highest score, then lowest gt
/// index. Produces no Ignore labels.
AssignmentResult assign_atss(const AnchorGrid& grid,
                             std::span<const GroundTruth> gts,
                             const AtssConfig& cfg, int threads = 1);

/// Step-(i) candidate indices for one gt (exposed for the invariant that
/// swapping the measure never changes the candidate set).
std::vector<std::size_t> atss_candidates(const AnchorGrid& grid,
                                         const GroundTruth& gt, int k);

}  // namespace gma

#endif

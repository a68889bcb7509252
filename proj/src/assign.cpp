#include "gma/assign.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gma {

AnchorGrid generate_anchors(int image_w, int image_h,
                            std::span<const LevelSpec> levels) {
  if (levels.empty())
    throw std::invalid_argument("generate_anchors: empty level spec");
  AnchorGrid grid;
  grid.image_w = image_w;
  grid.image_h = image_h;
  int level_idx = 0;
  for (const auto& spec : levels) {
    if (spec.stride < 1 || spec.scales.empty() || spec.aspect_ratios.empty())
      throw std::invalid_argument("generate_anchors: bad level spec");
    const int fw = (image_w + spec.stride - 1) / spec.stride;
    const int fh = (image_h + spec.stride - 1) / spec.stride;
    if (fw < 1 || fh < 1)
      throw std::invalid_argument("generate_anchors: empty feature grid");
    grid.level_offsets.push_back(grid.anchors.size());
    for (int row = 0; row < fh; ++row) {
      for (int col = 0; col < fw; ++col) {
        // (col+0.5)/fw keeps every center inside the frame even when the
        // stride does not divide the image size.
        const double cx = (col + 0.5) * image_w / fw;
        const double cy = (row + 0.5) * image_h / fh;
        for (double scale : spec.scales) {
          for (double ar : spec.aspect_ratios) {
            const double w = scale * std::sqrt(ar);
            const double h = scale / std::sqrt(ar);
            grid.anchors.push_back(Anchor{
                FloatBox{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w,
                         cy + 0.5 * h},
                level_idx});
          }
        }
      }
    }
    ++level_idx;
  }
  return grid;
}

std::vector<LevelSpec> anchor_preset(const std::string& name) {
  if (name == "yolact-550") {
    std::vector<LevelSpec> levels;
    const int strides[] = {8, 16, 32, 64, 128};
    const double scales[] = {24, 48, 96, 192, 384};
    for (int i = 0; i < 5; ++i) {
      levels.push_back(
          LevelSpec{strides[i], {scales[i]}, {1.0, 0.5, 2.0}});
    }
    return levels;
  }
  if (name == "atss-550") {
    std::vector<LevelSpec> levels;
    for (int stride : {8, 16, 32, 64, 128}) {
      levels.push_back(LevelSpec{stride, {8.0 * stride}, {1.0}});
    }
    return levels;
  }
  throw std::invalid_argument("unknown anchor preset: " + name);
}

AssignmentResult assign_fixed(std::span<const Anchor> anchors,
                              std::span<const GroundTruth> gts,
                              const FixedThresholdConfig& cfg,
                              Measure measure, int threads) {
  if (!cfg.valid())
    throw std::invalid_argument("assign_fixed: need 0 <= tau- <= tau+ <= 1");
  AssignmentResult res;
  res.entries.resize(anchors.size());
  const std::int64_t n = static_cast<std::int64_t>(anchors.size());
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (std::int64_t a = 0; a < n; ++a) {
    double best = 0.0;
    std::int32_t best_gt = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double s = score_anchor(anchors[a].box, gts[g], measure);
      if (best_gt < 0 || s > best) {
        best = s;
        best_gt = static_cast<std::int32_t>(g);
      }
    }
    auto& e = res.entries[a];
    e.score = best_gt < 0 ? 0.0 : best;
    if (best_gt >= 0 && best >= cfg.pos_thr) {
      e.label = Label::Positive;
      e.gt_index = best_gt;
    } else if (best_gt >= 0 && best >= cfg.neg_thr) {
      e.label = Label::Ignore;
    } else {
      e.label = Label::Negative;
    }
  }
  for (const auto& e : res.entries) {
    if (e.label == Label::Positive) ++res.positives;
    else if (e.label == Label::Ignore) ++res.ignores;
    else ++res.negatives;
  }
  return res;
}

std::vector<std::size_t> atss_candidates(const AnchorGrid& grid,
                                         const GroundTruth& gt, int k) {
  const auto [gcx, gcy] = center(gt.box);
  std::vector<std::size_t> out;
  for (int level = 0; level < grid.level_count(); ++level) {
    const std::size_t b = grid.level_begin(level);
    const std::size_t e = grid.level_end(level);
    std::vector<std::size_t> idx(e - b);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = b + i;
    auto dist2 = [&](std::size_t i) {
      const auto [cx, cy] = center(grid.anchors[i].box);
      return (cx - gcx) * (cx - gcx) + (cy - gcy) * (cy - gcy);
    };
    const std::size_t take = std::min<std::size_t>(k, idx.size());
    // distance ties broken by anchor index for determinism
    std::partial_sort(idx.begin(), idx.begin() + take, idx.end(),
                      [&](std::size_t a, std::size_t b2) {
                        const double da = dist2(a), db = dist2(b2);
                        return da < db || (da == db && a < b2);
                      });
    out.insert(out.end(), idx.begin(), idx.begin() + take);
  }
  return out;
}

AssignmentResult assign_atss(const AnchorGrid& grid,
                             std::span<const GroundTruth> gts,
                             const AtssConfig& cfg, int threads) {
  if (cfg.k < 1) throw std::invalid_argument("assign_atss: k >= 1");
  AssignmentResult res;
  res.entries.resize(grid.anchors.size());

  struct Claim {
    double score = 0.0;
    std::int32_t gt = -1;
  };
  std::vector<std::vector<std::pair<std::size_t, double>>> kept(gts.size());

  const std::int64_t ng = static_cast<std::int64_t>(gts.size());
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (std::int64_t g = 0; g < ng; ++g) {
    const auto& gt = gts[g];
    const auto cand = atss_candidates(grid, gt, cfg.k);
    std::vector<double> scores(cand.size());
    for (std::size_t i = 0; i < cand.size(); ++i)
      scores[i] = score_anchor(grid.anchors[cand[i]].box, gt, cfg.measure);
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    double var = 0.0;
    for (double s : scores) var += (s - mean) * (s - mean);
    var /= static_cast<double>(scores.size());
    const double thr = mean + std::sqrt(var);
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (scores[i] < thr) continue;
      const auto [cx, cy] = center(grid.anchors[cand[i]].box);
      if (cx < gt.box.x1 || cx > gt.box.x2 || cy < gt.box.y1 ||
          cy > gt.box.y2)
        continue;
      kept[g].emplace_back(cand[i], scores[i]);
    }
  }

  // sequential conflict resolution: highest score wins, then lowest gt index
  std::vector<Claim> claims(grid.anchors.size());
  for (std::size_t g = 0; g < gts.size(); ++g) {
    for (const auto& [a, s] : kept[g]) {
      auto& c = claims[a];
      if (c.gt < 0 || s > c.score) {
        c.score = s;
        c.gt = static_cast<std::int32_t>(g);
      }
    }
  }
  for (std::size_t a = 0; a < claims.size(); ++a) {
    auto& e = res.entries[a];
    if (claims[a].gt >= 0) {
      e.label = Label::Positive;
      e.gt_index = claims[a].gt;
      e.score = claims[a].score;
      ++res.positives;
    } else {
      e.label = Label::Negative;
      ++res.negatives;
    }
  }
  return res;
}

}  // namespace gma

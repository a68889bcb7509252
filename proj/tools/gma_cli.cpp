// Command-line surface: anchor assignment, MOB statistics, joint score
// histograms, fast-vs-brute equivalence checks, and the benchmark.
//
// Exit codes: 0 success, 1 validation/parse error, 2 check failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gma/assign.hpp"
#include "gma/geometry.hpp"
#include "gma/gmaiou.hpp"
#include "gma/ingest.hpp"
#include "gma/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;

gma::Measure parse_measure(const std::string& name) {
  if (name == "iou") return gma::Measure::Iou;
  if (name == "giou") return gma::Measure::Giou;
  if (name == "diou") return gma::Measure::Diou;
  if (name == "gmaiou-b") return gma::Measure::GmaiouBox;
  if (name == "gmaiou-m") return gma::Measure::GmaiouMask;
  throw CLI::ValidationError("--measure",
                             "expected iou|giou|diou|gmaiou-b|gmaiou-m");
}

std::vector<gma::LevelSpec> resolve_anchor_config(const std::string& arg) {
  try {
    return gma::anchor_preset(arg);
  } catch (const std::invalid_argument&) {
    // not a preset name: treat as a JSON config file
  }
  std::ifstream in(arg);
  if (!in)
    throw std::runtime_error("anchor config is neither a preset nor a "
                             "readable file: " + arg);
  json root = json::parse(in);
  std::vector<gma::LevelSpec> levels;
  for (const auto& lv : root.at("levels")) {
    gma::LevelSpec spec;
    spec.stride = lv.at("stride").get<int>();
    for (const auto& s : lv.at("scales")) spec.scales.push_back(s);
    for (const auto& r : lv.at("aspect_ratios"))
      spec.aspect_ratios.push_back(r);
    levels.push_back(std::move(spec));
  }
  return levels;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << content;
}

const char* label_name(gma::Label l) {
  switch (l) {
    case gma::Label::Positive: return "positive";
    case gma::Label::Ignore: return "ignore";
    default: return "negative";
  }
}

int run_assign(const std::string& annotations, const std::string& assigner,
               const std::string& measure_name, int k, double pos_thr,
               double neg_thr, const std::string& anchor_config,
               const std::string& output, int threads) {
  const gma::Measure measure = parse_measure(measure_name);
  const auto levels = resolve_anchor_config(anchor_config);
  gma::AnnotationFile file = gma::load_annotations(annotations);

  json out;
  out["assigner"] = assigner;
  out["measure"] = measure_name;
  json images = json::array();
  std::uint64_t tot_pos = 0, tot_neg = 0, tot_ign = 0;

  // image ids processed in file order; each image is independent
  for (const auto& im : file.images) {
    const auto gts = gma::to_ground_truths(file, im.id);
    const auto grid = gma::generate_anchors(im.width, im.height, levels);
    gma::AssignmentResult res;
    if (assigner == "fixed") {
      res = gma::assign_fixed(grid.anchors, gts,
                              gma::FixedThresholdConfig{pos_thr, neg_thr},
                              measure, threads);
    } else {
      res = gma::assign_atss(grid, gts, gma::AtssConfig{k, measure},
                             threads);
    }
    json jim;
    jim["image_id"] = im.id;
    jim["num_anchors"] = res.entries.size();
    jim["num_gts"] = gts.size();
    jim["summary"] = {{"positives", res.positives},
                      {"negatives", res.negatives},
                      {"ignores", res.ignores}};
    json anchors = json::array();
    for (const auto& e : res.entries) {
      json je;
      je["label"] = label_name(e.label);
      if (e.label == gma::Label::Positive) je["gt_index"] = e.gt_index;
      je["score"] = e.score;
      anchors.push_back(std::move(je));
    }
    jim["anchors"] = std::move(anchors);
    images.push_back(std::move(jim));
    tot_pos += res.positives;
    tot_neg += res.negatives;
    tot_ign += res.ignores;
  }
  out["images"] = std::move(images);
  out["summary"] = {{"positives", tot_pos},
                    {"negatives", tot_neg},
                    {"ignores", tot_ign}};
  write_file(output, out.dump(2) + "\n");
  return 0;
}

int run_stats(const std::string& annotations, int bins,
              const std::string& output) {
  gma::AnnotationFile file = gma::load_annotations(annotations);
  std::vector<double> mobs;
  for (const auto& im : file.images) {
    for (const auto& gt : gma::to_ground_truths(file, im.id))
      mobs.push_back(gma::mob_ratio(gt.box, gt));
  }
  std::vector<std::uint64_t> hist(bins, 0);
  std::uint64_t below_half = 0;
  for (double m : mobs) {
    int b = std::min(static_cast<int>(m * bins), bins - 1);
    ++hist[std::max(b, 0)];
    if (m < 0.5) ++below_half;
  }
  std::ostringstream csv;
  csv << "bin_lo,bin_hi,count,cumulative_fraction\n";
  std::uint64_t running = 0;
  for (int b = 0; b < bins; ++b) {
    running += hist[b];
    const double frac =
        mobs.empty() ? 0.0 : static_cast<double>(running) / mobs.size();
    csv << static_cast<double>(b) / bins << ','
        << static_cast<double>(b + 1) / bins << ',' << hist[b] << ','
        << frac << '\n';
  }
  write_file(output, csv.str());
  const double frac_low =
      mobs.empty() ? 0.0 : static_cast<double>(below_half) / mobs.size();
  std::cout << "ground_truths=" << mobs.size()
            << " mob_below_0.5=" << frac_low << '\n';
  return 0;
}

int run_hist2d(const std::string& annotations, const std::string& mx,
               const std::string& my, int bins,
               const std::string& anchor_config, const std::string& output,
               int threads) {
  const gma::Measure measure_x = parse_measure(mx);
  const gma::Measure measure_y = parse_measure(my);
  const auto levels = resolve_anchor_config(anchor_config);
  gma::AnnotationFile file = gma::load_annotations(annotations);

  std::vector<std::pair<double, double>> scores;
  for (const auto& im : file.images) {
    const auto gts = gma::to_ground_truths(file, im.id);
    if (gts.empty()) continue;
    const auto grid = gma::generate_anchors(im.width, im.height, levels);
    std::vector<gma::FloatBox> boxes;
    boxes.reserve(grid.anchors.size());
    for (const auto& a : grid.anchors) boxes.push_back(a.box);
    const auto xs = gma::score_matrix(boxes, gts, measure_x, threads);
    const auto ys = gma::score_matrix(boxes, gts, measure_y, threads);
    for (std::size_t i = 0; i < xs.size(); ++i)
      scores.emplace_back(xs[i], ys[i]);
  }
  std::ostringstream csv;
  csv << "x_bin,y_bin,count\n";
  std::uint64_t pairs = 0;
  if (!scores.empty()) {
    const gma::Histogram2D h = gma::joint_histogram(scores, bins);
    for (int bx = 0; bx < bins; ++bx)
      for (int by = 0; by < bins; ++by)
        csv << bx << ',' << by << ',' << h.at(bx, by) << '\n';
    pairs = h.total();
  }
  write_file(output, csv.str());
  std::cout << "pairs=" << pairs << '\n';
  return 0;
}

// One fast-vs-oracle comparison; prints and counts a violation on mismatch.
int check_pair(const gma::Box& anchor, const gma::GroundTruth& gt) {
  int violations = 0;
  const auto p_box =
      gma::oracle::PixelSet::from_box(gt.box, gt.mask.width(),
                                      gt.mask.height());
  const auto p_mask = gma::oracle::PixelSet::from_mask(gt.mask);
  const auto fast_b = gma::gmaiou_terms(anchor, gt, gma::GmaMode::PolyIsBox);
  const auto fast_m = gma::gmaiou_terms(anchor, gt, gma::GmaMode::PolyIsMask);
  const auto brute_b =
      gma::oracle::brute_gmaiou_general_terms(anchor, p_box, gt.mask);
  const auto brute_m =
      gma::oracle::brute_gmaiou_general_terms(anchor, p_mask, gt.mask);
  auto report = [&](const char* what) {
    std::cerr << "check violation (" << what << "): anchor [" << anchor.x1
              << ',' << anchor.y1 << ',' << anchor.x2 << ',' << anchor.y2
              << ") gt box [" << gt.box.x1 << ',' << gt.box.y1 << ','
              << gt.box.x2 << ',' << gt.box.y2 << ")\n";
    ++violations;
  };
  if (!gma::ratio_equal(fast_b, brute_b)) report("fast != brute, P=B");
  if (!gma::ratio_equal(fast_m, brute_m)) report("fast != brute, P=M");
  if (gma::ratio_less(fast_b, fast_m)) report("ordering P=B >= P=M");
  return violations;
}

int run_check(const std::string& annotations, int random_trials,
              std::uint64_t seed) {
  std::uint64_t violations = 0;
  std::uint64_t checked = 0;
  std::mt19937_64 rng(seed);

  if (!annotations.empty()) {
    gma::AnnotationFile file = gma::load_annotations(annotations);
    for (const auto& im : file.images) {
      for (const auto& gt : gma::to_ground_truths(file, im.id)) {
        std::uniform_int_distribution<int> cx(0, im.width);
        std::uniform_int_distribution<int> cy(0, im.height);
        for (int t = 0; t < 100; ++t) {
          int x1 = cx(rng), x2 = cx(rng), y1 = cy(rng), y2 = cy(rng);
          if (x1 > x2) std::swap(x1, x2);
          if (y1 > y2) std::swap(y1, y2);
          if (x1 == x2 || y1 == y2) continue;
          violations += check_pair(gma::Box{x1, y1, x2, y2}, gt);
          ++checked;
        }
      }
    }
  } else {
    const int size = 96;
    std::uniform_int_distribution<int> coord(0, size);
    for (int t = 0; t < random_trials; ++t) {
      gma::RasterMask mask(size, size);
      const int rects = 1 + static_cast<int>(rng() % 3);
      for (int r = 0; r < rects; ++r) {
        int x1 = coord(rng), x2 = coord(rng);
        int y1 = coord(rng), y2 = coord(rng);
        if (x1 > x2) std::swap(x1, x2);
        if (y1 > y2) std::swap(y1, y2);
        for (int y = y1; y < std::max(y2, y1 + 1); ++y)
          for (int x = x1; x < std::max(x2, x1 + 1); ++x)
            if (x < size && y < size) mask.set(x, y);
      }
      if (mask.pixel_count() == 0) mask.set(coord(rng) % size,
                                            coord(rng) % size);
      const auto gt = gma::make_ground_truth(std::move(mask));
      int x1 = coord(rng), x2 = coord(rng), y1 = coord(rng), y2 = coord(rng);
      if (x1 > x2) std::swap(x1, x2);
      if (y1 > y2) std::swap(y1, y2);
      if (x1 == x2) x2 = x1 + 1;
      if (y1 == y2) y2 = y1 + 1;
      violations += check_pair(gma::Box{x1, y1, x2, y2}, gt);
      ++checked;
    }
  }
  std::cout << "checked=" << checked << " violations=" << violations << '\n';
  return violations == 0 ? 0 : 2;
}

int run_bench(int anchors, int gts, int mask_size, int repeats,
              const std::string& output) {
  const auto rep =
      gma::oracle::benchmark_pairing(anchors, gts, mask_size, repeats);
  json j;
  j["anchors"] = anchors;
  j["gts"] = gts;
  j["mask_size"] = mask_size;
  j["repeats"] = repeats;
  j["brute_ms"] = rep.brute_ms;
  j["fast_ms"] = rep.fast_ms;
  j["brute_median_ms"] = rep.brute_median_ms;
  j["fast_median_ms"] = rep.fast_median_ms;
  j["speedup"] = rep.speedup;
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!output.empty()) write_file(output, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mask-aware anchor assignment toolkit"};
  app.require_subcommand(1);

  int threads = 0;  // 0 = machine parallelism
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  // assign
  auto* assign = app.add_subcommand("assign", "run an anchor assigner");
  std::string annotations, output, assigner = "fixed", measure = "iou";
  std::string anchor_config = "yolact-550";
  int k = 9;
  double pos_thr = 0.5, neg_thr = 0.4;
  assign->add_option("--annotations", annotations)->required();
  assign->add_option("--assigner", assigner)
      ->check(CLI::IsMember({"fixed", "atss"}));
  assign->add_option("--measure", measure);
  assign->add_option("--k", k)->check(CLI::PositiveNumber);
  assign->add_option("--pos-thr", pos_thr);
  assign->add_option("--neg-thr", neg_thr);
  assign->add_option("--anchor-config", anchor_config);
  assign->add_option("--output", output)->required();

  // stats
  auto* stats = app.add_subcommand("stats", "MOB-ratio histogram");
  std::string s_annotations, s_output;
  int s_bins = 20;
  stats->add_option("--annotations", s_annotations)->required();
  stats->add_option("--bins", s_bins)->check(CLI::PositiveNumber);
  stats->add_option("--output", s_output)->required();

  // hist2d
  auto* hist2d = app.add_subcommand("hist2d", "joint score histogram");
  std::string h_annotations, h_output, h_mx, h_my;
  std::string h_anchor_config = "yolact-550";
  int h_bins = 25;
  hist2d->add_option("--annotations", h_annotations)->required();
  hist2d->add_option("--measure-x", h_mx)->required();
  hist2d->add_option("--measure-y", h_my)->required();
  hist2d->add_option("--bins", h_bins)->check(CLI::PositiveNumber);
  hist2d->add_option("--anchor-config", h_anchor_config);
  hist2d->add_option("--output", h_output)->required();

  // check
  auto* check = app.add_subcommand("check",
                                   "fast-vs-brute equivalence audit");
  std::string c_annotations;
  int c_trials = 0;
  std::uint64_t c_seed = 42;
  check->add_option("--annotations", c_annotations);
  check->add_option("--random-trials", c_trials);
  check->add_option("--seed", c_seed);

  // bench
  auto* bench = app.add_subcommand("bench", "brute vs fast benchmark");
  int b_anchors = 10000, b_gts = 50, b_mask = 128, b_repeats = 5;
  std::string b_output;
  bench->add_option("--anchors", b_anchors)->check(CLI::PositiveNumber);
  bench->add_option("--gts", b_gts)->check(CLI::PositiveNumber);
  bench->add_option("--mask-size", b_mask)->check(CLI::PositiveNumber);
  bench->add_option("--repeats", b_repeats)->check(CLI::PositiveNumber);
  bench->add_option("--output", b_output);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*assign) {
      if (neg_thr > pos_thr) {
        std::cerr << "error: --neg-thr must not exceed --pos-thr\n";
        return 1;
      }
      return run_assign(annotations, assigner, measure, k, pos_thr, neg_thr,
                        anchor_config, output, threads);
    }
    if (*stats) return run_stats(s_annotations, s_bins, s_output);
    if (*hist2d)
      return run_hist2d(h_annotations, h_mx, h_my, h_bins, h_anchor_config,
                        h_output, threads);
    if (*check) {
      if (c_annotations.empty() && c_trials < 1) {
        std::cerr << "error: need --annotations or --random-trials >= 1\n";
        return 1;
      }
      return run_check(c_annotations, c_trials, c_seed);
    }
    if (*bench) return run_bench(b_anchors, b_gts, b_mask, b_repeats,
                                 b_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

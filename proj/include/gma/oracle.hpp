#ifndef GMA_ORACLE_HPP
#define GMA_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "gma/geometry.hpp"
#include "gma/gmaiou.hpp"
#include "gma/mask.hpp"

// Slow, obviously-correct reference implementations. Shipped with the
// library (not only the tests) so the CLI can audit the fast path on
// user data.
namespace gma::oracle {

/// Explicit set of integer pixels; general carrier for the polygon P.
struct PixelSet {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // row-major, width*height

  static PixelSet from_mask(const RasterMask& m);
  static PixelSet from_box(const Box& b, int width, int height);

  bool get(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v = true) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::uint64_t count() const;
};

/// Double loop over the pixels of b (clipped to the frame) counting set
/// mask bits.
std::uint64_t brute_box_mask_intersection(const RasterMask& mask,
                                          const Box& b);

/// (|P|/|M|) * |B n M| / (|B| + |P| - |B n P|) with every term counted by
/// enumeration; exact integer terms before the division.
ExactRatio brute_gmaiou_general_terms(const Box& anchor, const PixelSet& p,
                                      const RasterMask& mask);
double brute_gmaiou_general(const Box& anchor, const PixelSet& p,
                            const RasterMask& mask);

struct BenchmarkReport {
  std::vector<double> brute_ms;  // one sample per repeat
  std::vector<double> fast_ms;
  double brute_median_ms = 0.0;
  double fast_median_ms = 0.0;
  double speedup = 0.0;
};

/// Times brute-force vs integral-image GmaIoU (PolyIsBox) over the full
/// anchors x gts grid with randomized rectangles and masks. Runs
/// single-threaded so the timings stay meaningful.
BenchmarkReport benchmark_pairing(int n_anchors, int n_gts, int mask_size,
                                  int repeats, std::uint64_t seed = 42);

}  // namespace gma::oracle

#endif

#ifndef FSEX_CONCEAL_HPP
#define FSEX_CONCEAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fsex/engine.hpp"
#include "fsex/grid.hpp"

namespace fsex {

// Value written into lost pixels before (and in place of) extrapolation.
inline constexpr double kConcealFill = 128.0;

// Set of lost pixel positions in an image, plus the block granularity used
// to split the set into concealment jobs. Coordinates follow the grid
// convention: x = m horizontal, y = n vertical.
class LossPattern {
 public:
  LossPattern() = default;
  LossPattern(int width, int height, int block_size = 16);

  int width() const { return width_; }
  int height() const { return height_; }
  int block_size() const { return block_size_; }

  bool is_lost(int x, int y) const { return lost_[idx(x, y)] != 0; }
  void mark_lost(int x, int y) { lost_[idx(x, y)] = 1; }
  void mark_lost_rect(int x, int y, int w, int h);

  std::size_t lost_count() const;
  bool empty() const { return lost_count() == 0; }

  friend bool operator==(const LossPattern&, const LossPattern&) = default;

 private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(x) * height_ + y;
  }

  int width_ = 0;
  int height_ = 0;
  int block_size_ = 16;
  std::vector<std::uint8_t> lost_;
};

// Regular grid of block x block losses: cells of size `spacing` tile the
// image from offset `border`, one block at each cell start, so blocks keep
// at least `border` pixels clear of every image edge. Per dimension the
// count is floor((dim - 2*border)/spacing), falling back to a single block
// when that is 0 but block + 2*border still fits. Throws PlacementError
// when not even one block fits.
LossPattern generate_pattern(int width, int height, int block, int spacing,
                             int border = 16);

// Loss-pattern mask file: PGM with 0 = lost, 255 = received; any other
// value is rejected with MaskValueError.
LossPattern load_loss_pattern(const std::string& path, int block_size = 16);
void save_loss_pattern(const LossPattern& pattern, const std::string& path);

// One extrapolation job: a lost block with its support window placed inside
// an fft_w x fft_h area. Positions outside the live window count as missing
// with zero weight, as do lost pixels of neighboring blocks that fall
// inside the window.
struct ConcealJob {
  int block_x, block_y, block_w, block_h;  // lost bbox, image coords
  int win_x, win_y, win_w, win_h;          // live window, clipped to image
  int fft_w, fft_h;                        // extrapolation area dims
  int off_x, off_y;                        // live window origin in that area
  RegionMask mask;                         // region flags over the area
};

// Splits the lost set into jobs at block granularity: the image is tiled by
// block_size-aligned cells, every cell containing lost pixels becomes one
// job whose block is the tight bounding box of the lost pixels in it. The
// window is the block dilated by `border`, clipped at image edges. Throws
// JobTooLargeError when block_size + 2*border exceeds fft_size.
std::vector<ConcealJob> make_jobs(const LossPattern& pattern, int border = 16,
                                  int fft_size = 64);

enum class JobStatus { kOk, kFallback, kFailed };

struct JobReport {
  int id = 0;
  int block_x = 0, block_y = 0, block_w = 0, block_h = 0;
  JobStatus status = JobStatus::kOk;
  int iterations = 0;     // iterations actually run
  int odc_fallbacks = 0;  // degenerate-denominator fallbacks recorded
  std::string message;    // failure reason when status == kFailed
};

struct ConcealOptions {
  WeightConfig weights{};
  EngineConfig engine{};
  int border = 16;
  int fft_size = 64;
  int threads = 1;  // <= 1 runs jobs serially; results are identical either way
};

struct ConcealResult {
  SampleGrid image;
  std::vector<JobReport> jobs;
};

// Conceals every lost block: fills lost pixels with kConcealFill, then runs
// one extrapolation per job on a window built from received samples only
// and writes the model values back at that job's lost positions, rounded
// half away from zero and clamped to [0, 255]. Jobs never read concealed
// neighbors, so any execution order (or thread count) produces the same
// image. A failed job keeps the fill and is flagged in its report. With
// engine.max_iterations == 0 the engine is skipped and every lost pixel
// keeps the fill.
ConcealResult conceal(const SampleGrid& image, const LossPattern& pattern,
                      const ConcealOptions& opt);

// Copy of the image with every lost pixel set to kConcealFill.
SampleGrid apply_damage(const SampleGrid& image, const LossPattern& pattern);

}  // namespace fsex

#endif

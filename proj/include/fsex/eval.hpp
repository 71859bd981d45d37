#ifndef FSEX_EVAL_HPP
#define FSEX_EVAL_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "fsex/conceal.hpp"
#include "fsex/grid.hpp"

namespace fsex {

// PSNR = 10*log10(255^2 / MSE) over the lost positions only, with the MSE
// aggregated across every lost pixel of the whole image before the log.
// Returns +infinity when the restoration is exact (printed as "inf").
// Throws ConfigError for an empty pattern, DimensionMismatchError when the
// grids disagree.
double psnr_lost(const SampleGrid& original, const SampleGrid& restored,
                 const LossPattern& pattern);

struct SweepRecord {
  std::string image;  // label, typically the input file stem
  bool odc = false;
  int iterations = 0;
  double psnr_db = 0.0;  // +infinity marks a perfect restoration
};

struct SweepOptions {
  std::vector<int> checkpoints;  // strictly ascending, >= 0
  WeightConfig weights{};
  EngineConfig engine{};  // max_iterations is ignored; the last checkpoint
                          // drives the run length
  int border = 16;
  int fft_size = 64;
  int threads = 1;
  std::string label;
};

// PSNR-versus-iterations curve for both compensation settings. Each block
// runs one engine pass per setting; at every checkpoint the model is
// synthesized from a snapshot of the accumulated state, so a checkpoint
// value equals an independent fresh run of that length. Checkpoint 0
// records the damaged baseline (lost blocks hold kConcealFill). Records
// come out odc=off first, then odc=on, checkpoints ascending.
std::vector<SweepRecord> sweep(const SampleGrid& image,
                               const LossPattern& pattern,
                               const SweepOptions& opt);

// CSV with header image,odc,iterations,psnr_db; LF line endings; PSNR with
// 4 decimal places; infinity printed as "inf"; odc printed as on/off.
void write_sweep_csv(const std::vector<SweepRecord>& records,
                     std::ostream& out);
void write_sweep_csv(const std::vector<SweepRecord>& records,
                     const std::string& path);

}  // namespace fsex

#endif

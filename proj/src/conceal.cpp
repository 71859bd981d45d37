#include "fsex/conceal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <utility>

#include "fsex/errors.hpp"
#include "fsex/pgm.hpp"

namespace fsex {

LossPattern::LossPattern(int width, int height, int block_size)
    : width_(width),
      height_(height),
      block_size_(block_size),
      lost_(static_cast<std::size_t>(width) * height, 0) {
  if (width < 1 || height < 1) {
    throw ConfigError("pattern dimensions must be positive");
  }
  if (block_size < 1) {
    throw ConfigError("block size must be positive");
  }
}

void LossPattern::mark_lost_rect(int x, int y, int w, int h) {
  const int x0 = std::max(0, x);
  const int y0 = std::max(0, y);
  const int x1 = std::min(width_, x + w);
  const int y1 = std::min(height_, y + h);
  for (int xi = x0; xi < x1; ++xi) {
    for (int yi = y0; yi < y1; ++yi) {
      lost_[idx(xi, yi)] = 1;
    }
  }
}

std::size_t LossPattern::lost_count() const {
  return static_cast<std::size_t>(
      std::count(lost_.begin(), lost_.end(), std::uint8_t{1}));
}

LossPattern generate_pattern(int width, int height, int block, int spacing,
                             int border) {
  if (block < 1 || spacing < 1) {
    throw ConfigError("block and spacing must be positive");
  }
  if (border < 0) {
    throw ConfigError("border must be non-negative");
  }
  if (block + 2 * border > width || block + 2 * border > height) {
    throw PlacementError("no " + std::to_string(block) + "x" +
                         std::to_string(block) + " block fits a " +
                         std::to_string(width) + "x" + std::to_string(height) +
                         " image with clearance " + std::to_string(border));
  }
  const int count_x = std::max(1, (width - 2 * border) / spacing);
  const int count_y = std::max(1, (height - 2 * border) / spacing);
  LossPattern pattern(width, height, block);
  for (int j = 0; j < count_y; ++j) {
    for (int i = 0; i < count_x; ++i) {
      pattern.mark_lost_rect(border + i * spacing, border + j * spacing, block,
                             block);
    }
  }
  return pattern;
}

LossPattern load_loss_pattern(const std::string& path, int block_size) {
  const SampleGrid img = read_pgm(path);
  LossPattern pattern(img.width(), img.height(), block_size);
  for (int x = 0; x < img.width(); ++x) {
    for (int y = 0; y < img.height(); ++y) {
      const double v = img(x, y);
      if (v == 0.0) {
        pattern.mark_lost(x, y);
      } else if (v != 255.0) {
        throw MaskValueError("mask sample at (" + std::to_string(x) + ", " +
                             std::to_string(y) + ") is " +
                             std::to_string(static_cast<int>(v)) +
                             "; expected 0 or 255");
      }
    }
  }
  return pattern;
}

void save_loss_pattern(const LossPattern& pattern, const std::string& path) {
  SampleGrid img(pattern.width(), pattern.height(), 255.0);
  for (int x = 0; x < pattern.width(); ++x) {
    for (int y = 0; y < pattern.height(); ++y) {
      if (pattern.is_lost(x, y)) img(x, y) = 0.0;
    }
  }
  write_pgm(img, path);
}

std::vector<ConcealJob> make_jobs(const LossPattern& pattern, int border,
                                  int fft_size) {
  if (border < 0) {
    throw ConfigError("border must be non-negative");
  }
  if (fft_size < 1) {
    throw ConfigError("fft size must be positive");
  }
  const int bs = pattern.block_size();
  if (bs + 2 * border > fft_size) {
    throw JobTooLargeError("block granularity " + std::to_string(bs) +
                           " with border " + std::to_string(border) +
                           " exceeds the " + std::to_string(fft_size) + "x" +
                           std::to_string(fft_size) + " extrapolation area");
  }
  const int W = pattern.width();
  const int H = pattern.height();
  std::vector<ConcealJob> jobs;
  for (int cy = 0; cy < H; cy += bs) {
    for (int cx = 0; cx < W; cx += bs) {
      const int cx1 = std::min(W, cx + bs);
      const int cy1 = std::min(H, cy + bs);
      int x0 = cx1, y0 = cy1, x1 = cx, y1 = cy;
      for (int x = cx; x < cx1; ++x) {
        for (int y = cy; y < cy1; ++y) {
          if (!pattern.is_lost(x, y)) continue;
          x0 = std::min(x0, x);
          y0 = std::min(y0, y);
          x1 = std::max(x1, x + 1);
          y1 = std::max(y1, y + 1);
        }
      }
      if (x0 >= x1) continue;

      ConcealJob job;
      job.block_x = x0;
      job.block_y = y0;
      job.block_w = x1 - x0;
      job.block_h = y1 - y0;
      job.win_x = std::max(0, x0 - border);
      job.win_y = std::max(0, y0 - border);
      job.win_w = std::min(W, x1 + border) - job.win_x;
      job.win_h = std::min(H, y1 + border) - job.win_y;
      job.fft_w = fft_size;
      job.fft_h = fft_size;
      // The lost block sits centered in the extrapolation area; the window
      // lands around it and padding beyond it stays missing.
      job.off_x = (fft_size - job.block_w) / 2 - (job.block_x - job.win_x);
      job.off_y = (fft_size - job.block_h) / 2 - (job.block_y - job.win_y);
      job.mask = RegionMask(fft_size, fft_size, Region::kMissing);
      for (int x = 0; x < job.win_w; ++x) {
        for (int y = 0; y < job.win_h; ++y) {
          if (!pattern.is_lost(job.win_x + x, job.win_y + y)) {
            job.mask.set(job.off_x + x, job.off_y + y, Region::kSupport);
          }
        }
      }
      jobs.push_back(std::move(job));
    }
  }
  return jobs;
}

namespace {

double clamp_round(double v) {
  return std::min(255.0, std::max(0.0, std::round(v)));
}

std::string mask_key(const RegionMask& mask) {
  std::string key(mask.size(), '\0');
  for (std::size_t i = 0; i < mask.size(); ++i) {
    key[i] = mask.at_index(i) == Region::kSupport ? '\1' : '\0';
  }
  return key;
}

}  // namespace

ConcealResult conceal(const SampleGrid& image, const LossPattern& pattern,
                      const ConcealOptions& opt) {
  if (image.width() != pattern.width() ||
      image.height() != pattern.height()) {
    throw DimensionMismatchError("image and pattern dimensions must match");
  }
  if (opt.engine.max_iterations < 0) {
    throw ConfigError("iteration count must be non-negative");
  }
  const std::vector<ConcealJob> jobs =
      make_jobs(pattern, opt.border, opt.fft_size);
  ConcealResult result{apply_damage(image, pattern), {}};
  result.jobs.resize(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    JobReport& rep = result.jobs[i];
    rep.id = static_cast<int>(i);
    rep.block_x = jobs[i].block_x;
    rep.block_y = jobs[i].block_y;
    rep.block_w = jobs[i].block_w;
    rep.block_h = jobs[i].block_h;
  }
  if (jobs.empty() || opt.engine.max_iterations == 0) {
    return result;
  }

  // One engine per distinct window mask; identical geometries (the common
  // case for a regular pattern) share its construction cost.
  const SampleGrid rho =
      make_isotropic_rho(opt.fft_size, opt.fft_size, opt.weights);
  std::map<std::string, std::shared_ptr<const Extrapolator>> engines;
  std::map<std::string, std::string> broken;
  for (const ConcealJob& job : jobs) {
    std::string key = mask_key(job.mask);
    if (engines.count(key) != 0 || broken.count(key) != 0) continue;
    try {
      engines.emplace(std::move(key), std::make_shared<const Extrapolator>(
                                          job.mask, rho, opt.engine));
    } catch (const std::exception& e) {
      broken.emplace(std::move(key), e.what());
    }
  }

  const auto run_job = [&](std::size_t i) {
    const ConcealJob& job = jobs[i];
    JobReport& rep = result.jobs[i];
    const std::string key = mask_key(job.mask);
    if (const auto it = broken.find(key); it != broken.end()) {
      rep.status = JobStatus::kFailed;
      rep.message = it->second;
      return;
    }
    try {
      const Extrapolator& engine = *engines.at(key);
      SampleGrid fwin(job.fft_w, job.fft_h);
      for (int x = 0; x < job.win_w; ++x) {
        for (int y = 0; y < job.win_h; ++y) {
          const int ax = job.off_x + x;
          const int ay = job.off_y + y;
          if (job.mask.is_support(ax, ay)) {
            fwin(ax, ay) = image(job.win_x + x, job.win_y + y);
          }
        }
      }
      ModelState state = engine.init(fwin);
      while (state.iteration < opt.engine.max_iterations) {
        if (engine.step(state) != StepStatus::kStepped) break;
      }
      const SampleGrid g = engine.synthesize(state);
      for (int bx = 0; bx < job.block_w; ++bx) {
        for (int by = 0; by < job.block_h; ++by) {
          const int ix = job.block_x + bx;
          const int iy = job.block_y + by;
          if (!pattern.is_lost(ix, iy)) continue;
          const int ax = job.off_x + (ix - job.win_x);
          const int ay = job.off_y + (iy - job.win_y);
          result.image(ix, iy) = clamp_round(g(ax, ay));
        }
      }
      rep.iterations = state.iteration;
      rep.odc_fallbacks = state.odc_fallbacks;
      rep.status =
          state.odc_fallbacks > 0 ? JobStatus::kFallback : JobStatus::kOk;
    } catch (const std::exception& e) {
      rep.status = JobStatus::kFailed;
      rep.message = e.what();
    }
  };

  const std::size_t thread_count =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, opt.threads)),
                            jobs.size());
  if (thread_count <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size();
             i = next.fetch_add(1)) {
          run_job(i);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }
  return result;
}

SampleGrid apply_damage(const SampleGrid& image, const LossPattern& pattern) {
  if (image.width() != pattern.width() ||
      image.height() != pattern.height()) {
    throw DimensionMismatchError("image and pattern dimensions must match");
  }
  SampleGrid out = image;
  for (int x = 0; x < out.width(); ++x) {
    for (int y = 0; y < out.height(); ++y) {
      if (pattern.is_lost(x, y)) out(x, y) = kConcealFill;
    }
  }
  return out;
}

}  // namespace fsex

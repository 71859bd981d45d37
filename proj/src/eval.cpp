#include "fsex/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>

#include "fsex/errors.hpp"

namespace fsex {

double psnr_lost(const SampleGrid& original, const SampleGrid& restored,
                 const LossPattern& pattern) {
  if (!original.same_dims(restored) ||
      original.width() != pattern.width() ||
      original.height() != pattern.height()) {
    throw DimensionMismatchError("image and pattern dimensions must match");
  }
  double sse = 0.0;
  std::size_t count = 0;
  for (int x = 0; x < original.width(); ++x) {
    for (int y = 0; y < original.height(); ++y) {
      if (!pattern.is_lost(x, y)) continue;
      const double d = original(x, y) - restored(x, y);
      sse += d * d;
      ++count;
    }
  }
  if (count == 0) {
    throw ConfigError("pattern has no lost pixels");
  }
  const double mse = sse / static_cast<double>(count);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
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

std::vector<SweepRecord> sweep(const SampleGrid& image,
                               const LossPattern& pattern,
                               const SweepOptions& opt) {
  if (image.width() != pattern.width() ||
      image.height() != pattern.height()) {
    throw DimensionMismatchError("image and pattern dimensions must match");
  }
  if (opt.checkpoints.empty()) {
    throw ConfigError("checkpoint list must not be empty");
  }
  if (opt.checkpoints.front() < 0) {
    throw ConfigError("checkpoints must be non-negative");
  }
  for (std::size_t i = 1; i < opt.checkpoints.size(); ++i) {
    if (opt.checkpoints[i] <= opt.checkpoints[i - 1]) {
      throw ConfigError("checkpoints must be strictly ascending");
    }
  }
  if (pattern.empty()) {
    throw ConfigError("pattern has no lost pixels");
  }

  const std::vector<ConcealJob> jobs =
      make_jobs(pattern, opt.border, opt.fft_size);
  const SampleGrid damaged = apply_damage(image, pattern);
  const int last = opt.checkpoints.back();
  const std::size_t n_cp = opt.checkpoints.size();

  std::vector<SweepRecord> records;
  records.reserve(2 * n_cp);
  for (const bool odc : {false, true}) {
    EngineConfig ecfg = opt.engine;
    ecfg.odc_enabled = odc;
    ecfg.max_iterations = std::max(last, 1);

    std::map<std::string, std::shared_ptr<const Extrapolator>> engines;
    if (last > 0) {
      const SampleGrid rho =
          make_isotropic_rho(opt.fft_size, opt.fft_size, opt.weights);
      for (const ConcealJob& job : jobs) {
        std::string key = mask_key(job.mask);
        if (engines.count(key) != 0) continue;
        try {
          engines.emplace(std::move(key), std::make_shared<const Extrapolator>(
                                              job.mask, rho, ecfg));
        } catch (const std::exception&) {
          // The job keeps the fill at every checkpoint, matching what a
          // conceal run of any length produces for it.
        }
      }
    }

    // Per-job error contributions, aggregated in job order afterwards so
    // the totals do not depend on the execution schedule.
    std::vector<std::vector<double>> sse(jobs.size(),
                                         std::vector<double>(n_cp, 0.0));
    std::vector<std::size_t> lost_px(jobs.size(), 0);

    const auto run_job = [&](std::size_t i) {
      const ConcealJob& job = jobs[i];
      const auto engine_it = engines.find(mask_key(job.mask));
      const Extrapolator* engine =
          engine_it == engines.end() ? nullptr : engine_it->second.get();

      std::optional<ModelState> state;
      SampleGrid fwin(job.fft_w, job.fft_h);
      if (engine != nullptr) {
        for (int x = 0; x < job.win_w; ++x) {
          for (int y = 0; y < job.win_h; ++y) {
            const int ax = job.off_x + x;
            const int ay = job.off_y + y;
            if (job.mask.is_support(ax, ay)) {
              fwin(ax, ay) = image(job.win_x + x, job.win_y + y);
            }
          }
        }
        state = engine->init(fwin);
      }

      bool running = engine != nullptr;
      for (std::size_t ci = 0; ci < n_cp; ++ci) {
        const int cp = opt.checkpoints[ci];
        std::optional<SampleGrid> model;
        if (cp > 0 && engine != nullptr) {
          while (running && state->iteration < cp) {
            running = (engine->step(*state) == StepStatus::kStepped);
          }
          model = engine->synthesize(*state);
        }
        double acc = 0.0;
        std::size_t count = 0;
        for (int bx = 0; bx < job.block_w; ++bx) {
          for (int by = 0; by < job.block_h; ++by) {
            const int ix = job.block_x + bx;
            const int iy = job.block_y + by;
            if (!pattern.is_lost(ix, iy)) continue;
            double restored;
            if (model) {
              const int ax = job.off_x + (ix - job.win_x);
              const int ay = job.off_y + (iy - job.win_y);
              restored = clamp_round((*model)(ax, ay));
            } else {
              restored = damaged(ix, iy);
            }
            const double d = image(ix, iy) - restored;
            acc += d * d;
            ++count;
          }
        }
        sse[i][ci] = acc;
        lost_px[i] = count;
      }
    };

    const std::size_t thread_count = std::min<std::size_t>(
        static_cast<std::size_t>(std::max(1, opt.threads)), jobs.size());
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

    for (std::size_t ci = 0; ci < n_cp; ++ci) {
      double total = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        total += sse[i][ci];
        count += lost_px[i];
      }
      const double mse = total / static_cast<double>(count);
      SweepRecord rec;
      rec.image = opt.label;
      rec.odc = odc;
      rec.iterations = opt.checkpoints[ci];
      rec.psnr_db = mse == 0.0 ? std::numeric_limits<double>::infinity()
                               : 10.0 * std::log10(255.0 * 255.0 / mse);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

void write_sweep_csv(const std::vector<SweepRecord>& records,
                     std::ostream& out) {
  out << "image,odc,iterations,psnr_db\n";
  for (const SweepRecord& r : records) {
    char buf[64];
    if (std::isinf(r.psnr_db)) {
      std::snprintf(buf, sizeof buf, "inf");
    } else {
      std::snprintf(buf, sizeof buf, "%.4f", r.psnr_db);
    }
    out << r.image << ',' << (r.odc ? "on" : "off") << ',' << r.iterations
        << ',' << buf << '\n';
  }
}

void write_sweep_csv(const std::vector<SweepRecord>& records,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path);
  }
  write_sweep_csv(records, out);
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

}  // namespace fsex

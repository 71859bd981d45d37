#include <charconv>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fsex/conceal.hpp"
#include "fsex/errors.hpp"
#include "fsex/eval.hpp"
#include "fsex/pgm.hpp"
#include "json.hpp"

namespace {

// Bad argument content that CLI11's own checks cannot express; exits with
// the usage code like any other parse problem.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

int parse_int_or(const std::string& part, const std::string& context) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(part.data(), part.data() + part.size(), value);
  if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty()) {
    throw UsageError(context + ": invalid integer '" + part + "'");
  }
  return value;
}

// --pattern accepts either a mask PGM path or gen:BLOCK,SPACING.
struct PatternSpec {
  bool generated = false;
  int block = 0;
  int spacing = 0;
  std::string path;
};

PatternSpec parse_pattern_spec(const std::string& text) {
  PatternSpec spec;
  if (text.rfind("gen:", 0) != 0) {
    spec.path = text;
    return spec;
  }
  spec.generated = true;
  const std::string body = text.substr(4);
  const std::size_t comma = body.find(',');
  if (comma == std::string::npos) {
    throw UsageError("--pattern gen: expects gen:BLOCK,SPACING");
  }
  spec.block = parse_int_or(body.substr(0, comma), "--pattern gen: block");
  spec.spacing = parse_int_or(body.substr(comma + 1), "--pattern gen: spacing");
  if (spec.block < 1 || spec.spacing < 1) {
    throw UsageError("--pattern gen: block and spacing must be positive");
  }
  return spec;
}

fsex::LossPattern resolve_pattern(const PatternSpec& spec,
                                  const fsex::SampleGrid& image, int border) {
  if (spec.generated) {
    return fsex::generate_pattern(image.width(), image.height(), spec.block,
                                  spec.spacing, border);
  }
  return fsex::load_loss_pattern(spec.path);
}

std::vector<int> parse_checkpoints(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string part =
        comma == std::string::npos ? text.substr(pos)
                                   : text.substr(pos, comma - pos);
    const int value = parse_int_or(part, "--checkpoints");
    if (value < 0) {
      throw UsageError("--checkpoints values must be non-negative");
    }
    out.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) {
      throw UsageError("--checkpoints must be strictly ascending");
    }
  }
  return out;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

const char* status_name(fsex::JobStatus status) {
  switch (status) {
    case fsex::JobStatus::kOk:
      return "ok";
    case fsex::JobStatus::kFallback:
      return "fallback";
    case fsex::JobStatus::kFailed:
      return "failed";
  }
  return "unknown";
}

struct DamageArgs {
  std::string input;
  std::string pattern;
  std::string output;
};

struct ConcealArgs {
  std::string input;
  std::string pattern;
  std::string output;
  std::string report;
  double rho = 0.8;
  int border = 16;
  int fft = 64;
  int iters = 250;
  std::string odc = "on";
  std::string fast = "on";
  int threads = 1;
};

struct SweepArgs {
  std::string input;
  std::string pattern;
  std::string csv;
  std::string checkpoints;
  double rho = 0.8;
  int border = 16;
  int fft = 64;
  int threads = 1;
};

int run_damage(const DamageArgs& args) {
  const PatternSpec spec = parse_pattern_spec(args.pattern);
  const fsex::SampleGrid image = fsex::read_pgm(args.input);
  const fsex::LossPattern pattern = resolve_pattern(spec, image, 16);
  fsex::write_pgm(fsex::apply_damage(image, pattern), args.output);
  return 0;
}

int run_conceal(const ConcealArgs& args) {
  const PatternSpec spec = parse_pattern_spec(args.pattern);
  Stopwatch watch;
  const fsex::SampleGrid image = fsex::read_pgm(args.input);
  const fsex::LossPattern pattern = resolve_pattern(spec, image, args.border);
  const double load_ms = watch.lap_ms();

  fsex::ConcealOptions opt;
  opt.weights.rho_hat = args.rho;
  opt.engine.max_iterations = args.iters;
  opt.engine.odc_enabled = (args.odc == "on");
  opt.engine.fast_path = (args.fast == "on");
  opt.border = args.border;
  opt.fft_size = args.fft;
  opt.threads = resolve_threads(args.threads);
  const fsex::ConcealResult result = fsex::conceal(image, pattern, opt);
  const double conceal_ms = watch.lap_ms();

  fsex::write_pgm(result.image, args.output);
  const double write_ms = watch.lap_ms();

  if (!args.report.empty()) {
    nlohmann::json report;
    report["command"] = "conceal";
    report["input"] = args.input;
    report["output"] = args.output;
    report["pattern"] = args.pattern;
    report["config"] = {{"rho_hat", args.rho},
                        {"border", args.border},
                        {"fft_size", args.fft},
                        {"iterations", args.iters},
                        {"odc", opt.engine.odc_enabled},
                        {"fast_path", opt.engine.fast_path},
                        {"threads", opt.threads}};
    report["lost_pixels"] = pattern.lost_count();
    nlohmann::json jobs = nlohmann::json::array();
    for (const fsex::JobReport& job : result.jobs) {
      nlohmann::json entry = {{"id", job.id},
                              {"block",
                               {{"x", job.block_x},
                                {"y", job.block_y},
                                {"w", job.block_w},
                                {"h", job.block_h}}},
                              {"status", status_name(job.status)},
                              {"iterations", job.iterations},
                              {"odc_fallbacks", job.odc_fallbacks}};
      if (!job.message.empty()) entry["message"] = job.message;
      jobs.push_back(std::move(entry));
    }
    report["jobs"] = std::move(jobs);
    report["timing_ms"] = {{"load", load_ms},
                           {"conceal", conceal_ms},
                           {"write", write_ms}};
    std::ofstream out(args.report, std::ios::binary);
    if (!out) {
      throw fsex::IoError("cannot open " + args.report);
    }
    out << report.dump(2) << '\n';
    if (!out) {
      throw fsex::IoError("write failed for " + args.report);
    }
  }

  int failed = 0;
  for (const fsex::JobReport& job : result.jobs) {
    if (job.status == fsex::JobStatus::kFailed) ++failed;
  }
  if (failed > 0) {
    std::cerr << failed << " of " << result.jobs.size()
              << " jobs failed; their blocks keep the fill value\n";
  }
  return 0;
}

int run_sweep(const SweepArgs& args) {
  const PatternSpec spec = parse_pattern_spec(args.pattern);
  fsex::SweepOptions opt;
  opt.checkpoints = parse_checkpoints(args.checkpoints);
  opt.weights.rho_hat = args.rho;
  opt.border = args.border;
  opt.fft_size = args.fft;
  opt.threads = resolve_threads(args.threads);
  opt.label = std::filesystem::path(args.input).stem().string();

  const fsex::SampleGrid image = fsex::read_pgm(args.input);
  const fsex::LossPattern pattern = resolve_pattern(spec, image, args.border);
  const std::vector<fsex::SweepRecord> records =
      fsex::sweep(image, pattern, opt);
  fsex::write_sweep_csv(records, args.csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-selective extrapolation of lost image blocks"};
  app.require_subcommand(1);

  const CLI::Validator open_unit_interval(
      [](std::string& value) -> std::string {
        try {
          const double v = std::stod(value);
          if (v > 0.0 && v < 1.0) return {};
        } catch (const std::exception&) {
        }
        return "value must lie strictly inside (0, 1)";
      },
      "FLOAT in (0,1)");
  const auto on_off = CLI::IsMember({"on", "off"});

  DamageArgs damage;
  CLI::App* cmd_damage =
      app.add_subcommand("damage", "Replace lost pixels with the fill value");
  cmd_damage->add_option("input", damage.input, "Input PGM image")->required();
  cmd_damage
      ->add_option("--pattern", damage.pattern,
                   "Mask PGM (0 = lost) or gen:BLOCK,SPACING")
      ->required();
  cmd_damage->add_option("-o,--output", damage.output, "Output PGM image")
      ->required();

  ConcealArgs conceal;
  CLI::App* cmd_conceal =
      app.add_subcommand("conceal", "Extrapolate lost blocks from their "
                                    "neighborhoods");
  cmd_conceal->add_option("input", conceal.input, "Input PGM image")
      ->required();
  cmd_conceal
      ->add_option("--pattern", conceal.pattern,
                   "Mask PGM (0 = lost) or gen:BLOCK,SPACING")
      ->required();
  cmd_conceal->add_option("-o,--output", conceal.output, "Output PGM image")
      ->required();
  cmd_conceal->add_option("--rho", conceal.rho, "Weighting decay per pixel")
      ->capture_default_str()
      ->check(open_unit_interval);
  cmd_conceal
      ->add_option("--border", conceal.border, "Support frame width in pixels")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd_conceal->add_option("--fft", conceal.fft, "Extrapolation area size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_conceal->add_option("--iters", conceal.iters, "Iterations per block")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd_conceal->add_option("--odc", conceal.odc, "Compensate coefficients")
      ->capture_default_str()
      ->check(on_off);
  cmd_conceal->add_option("--fast", conceal.fast, "FFT-based iteration")
      ->capture_default_str()
      ->check(on_off);
  cmd_conceal
      ->add_option("--threads", conceal.threads,
                   "Worker threads (0 = all cores)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd_conceal->add_option("--report", conceal.report, "JSON run report path");

  SweepArgs sweep;
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "PSNR-versus-iterations curve for both odc settings");
  cmd_sweep->add_option("input", sweep.input, "Input PGM image")->required();
  cmd_sweep
      ->add_option("--pattern", sweep.pattern,
                   "Mask PGM (0 = lost) or gen:BLOCK,SPACING")
      ->required();
  cmd_sweep
      ->add_option("--checkpoints", sweep.checkpoints,
                   "Comma-separated ascending iteration counts")
      ->required();
  cmd_sweep->add_option("--csv", sweep.csv, "Output CSV path")->required();
  cmd_sweep->add_option("--rho", sweep.rho, "Weighting decay per pixel")
      ->capture_default_str()
      ->check(open_unit_interval);
  cmd_sweep
      ->add_option("--border", sweep.border, "Support frame width in pixels")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd_sweep->add_option("--fft", sweep.fft, "Extrapolation area size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_sweep
      ->add_option("--threads", sweep.threads,
                   "Worker threads (0 = all cores)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_damage->parsed()) return run_damage(damage);
    if (cmd_conceal->parsed()) return run_conceal(conceal);
    if (cmd_sweep->parsed()) return run_sweep(sweep);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

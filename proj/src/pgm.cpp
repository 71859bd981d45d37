#include "fsex/pgm.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "fsex/errors.hpp"

namespace fsex {
namespace {

// Next header token: skips whitespace and # comments (which run to end of
// line), stops before the terminating character.
std::string next_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c) && c != '#') {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (c != EOF) in.unget();
  return tok;
}

template <typename E>
int parse_int(const std::string& tok, const char* what) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) {
    throw E(std::string("invalid ") + what + " '" + tok + "'");
  }
  return value;
}

}  // namespace

SampleGrid read_pgm(std::istream& in) {
  const std::string magic = next_token(in);
  if (magic != "P5" && magic != "P2") {
    throw PgmHeaderError("unsupported magic '" + magic + "'");
  }
  const int width = parse_int<PgmHeaderError>(next_token(in), "width");
  const int height = parse_int<PgmHeaderError>(next_token(in), "height");
  if (width < 1 || height < 1) {
    throw PgmHeaderError("dimensions must be positive");
  }
  const int maxval = parse_int<PgmHeaderError>(next_token(in), "maxval");
  if (maxval < 1 || maxval > 255) {
    throw PgmMaxvalError("maxval " + std::to_string(maxval) +
                         " outside [1, 255]");
  }

  SampleGrid img(width, height);
  if (magic == "P5") {
    const int sep = in.get();
    if (sep == EOF) {
      throw PgmTruncatedError("payload missing");
    }
    if (!std::isspace(sep)) {
      throw PgmHeaderError("missing whitespace before payload");
    }
    const std::size_t count = static_cast<std::size_t>(width) * height;
    std::vector<char> buf(count);
    in.read(buf.data(), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
      throw PgmTruncatedError("payload holds " + std::to_string(in.gcount()) +
                              " of " + std::to_string(count) + " bytes");
    }
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        img(j, i) = static_cast<double>(static_cast<std::uint8_t>(
            buf[static_cast<std::size_t>(i) * width + j]));
      }
    }
  } else {
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        const std::string tok = next_token(in);
        if (tok.empty()) {
          throw PgmTruncatedError("payload ended at sample " +
                                  std::to_string(i * width + j) + " of " +
                                  std::to_string(width * height));
        }
        const int v = parse_int<PgmTruncatedError>(tok, "sample");
        if (v < 0 || v > maxval) {
          throw PgmValueRangeError("sample " + std::to_string(v) +
                                   " outside [0, " + std::to_string(maxval) +
                                   "]");
        }
        img(j, i) = static_cast<double>(v);
      }
    }
  }
  return img;
}

SampleGrid read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw PgmIoError("cannot open " + path);
  }
  return read_pgm(in);
}

void write_pgm(const SampleGrid& image, std::ostream& out) {
  if (image.width() < 1 || image.height() < 1) {
    throw ConfigError("image dimensions must be positive");
  }
  // Validated up front so a bad sample never leaves a partial file behind.
  for (std::size_t i = 0; i < image.size(); ++i) {
    const double v = image.at_index(i);
    if (!(v >= 0.0 && v <= 255.0)) {
      throw PgmValueRangeError("sample value " + std::to_string(v) +
                               " outside [0, 255]");
    }
  }
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<char> buf(image.size());
  std::size_t pos = 0;
  for (int i = 0; i < image.height(); ++i) {
    for (int j = 0; j < image.width(); ++j) {
      buf[pos++] =
          static_cast<char>(static_cast<std::uint8_t>(std::round(image(j, i))));
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) {
    throw PgmIoError("write failed");
  }
}

void write_pgm(const SampleGrid& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw PgmIoError("cannot open " + path);
  }
  write_pgm(image, out);
}

}  // namespace fsex

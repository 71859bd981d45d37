#ifndef FSEX_PGM_HPP
#define FSEX_PGM_HPP

#include <iosfwd>
#include <string>

#include "fsex/grid.hpp"

namespace fsex {

// Reads a portable graymap, binary (P5) or ASCII (P2), maxval <= 255.
// Image row i becomes grid coordinate n = i, column j becomes m = j.
// Distinct errors: PgmHeaderError for a malformed header, PgmMaxvalError
// for maxval > 255 (or < 1), PgmTruncatedError for a short payload.
SampleGrid read_pgm(std::istream& in);
SampleGrid read_pgm(const std::string& path);

// Writes binary P5, maxval 255, no comment lines. Values must already lie
// in [0, 255] (PgmValueRangeError otherwise; clamping belongs to the
// pipeline, not the writer) and are rounded half away from zero to bytes.
void write_pgm(const SampleGrid& image, std::ostream& out);
void write_pgm(const SampleGrid& image, const std::string& path);

}  // namespace fsex

#endif

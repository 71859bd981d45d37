#ifndef FSEX_ERRORS_HPP
#define FSEX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fsex {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Grid/mask/config arguments that cannot be worked with.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operand grids with mismatching dimensions.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// No usable support: |A| = 0 or the weighting sums to zero.
class NoSupportError : public Error {
 public:
  using Error::Error;
};

// select_basis found no projection at or above the floor; the iteration has
// converged and the state must not change.
class AllBelowFloorError : public Error {
 public:
  using Error::Error;
};

// A quantity that must vanish by construction (imaginary residue of the
// synthesized model) exceeded its bound; indicates a broken internal state.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

// build_k_matrix_dense called beyond its size limit.
class DenseLimitError : public Error {
 public:
  using Error::Error;
};

// generate_pattern cannot place a single block under the clearance rules.
class PlacementError : public Error {
 public:
  using Error::Error;
};

// A concealment job does not fit the FFT area with the requested border.
class JobTooLargeError : public Error {
 public:
  using Error::Error;
};

// PGM failures, split so callers can tell the cases apart.
class PgmError : public Error {
 public:
  using Error::Error;
};
class PgmHeaderError : public PgmError {
 public:
  using PgmError::PgmError;
};
class PgmMaxvalError : public PgmError {
 public:
  using PgmError::PgmError;
};
class PgmTruncatedError : public PgmError {
 public:
  using PgmError::PgmError;
};
class PgmValueRangeError : public PgmError {
 public:
  using PgmError::PgmError;
};
class PgmIoError : public PgmError {
 public:
  using PgmError::PgmError;
};

// Loss-mask image with a pixel that is neither 0 (lost) nor 255 (received).
class MaskValueError : public Error {
 public:
  using Error::Error;
};

// Non-PGM file I/O failure (CSV or report output).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fsex

#endif

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crcurv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or chart file. `offset` is a byte offset into the
/// parsed text; `line`/`column` are 1-based and zero when not applicable.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset, int line = 0, int column = 0)
      : Error(what), offset_(offset), line_(line), column_(column) {}
  std::size_t offset() const { return offset_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::size_t offset_;
  int line_;
  int column_;
};

class UnknownIdentifier : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class ArityError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

#define CRCURV_DEFINE_ERROR(Name)   \
  class Name : public Error {       \
   public:                          \
    using Error::Error;             \
  };

CRCURV_DEFINE_ERROR(DomainError)
CRCURV_DEFINE_ERROR(DimensionError)
CRCURV_DEFINE_ERROR(ImmersionError)
CRCURV_DEFINE_ERROR(CRSplitError)
CRCURV_DEFINE_ERROR(NonOrthonormalFrame)
CRCURV_DEFINE_ERROR(BlockSizeError)
CRCURV_DEFINE_ERROR(ObjectiveError)
CRCURV_DEFINE_ERROR(FeasibilityError)
CRCURV_DEFINE_ERROR(NotJInvariant)
CRCURV_DEFINE_ERROR(BoundViolation)
CRCURV_DEFINE_ERROR(AmbientMismatch)
CRCURV_DEFINE_ERROR(ConfigError)

#undef CRCURV_DEFINE_ERROR

}  // namespace crcurv

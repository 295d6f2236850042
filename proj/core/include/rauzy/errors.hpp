#pragma once

#include <stdexcept>
#include <string>

namespace rauzy {

// Root of every error raised by the library. Domain errors (bad input that
// is well formed) derive from Error; parse failures derive from ParseError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

#define RAUZY_DEFINE_ERROR(Name)   \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

RAUZY_DEFINE_ERROR(LabelCountError);
RAUZY_DEFINE_ERROR(EmptyRowError);
RAUZY_DEFINE_ERROR(AlphabetMismatchError);
RAUZY_DEFINE_ERROR(EmptyPolytopeError);
RAUZY_DEFINE_ERROR(DimensionMismatchError);
RAUZY_DEFINE_ERROR(UnimodularityError);
RAUZY_DEFINE_ERROR(ZeroImageError);
RAUZY_DEFINE_ERROR(DomainError);
RAUZY_DEFINE_ERROR(UndefinedMoveError);
RAUZY_DEFINE_ERROR(TieError);
RAUZY_DEFINE_ERROR(ZeroWeightError);
RAUZY_DEFINE_ERROR(RangeError);
RAUZY_DEFINE_ERROR(InsufficientSamplesError);

#undef RAUZY_DEFINE_ERROR

}  // namespace rauzy

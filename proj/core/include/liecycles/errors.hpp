#pragma once

#include <stdexcept>
#include <string>

namespace lie {

// Base of every error thrown by the kernel. `kind()` is a stable machine
// readable tag; the what() string carries context for humans.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define LIE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
  public:                                                        \
    explicit Name(const std::string& msg) : Error(#Name, msg) {} \
  }

LIE_DEFINE_ERROR(InvalidInput);
LIE_DEFINE_ERROR(DegenerateSubspace);
LIE_DEFINE_ERROR(NotOnQuadric);
LIE_DEFINE_ERROR(OutsideChart);
LIE_DEFINE_ERROR(InvalidMirror);
LIE_DEFINE_ERROR(DependentSpanningSet);
LIE_DEFINE_ERROR(DegenerateTriple);
LIE_DEFINE_ERROR(NumericalFailure);
LIE_DEFINE_ERROR(ParseError);
LIE_DEFINE_ERROR(Unsupported);

#undef LIE_DEFINE_ERROR

}  // namespace lie

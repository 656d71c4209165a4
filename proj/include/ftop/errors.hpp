// Error types shared by every ftop module.
//
// Each failure mode named by an operation's contract gets its own type so
// callers (and tests) can catch exactly what they expect.  All of them derive
// from ftop::Error, which carries a human-readable message with the concrete
// witness that triggered the failure.

#ifndef FTOP_ERRORS_HPP
#define FTOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ftop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  // The type name, for reports.
  virtual const char* kind() const noexcept { return "Error"; }
};

#define FTOP_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                      \
   public:                                                         \
    using Error::Error;                                            \
    const char* kind() const noexcept override { return #Name; }   \
  };

FTOP_DEFINE_ERROR(UnknownElement)
FTOP_DEFINE_ERROR(InvalidBasis)
FTOP_DEFINE_ERROR(InvalidSieve)
FTOP_DEFINE_ERROR(NotDerivable)
FTOP_DEFINE_ERROR(CoveringAxiomViolation)
FTOP_DEFINE_ERROR(HypothesisFails)
FTOP_DEFINE_ERROR(PremiseFails)
FTOP_DEFINE_ERROR(NotACover)
FTOP_DEFINE_ERROR(DepthExceeded)
FTOP_DEFINE_ERROR(NotMonotone)
FTOP_DEFINE_ERROR(NotInductive)
FTOP_DEFINE_ERROR(NotAPoint)
FTOP_DEFINE_ERROR(NotComposable)
FTOP_DEFINE_ERROR(NotBelowRoot)
FTOP_DEFINE_ERROR(EmptyCoverPresent)
FTOP_DEFINE_ERROR(UnsupportedSort)
FTOP_DEFINE_ERROR(NotDisjoint)
FTOP_DEFINE_ERROR(NotCovering)
FTOP_DEFINE_ERROR(NoRefinementFound)
FTOP_DEFINE_ERROR(PremiseNotForced)
FTOP_DEFINE_ERROR(NotForced)
FTOP_DEFINE_ERROR(NotUnique)
FTOP_DEFINE_ERROR(NoModulus)
FTOP_DEFINE_ERROR(InputError)

#undef FTOP_DEFINE_ERROR

// Parse failures remember where in the input they happened.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t pos, const std::string& msg)
      : Error("syntax error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  const char* kind() const noexcept override { return "SyntaxError"; }
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class SortError : public Error {
 public:
  SortError(std::size_t pos, const std::string& msg)
      : Error("sort error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  const char* kind() const noexcept override { return "SortError"; }
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

}  // namespace ftop

#endif  // FTOP_ERRORS_HPP

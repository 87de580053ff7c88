#pragma once

#include <stdexcept>
#include <string>

namespace gqfi {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class NonFiniteError : public Error { using Error::Error; };
class NotPhysicalError : public Error { using Error::Error; };
class TraceFormulaBranchError : public Error { using Error::Error; };
class ComplexSpectrumError : public Error { using Error::Error; };
class OrderingMismatchError : public Error { using Error::Error; };
class NotSymplecticError : public Error { using Error::Error; };
class NegativeOccupationError : public Error { using Error::Error; };
class ParameterTooLargeError : public Error { using Error::Error; };
class UnknownParameterError : public Error { using Error::Error; };
class DenominatorDegenerateError : public Error { using Error::Error; };
class TruncationTooSevereError : public Error { using Error::Error; };
class NotConvergedError : public Error { using Error::Error; };
class PureStateSingularityError : public Error { using Error::Error; };
class DegenerateSpectrumError : public Error { using Error::Error; };
class StepTooSmallError : public Error { using Error::Error; };
class NoInteriorMaximumError : public Error { using Error::Error; };
class FlatTableError : public Error { using Error::Error; };
class CaseMismatchError : public Error { using Error::Error; };

}  // namespace gqfi

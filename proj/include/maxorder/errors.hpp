#pragma once

#include <stdexcept>
#include <string>

namespace maxorder {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// exactlinalg
struct SingularMatrix : Error { using Error::Error; };

// numorder
struct NotSquarefree : Error { using Error::Error; };
struct NotCommutative : Error { using Error::Error; };
struct NotAssociative : Error { using Error::Error; };
struct NoUnit : Error { using Error::Error; };
struct DegenerateTrace : Error { using Error::Error; };
struct NotContained : Error { using Error::Error; };
struct NotBoundedByDual : Error { using Error::Error; };

// finform
struct NotIsotropicInput : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };

// localize
struct NotMonogenic : Error { using Error::Error; };
struct PrecisionOverflow : Error { using Error::Error; };

// closure
struct IterationBound : Error { using Error::Error; };
struct IncompleteCover : Error { using Error::Error; };
struct UnresolvedFactor : Error { using Error::Error; };

}  // namespace maxorder

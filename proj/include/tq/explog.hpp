// Truncated exponential and logarithm between nilpotent and unipotent
// matrices.  Both series stop at the matrix size m, so every factorial and
// integer divisor up to m must be invertible: over the p-rings this needs
// p > m (error FactorialNotInvertible), over the rationals anything goes.

#pragma once

#include "tq/rings.hpp"

namespace tq {
namespace explog {

// sum_{i < m} A^i / i!.  Errors: BadShape, FactorialNotInvertible,
// NotNilpotent (A^m != 0).
Matrix trunc_exp(const Matrix& A);

// sum_{1 <= i < m} (-1)^{i+1} (B - 1)^i / i.  Errors: BadShape,
// FactorialNotInvertible, NotUnipotent ((B - 1)^m != 0).
Matrix trunc_log(const Matrix& B);

}  // namespace explog
}  // namespace tq

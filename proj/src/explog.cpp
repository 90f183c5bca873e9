#include "tq/explog.hpp"

namespace tq {
namespace explog {

namespace {

void check_divisors(const Matrix& A) {
  if (!A.is_square()) throw error("BadShape", "square matrices only");
  if (!A.spec.is_rational() && A.spec.p <= A.rows)
    throw error("FactorialNotInvertible",
                "series up to degree " + std::to_string(A.rows - 1) +
                    " needs p > " + std::to_string(A.rows));
}

}  // namespace

Matrix trunc_exp(const Matrix& A) {
  check_divisors(A);
  const int m = A.rows;
  Matrix term = Matrix::identity(A.spec, m);
  Matrix sum = term;
  for (int i = 1; i < m; ++i) {
    term = term * A * scalar_matrix(A.spec, m, re_inv(re_from_int(A.spec, i)));
    sum = sum + term;
  }
  if (!(term * A).is_zero())
    throw error("NotNilpotent", "matrix power m does not vanish");
  return sum;
}

Matrix trunc_log(const Matrix& B) {
  check_divisors(B);
  const int m = B.rows;
  Matrix U = B - Matrix::identity(B.spec, m);
  Matrix power = Matrix::identity(B.spec, m);
  Matrix sum(B.spec, m, m);
  for (int i = 1; i < m; ++i) {
    power = power * U;
    RingElement coeff = re_inv(re_from_int(B.spec, i % 2 == 1 ? i : -i));
    sum = sum + scalar_matrix(B.spec, m, coeff) * power;
  }
  if (!(power * U).is_zero())
    throw error("NotUnipotent", "matrix minus one is not nilpotent");
  return sum;
}

}  // namespace explog
}  // namespace tq

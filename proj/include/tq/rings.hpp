#pragma once

// Coefficient rings for the lifting machinery: the rationals, prime fields
// F_p, the quotients Z/p^a, and truncated polynomial rings R0[eps]/(eps^n)
// over them, together with exact matrices and linear solvers (including the
// filtration-aware solver over the non-field rings).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tq {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Domain error with a stable machine-readable code ("NotPIntegral",
// "UnreachableTarget", ...) used by the CLI to report failures.
class error : public std::runtime_error {
 public:
  error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

enum class RingKind { Rationals, PrimeField, ModPrimePower, EpsTrunc };

// A point in the coefficient-ring tower.  p == 0 encodes the rationals; for
// p > 0 the ring is (Z/p^a)[eps]/(eps^n), with n == 1 meaning no eps part
// and a == 1 meaning the prime field.  p is restricted to odd primes (the
// surrounding theory assumes odd residue characteristic throughout).
struct RingSpec {
  long long p = 0;
  int a = 1;
  int n = 1;

  static RingSpec rationals() { return RingSpec{}; }
  static RingSpec prime_field(long long p);
  static RingSpec mod_prime_power(long long p, int a);
  static RingSpec eps_trunc(const RingSpec& base, int n);

  RingKind kind() const {
    if (p == 0) return RingKind::Rationals;
    if (n > 1) return RingKind::EpsTrunc;
    return a > 1 ? RingKind::ModPrimePower : RingKind::PrimeField;
  }
  bool is_rational() const { return p == 0; }
  bool is_field() const { return p == 0 || (a == 1 && n == 1); }
  // p^a, the modulus of each eps coefficient.
  long long modulus() const;
  // The residue field: Q stays Q, everything else collapses to F_p.
  RingSpec residue_field() const {
    return p == 0 ? rationals() : prime_field(p);
  }
  // The eps-free base ring Z/p^a (identity on Q).
  RingSpec base() const {
    RingSpec s = *this;
    s.n = 1;
    return s;
  }
  std::string to_string() const;
  bool operator==(const RingSpec&) const = default;
};

// Element of a RingSpec ring, always held in canonical form: reduced
// fraction over Q; over the truncations, n coefficients in [0, p^a) ordered
// by increasing eps power.
struct RingElement {
  RingSpec spec;
  Rational rat;              // payload when spec.is_rational()
  std::vector<long long> c;  // payload otherwise, size spec.n

  bool is_zero() const;
  bool is_unit() const;
  bool operator==(const RingElement&) const = default;
};

RingElement re_zero(const RingSpec& s);
RingElement re_one(const RingSpec& s);
RingElement re_from_int(const RingSpec& s, long long v);
RingElement re_from_rational(const RingSpec& s, const Rational& v);
// eps^j * p^i as a ring element (j < n, i < a required).
RingElement re_monomial(const RingSpec& s, int j, int i);

RingElement operator+(const RingElement& x, const RingElement& y);
RingElement operator-(const RingElement& x, const RingElement& y);
RingElement operator-(const RingElement& x);
RingElement operator*(const RingElement& x, const RingElement& y);
// Multiplicative inverse; error NotUnit if x is not a unit.
RingElement re_inv(const RingElement& x);
RingElement re_pow(const RingElement& x, long long e);  // e < 0 inverts
std::string re_to_string(const RingElement& x);

// Reduction along the tower (Q -> Z/p^a -> F_p, dropping eps precision).
// Errors: NotPIntegral (rational with denominator divisible by p),
// UnreachableTarget (target not a quotient of the source ring).
RingElement residue(const RingElement& x, const RingSpec& target);

// Square root of a unit; empty result means no root exists in the ring
// (NoRoot).  Tonelli-Shanks at the prime field, Hensel/series above it.
std::optional<RingElement> sqrt_unit(const RingElement& x);

// ------------------------------------------------------------------ Matrix

struct Matrix {
  RingSpec spec;
  int rows = 0;
  int cols = 0;
  std::vector<RingElement> e;  // row-major

  Matrix() = default;
  Matrix(const RingSpec& s, int r, int c)
      : spec(s), rows(r), cols(c),
        e(static_cast<size_t>(r) * c, re_zero(s)) {}

  RingElement& at(int i, int j) { return e[static_cast<size_t>(i) * cols + j]; }
  const RingElement& at(int i, int j) const {
    return e[static_cast<size_t>(i) * cols + j];
  }
  bool is_zero() const;
  bool is_square() const { return rows == cols; }
  bool operator==(const Matrix&) const = default;

  static Matrix zeros(const RingSpec& s, int r, int c) { return Matrix(s, r, c); }
  static Matrix identity(const RingSpec& s, int m);
  // Build from integer entries (embedded via re_from_int).
  static Matrix from_int(const RingSpec& s,
                         const std::vector<std::vector<long long>>& rows);
};

Matrix operator+(const Matrix& x, const Matrix& y);
Matrix operator-(const Matrix& x, const Matrix& y);
Matrix operator-(const Matrix& x);
Matrix operator*(const Matrix& x, const Matrix& y);
Matrix operator*(const RingElement& s, const Matrix& x);
Matrix transpose(const Matrix& x);
RingElement trace(const Matrix& x);
// A^e for e >= 0; negative e inverts first (error SingularMatrix).
Matrix mat_pow(const Matrix& x, long long e);
// Inverse over a field or local ring via unit-pivot elimination.
// Error: SingularMatrix.
Matrix mat_inv(const Matrix& x);
// Determinant via elimination (requires unit pivots over non-fields).
RingElement mat_det(const Matrix& x);
Matrix residue_matrix(const Matrix& x, const RingSpec& target);
// Entry-wise canonical lift into a larger ring of the same tower (each
// coefficient re-embedded; inverse of residue_matrix on canonical forms).
Matrix lift_matrix(const Matrix& x, const RingSpec& target);
Matrix scalar_matrix(const RingSpec& s, int m, const RingElement& v);

// ------------------------------------------------- linear solving (fields)

// Result of solve_linear over a field.  When no solution exists, left_null
// holds a certificate row vector f with f*A = 0 and f*b != 0.
struct LinearSolve {
  bool solvable = false;
  Matrix x;                    // a particular solution (free variables 0)
  std::vector<Matrix> kernel;  // basis column vectors of ker A
  int rank = 0;
  Matrix left_null;            // certificate when !solvable
};

// Solve A x = b over a field spec (Q or F_p); b is a single column.
LinearSolve solve_linear(const Matrix& A, const Matrix& b);

// Rank over a field spec.
int mat_rank(const Matrix& A);

// Cached row-echelon factorization over F_p for repeated right-hand sides:
// rank, solve, kernel and cokernel all derive from one elimination pass.
struct FpEchelon {
  long long p = 0;
  int rows = 0, cols = 0, rank = 0;
  std::vector<std::vector<long long>> R;  // reduced rows (rank of them)
  std::vector<int> pivot;                 // pivot column per reduced row
  std::vector<std::vector<long long>> E;  // transform rows: E*A = [R; 0]
  std::vector<int> free_cols;

  static FpEchelon build(const Matrix& A);
  static FpEchelon build_raw(const std::vector<std::vector<long long>>& A,
                             long long p);
  // Solution with free variables = 0, or empty when inconsistent.
  std::optional<std::vector<long long>> solve(
      const std::vector<long long>& b) const;
  // Index (into E) of a transform row certifying inconsistency, or -1.
  int inconsistent_row(const std::vector<long long>& b) const;
  std::vector<std::vector<long long>> kernel_basis() const;
  // Rows spanning {f : f*A = 0}.
  std::vector<std::vector<long long>> cokernel_rows() const;
};

// ------------------------------------------- linear solving (truncations)

// Monomial stage eps^j * p^i of the filtration, enumerated with the eps
// degree outermost (the order in which small quotient steps compose).
struct TowerStage {
  int j = 0;
  int i = 0;
};
std::vector<TowerStage> tower_stages(const RingSpec& s);

// Extract the stage digit of a matrix whose earlier-stage digits vanish:
// coefficient of eps^j, divided by p^i, reduced mod p.  Errors if the
// divisibility expected of such a matrix fails (programming error upstream).
Matrix stage_digit_matrix(const Matrix& x, TowerStage st);

// First stage at which a truncated linear system becomes unsolvable: the
// field-level system (A0, b0) and a left-null certificate f for it.
struct TruncObstruction {
  int degree = 0;  // total degree i + j of the obstructed stage
  TowerStage stage;
  Matrix A0, b0, f;  // over the residue field
};

struct TruncSolve {
  bool solvable = false;
  Matrix x;
  std::vector<Matrix> kernel;  // spanning set for the solution kernel
  std::optional<TruncObstruction> obstruction;
};

// Solve A x = b over Z/p^a, F_p[eps]/(eps^n) or the mixed truncations by
// stage-wise reduction to residue-field systems.  Unresolved stage freedoms
// stay symbolic until a later stage fixes them, so p-adic carries are
// handled exactly; over a field spec this reproduces solve_linear.
TruncSolve solve_linear_trunc(const Matrix& A, const Matrix& b);

// --------------------------------------------------------------- utilities

bool is_odd_prime(long long p);
long long mod_pow(long long base, long long e, long long m);
long long mod_inv(long long x, long long m);  // error NotUnit if gcd != 1

}  // namespace tq

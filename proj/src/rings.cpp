#include "tq/rings.hpp"

#include <algorithm>
#include <sstream>

namespace tq {

// --------------------------------------------------------------- utilities

bool is_odd_prime(long long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long long d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

long long mod_pow(long long base, long long e, long long m) {
  unsigned long long r = 1 % m, b = static_cast<unsigned long long>(((base % m) + m) % m);
  unsigned long long mm = static_cast<unsigned long long>(m);
  while (e > 0) {
    if (e & 1) r = r * b % mm;
    b = b * b % mm;
    e >>= 1;
  }
  return static_cast<long long>(r);
}

long long mod_inv(long long x, long long m) {
  long long a = ((x % m) + m) % m, b = m;
  long long u = 1, v = 0;
  while (b != 0) {
    long long q = a / b;
    a -= q * b;
    std::swap(a, b);
    u -= q * v;
    std::swap(u, v);
  }
  if (a != 1) throw error("NotUnit", "element has no inverse modulo " + std::to_string(m));
  return ((u % m) + m) % m;
}

namespace {

long long pow_ll_checked(long long p, int a) {
  long long m = 1;
  for (int i = 0; i < a; ++i) {
    m *= p;
    if (m >= (1LL << 31))
      throw error("ModulusTooLarge", "p^a must stay below 2^31");
  }
  return m;
}

void require(bool cond, const char* code, const std::string& what) {
  if (!cond) throw error(code, what);
}

}  // namespace

// ---------------------------------------------------------------- RingSpec

RingSpec RingSpec::prime_field(long long p) {
  require(is_odd_prime(p), "BadRingSpec", "p must be an odd prime");
  return RingSpec{p, 1, 1};
}

RingSpec RingSpec::mod_prime_power(long long p, int a) {
  require(is_odd_prime(p), "BadRingSpec", "p must be an odd prime");
  require(a >= 1, "BadRingSpec", "exponent a must be >= 1");
  RingSpec s{p, a, 1};
  s.modulus();  // overflow check
  return s;
}

RingSpec RingSpec::eps_trunc(const RingSpec& base, int n) {
  require(base.p != 0, "BadRingSpec", "eps truncations sit over Z/p^a, not Q");
  require(base.n == 1, "BadRingSpec", "eps truncation base must be eps-free");
  require(n >= 1, "BadRingSpec", "truncation order n must be >= 1");
  RingSpec s = base;
  s.n = n;
  return s;
}

long long RingSpec::modulus() const {
  require(p != 0, "BadRingSpec", "the rationals have no modulus");
  return pow_ll_checked(p, a);
}

std::string RingSpec::to_string() const {
  switch (kind()) {
    case RingKind::Rationals: return "Q";
    case RingKind::PrimeField: return "F_" + std::to_string(p);
    case RingKind::ModPrimePower:
      return "Z/" + std::to_string(p) + "^" + std::to_string(a);
    case RingKind::EpsTrunc: {
      std::string b = a == 1 ? "F_" + std::to_string(p)
                             : "Z/" + std::to_string(p) + "^" + std::to_string(a);
      return b + "[e]/(e^" + std::to_string(n) + ")";
    }
  }
  return "?";
}

// ------------------------------------------------------------- RingElement

bool RingElement::is_zero() const {
  if (spec.is_rational()) return rat == 0;
  return std::all_of(c.begin(), c.end(), [](long long v) { return v == 0; });
}

bool RingElement::is_unit() const {
  if (spec.is_rational()) return rat != 0;
  return c[0] % spec.p != 0;
}

RingElement re_zero(const RingSpec& s) {
  RingElement x;
  x.spec = s;
  if (!s.is_rational()) x.c.assign(s.n, 0);
  return x;
}

RingElement re_one(const RingSpec& s) { return re_from_int(s, 1); }

RingElement re_from_int(const RingSpec& s, long long v) {
  RingElement x = re_zero(s);
  if (s.is_rational()) {
    x.rat = v;
  } else {
    long long m = s.modulus();
    x.c[0] = ((v % m) + m) % m;
  }
  return x;
}

RingElement re_from_rational(const RingSpec& s, const Rational& v) {
  if (s.is_rational()) {
    RingElement x = re_zero(s);
    x.rat = v;
    return x;
  }
  long long m = s.modulus();
  BigInt num = boost::multiprecision::numerator(v);
  BigInt den = boost::multiprecision::denominator(v);
  if (den % s.p == 0)
    throw error("NotPIntegral",
                "denominator divisible by " + std::to_string(s.p));
  long long nm = static_cast<long long>(num % m);
  long long dm = static_cast<long long>(den % m);
  RingElement x = re_zero(s);
  x.c[0] = ((nm % m) + m) % m * mod_inv(dm, m) % m;
  return x;
}

RingElement re_monomial(const RingSpec& s, int j, int i) {
  require(!s.is_rational(), "BadRingSpec", "monomials live in the truncations");
  require(j >= 0 && j < s.n && i >= 0 && i < s.a, "BadRingSpec",
          "monomial exponent out of range");
  RingElement x = re_zero(s);
  long long v = 1;
  for (int t = 0; t < i; ++t) v *= s.p;
  x.c[j] = v;
  return x;
}

namespace {

void check_same_spec(const RingSpec& a, const RingSpec& b) {
  if (!(a == b))
    throw error("SpecMismatch",
                "mixed ring specs " + a.to_string() + " vs " + b.to_string());
}

}  // namespace

RingElement operator+(const RingElement& x, const RingElement& y) {
  check_same_spec(x.spec, y.spec);
  RingElement r = x;
  if (x.spec.is_rational()) {
    r.rat += y.rat;
    return r;
  }
  long long m = x.spec.modulus();
  for (int k = 0; k < x.spec.n; ++k) r.c[k] = (r.c[k] + y.c[k]) % m;
  return r;
}

RingElement operator-(const RingElement& x) {
  RingElement r = x;
  if (x.spec.is_rational()) {
    r.rat = -r.rat;
    return r;
  }
  long long m = x.spec.modulus();
  for (auto& v : r.c) v = (m - v) % m;
  return r;
}

RingElement operator-(const RingElement& x, const RingElement& y) {
  return x + (-y);
}

RingElement operator*(const RingElement& x, const RingElement& y) {
  check_same_spec(x.spec, y.spec);
  RingElement r = re_zero(x.spec);
  if (x.spec.is_rational()) {
    r.rat = x.rat * y.rat;
    return r;
  }
  long long m = x.spec.modulus();
  for (int i = 0; i < x.spec.n; ++i) {
    if (x.c[i] == 0) continue;
    for (int j = 0; i + j < x.spec.n; ++j)
      r.c[i + j] = (r.c[i + j] + x.c[i] * y.c[j]) % m;
  }
  return r;
}

RingElement re_inv(const RingElement& x) {
  if (x.spec.is_rational()) {
    if (x.rat == 0) throw error("NotUnit", "zero has no inverse");
    RingElement r = re_zero(x.spec);
    r.rat = 1 / x.rat;
    return r;
  }
  if (!x.is_unit()) throw error("NotUnit", "constant term divisible by p");
  long long m = x.spec.modulus();
  RingElement r = re_zero(x.spec);
  r.c[0] = mod_inv(x.c[0], m);
  // Series inversion: b_j = -b_0 * sum_{i=1..j} c_i b_{j-i}.
  for (int j = 1; j < x.spec.n; ++j) {
    long long s = 0;
    for (int i = 1; i <= j; ++i) s = (s + x.c[i] * r.c[j - i]) % m;
    r.c[j] = (m - s) % m * r.c[0] % m;
  }
  return r;
}

RingElement re_pow(const RingElement& x, long long e) {
  RingElement b = e < 0 ? re_inv(x) : x;
  unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e)
                               : static_cast<unsigned long long>(e);
  RingElement r = re_one(x.spec);
  while (k > 0) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

std::string re_to_string(const RingElement& x) {
  if (x.spec.is_rational()) {
    std::ostringstream os;
    os << x.rat;
    return os.str();
  }
  if (x.spec.n == 1) return std::to_string(x.c[0]);
  std::string out;
  for (int j = 0; j < x.spec.n; ++j) {
    if (x.c[j] == 0) continue;
    if (!out.empty()) out += "+";
    if (j == 0) {
      out += std::to_string(x.c[j]);
    } else {
      if (x.c[j] != 1) out += std::to_string(x.c[j]) + "*";
      out += j == 1 ? "e" : "e^" + std::to_string(j);
    }
  }
  return out.empty() ? "0" : out;
}

RingElement residue(const RingElement& x, const RingSpec& target) {
  const RingSpec& s = x.spec;
  if (s.is_rational()) {
    if (target.is_rational()) return x;
    if (target.n > 1)
      throw error("UnreachableTarget",
                  "cannot reduce Q into an eps truncation");
    return re_from_rational(target, x.rat);  // NotPIntegral when it applies
  }
  if (target.is_rational() || target.p != s.p || target.a > s.a ||
      target.n > s.n)
    throw error("UnreachableTarget", "no reduction map " + s.to_string() +
                                         " -> " + target.to_string());
  RingElement r = re_zero(target);
  long long m = target.modulus();
  for (int j = 0; j < target.n; ++j) r.c[j] = x.c[j] % m;
  return r;
}

// -------------------------------------------------------------- sqrt_unit

namespace {

// Tonelli-Shanks over F_p; x a unit.  Returns the representative in
// [1, (p-1)/2] so results are canonical.
std::optional<long long> sqrt_mod_p(long long x, long long p) {
  x = ((x % p) + p) % p;
  if (x == 0) return 0;
  if (mod_pow(x, (p - 1) / 2, p) != 1) return std::nullopt;
  long long r;
  if (p % 4 == 3) {
    r = mod_pow(x, (p + 1) / 4, p);
  } else {
    // Write p - 1 = q * 2^s with q odd.
    long long q = p - 1;
    int s = 0;
    while (q % 2 == 0) q /= 2, ++s;
    long long z = 2;
    while (mod_pow(z, (p - 1) / 2, p) != p - 1) ++z;
    long long m = s;
    long long c = mod_pow(z, q, p);
    long long t = mod_pow(x, q, p);
    r = mod_pow(x, (q + 1) / 2, p);
    while (t != 1) {
      long long i = 0, tt = t;
      while (tt != 1) {
        tt = tt * tt % p;
        ++i;
      }
      long long b = mod_pow(c, 1LL << (m - i - 1), p);
      m = i;
      c = b * b % p;
      t = t * c % p;
      r = r * b % p;
    }
  }
  return std::min(r, p - r);
}

// Hensel lift of a unit square root from F_p to Z/p^a.
long long sqrt_mod_pa(long long r0, long long x, long long p, int a) {
  long long m = 1;
  for (int i = 0; i < a; ++i) m *= p;
  long long r = r0 % m;
  for (int it = 1; it < a; ++it) {
    // r <- r - (r^2 - x) / (2r)   (exact Newton step mod p^a)
    long long num = ((r * r - x) % m + m) % m;
    long long den = mod_inv(2 * r % m, m);
    r = ((r - num % m * den) % m + m) % m;
  }
  return r;
}

}  // namespace

std::optional<RingElement> sqrt_unit(const RingElement& x) {
  const RingSpec& s = x.spec;
  if (s.is_rational()) {
    if (x.rat < 0) return std::nullopt;
    BigInt num = boost::multiprecision::numerator(x.rat);
    BigInt den = boost::multiprecision::denominator(x.rat);
    BigInt rn = boost::multiprecision::sqrt(num);
    BigInt rd = boost::multiprecision::sqrt(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    RingElement r = re_zero(s);
    r.rat = Rational(rn, rd);
    return r;
  }
  require(x.is_unit(), "NotUnit", "sqrt_unit requires a unit argument");
  long long m = s.modulus();
  auto r0 = sqrt_mod_p(x.c[0] % s.p, s.p);
  if (!r0) return std::nullopt;
  long long b0 = sqrt_mod_pa(*r0, x.c[0], s.p, s.a);
  RingElement r = re_zero(s);
  r.c[0] = b0;
  // Series extension: 2 b_0 b_j = c_j - sum_{i=1..j-1} b_i b_{j-i}.
  long long half = mod_inv(2 * b0 % m, m);
  for (int j = 1; j < s.n; ++j) {
    long long acc = x.c[j];
    for (int i = 1; i < j; ++i) acc = ((acc - r.c[i] * r.c[j - i]) % m + m) % m;
    r.c[j] = acc % m * half % m;
  }
  return r;
}

// ------------------------------------------------------------------ Matrix

bool Matrix::is_zero() const {
  return std::all_of(e.begin(), e.end(),
                     [](const RingElement& v) { return v.is_zero(); });
}

Matrix Matrix::identity(const RingSpec& s, int m) {
  Matrix r(s, m, m);
  for (int i = 0; i < m; ++i) r.at(i, i) = re_one(s);
  return r;
}

Matrix Matrix::from_int(const RingSpec& s,
                        const std::vector<std::vector<long long>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  Matrix m(s, r, c);
  for (int i = 0; i < r; ++i) {
    require(static_cast<int>(rows[i].size()) == c, "BadShape",
            "ragged matrix literal");
    for (int j = 0; j < c; ++j) m.at(i, j) = re_from_int(s, rows[i][j]);
  }
  return m;
}

namespace {

void check_same_shape(const Matrix& x, const Matrix& y) {
  check_same_spec(x.spec, y.spec);
  if (x.rows != y.rows || x.cols != y.cols)
    throw error("BadShape", "matrix shape mismatch");
}

}  // namespace

Matrix operator+(const Matrix& x, const Matrix& y) {
  check_same_shape(x, y);
  Matrix r = x;
  for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = r.e[k] + y.e[k];
  return r;
}

Matrix operator-(const Matrix& x, const Matrix& y) {
  check_same_shape(x, y);
  Matrix r = x;
  for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = r.e[k] - y.e[k];
  return r;
}

Matrix operator-(const Matrix& x) {
  Matrix r = x;
  for (auto& v : r.e) v = -v;
  return r;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  check_same_spec(x.spec, y.spec);
  if (x.cols != y.rows) throw error("BadShape", "matrix product shape mismatch");
  Matrix r(x.spec, x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const RingElement& v = x.at(i, k);
      if (v.is_zero()) continue;
      for (int j = 0; j < y.cols; ++j)
        r.at(i, j) = r.at(i, j) + v * y.at(k, j);
    }
  return r;
}

Matrix operator*(const RingElement& s, const Matrix& x) {
  Matrix r = x;
  for (auto& v : r.e) v = s * v;
  return r;
}

Matrix transpose(const Matrix& x) {
  Matrix r(x.spec, x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

RingElement trace(const Matrix& x) {
  require(x.is_square(), "BadShape", "trace of a non-square matrix");
  RingElement t = re_zero(x.spec);
  for (int i = 0; i < x.rows; ++i) t = t + x.at(i, i);
  return t;
}

Matrix mat_pow(const Matrix& x, long long e) {
  require(x.is_square(), "BadShape", "power of a non-square matrix");
  Matrix b = e < 0 ? mat_inv(x) : x;
  unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e)
                               : static_cast<unsigned long long>(e);
  Matrix r = Matrix::identity(x.spec, x.rows);
  while (k > 0) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

Matrix mat_inv(const Matrix& x) {
  require(x.is_square(), "BadShape", "inverse of a non-square matrix");
  int m = x.rows;
  Matrix w = x;
  Matrix inv = Matrix::identity(x.spec, m);
  for (int col = 0; col < m; ++col) {
    int piv = -1;
    for (int r = col; r < m; ++r)
      if (w.at(r, col).is_unit()) {
        piv = r;
        break;
      }
    if (piv < 0) throw error("SingularMatrix", "no unit pivot in column");
    for (int j = 0; j < m; ++j) {
      std::swap(w.e[static_cast<size_t>(piv) * m + j], w.e[static_cast<size_t>(col) * m + j]);
      std::swap(inv.e[static_cast<size_t>(piv) * m + j], inv.e[static_cast<size_t>(col) * m + j]);
    }
    RingElement d = re_inv(w.at(col, col));
    for (int j = 0; j < m; ++j) {
      w.at(col, j) = d * w.at(col, j);
      inv.at(col, j) = d * inv.at(col, j);
    }
    for (int r = 0; r < m; ++r) {
      if (r == col || w.at(r, col).is_zero()) continue;
      RingElement f = w.at(r, col);
      for (int j = 0; j < m; ++j) {
        w.at(r, j) = w.at(r, j) - f * w.at(col, j);
        inv.at(r, j) = inv.at(r, j) - f * inv.at(col, j);
      }
    }
  }
  return inv;
}

namespace {

RingElement det_cofactor(const Matrix& x) {
  int m = x.rows;
  if (m == 0) return re_one(x.spec);
  if (m == 1) return x.at(0, 0);
  RingElement acc = re_zero(x.spec);
  for (int r = 0; r < m; ++r) {
    if (x.at(r, 0).is_zero()) continue;
    Matrix sub(x.spec, m - 1, m - 1);
    for (int i = 0, si = 0; i < m; ++i) {
      if (i == r) continue;
      for (int j = 1; j < m; ++j) sub.at(si, j - 1) = x.at(i, j);
      ++si;
    }
    RingElement term = x.at(r, 0) * det_cofactor(sub);
    acc = r % 2 == 0 ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace

RingElement mat_det(const Matrix& x) {
  require(x.is_square(), "BadShape", "determinant of a non-square matrix");
  if (!x.spec.is_field()) {
    require(x.rows <= 10, "BadShape",
            "cofactor determinant limited to small matrices");
    return det_cofactor(x);
  }
  Matrix w = x;
  int m = x.rows;
  RingElement det = re_one(x.spec);
  for (int col = 0; col < m; ++col) {
    int piv = -1;
    for (int r = col; r < m; ++r)
      if (!w.at(r, col).is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) return re_zero(x.spec);
    if (piv != col) {
      for (int j = 0; j < m; ++j)
        std::swap(w.e[static_cast<size_t>(piv) * m + j], w.e[static_cast<size_t>(col) * m + j]);
      det = -det;
    }
    det = det * w.at(col, col);
    RingElement d = re_inv(w.at(col, col));
    for (int r = col + 1; r < m; ++r) {
      if (w.at(r, col).is_zero()) continue;
      RingElement f = d * w.at(r, col);
      for (int j = col; j < m; ++j) w.at(r, j) = w.at(r, j) - f * w.at(col, j);
    }
  }
  return det;
}

Matrix residue_matrix(const Matrix& x, const RingSpec& target) {
  Matrix r(target, x.rows, x.cols);
  for (size_t k = 0; k < x.e.size(); ++k) r.e[k] = residue(x.e[k], target);
  return r;
}

Matrix lift_matrix(const Matrix& x, const RingSpec& target) {
  Matrix r(target, x.rows, x.cols);
  for (size_t k = 0; k < x.e.size(); ++k) {
    const RingElement& v = x.e[k];
    if (v.spec.is_rational()) {
      r.e[k] = re_from_rational(target, v.rat);
    } else {
      require(!target.is_rational() && target.p == v.spec.p &&
                  target.a >= v.spec.a && target.n >= v.spec.n,
              "UnreachableTarget", "lift target is not above the source ring");
      RingElement w = re_zero(target);
      for (int j = 0; j < v.spec.n; ++j) w.c[j] = v.c[j];
      r.e[k] = w;
    }
  }
  return r;
}

Matrix scalar_matrix(const RingSpec& s, int m, const RingElement& v) {
  Matrix r(s, m, m);
  for (int i = 0; i < m; ++i) r.at(i, i) = v;
  return r;
}

// ------------------------------------------------------------- solve (F_p)

FpEchelon FpEchelon::build(const Matrix& A) {
  require(A.spec.kind() == RingKind::PrimeField, "BadRingSpec",
          "FpEchelon requires a prime-field matrix");
  std::vector<std::vector<long long>> rows(A.rows,
                                           std::vector<long long>(A.cols));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) rows[i][j] = A.at(i, j).c[0];
  return build_raw(rows, A.spec.p);
}

FpEchelon FpEchelon::build_raw(const std::vector<std::vector<long long>>& A,
                               long long p) {
  FpEchelon f;
  f.p = p;
  f.rows = static_cast<int>(A.size());
  f.cols = f.rows == 0 ? 0 : static_cast<int>(A[0].size());
  std::vector<std::vector<long long>> W = A;
  for (auto& row : W)
    for (auto& v : row) v = ((v % p) + p) % p;
  std::vector<std::vector<long long>> T(f.rows, std::vector<long long>(f.rows, 0));
  for (int i = 0; i < f.rows; ++i) T[i][i] = 1;

  int r = 0;
  std::vector<int> piv;
  for (int col = 0; col < f.cols && r < f.rows; ++col) {
    int sel = -1;
    for (int i = r; i < f.rows; ++i)
      if (W[i][col] % p != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(W[sel], W[r]);
    std::swap(T[sel], T[r]);
    long long inv = mod_inv(W[r][col], p);
    for (int j = 0; j < f.cols; ++j) W[r][j] = W[r][j] % p * inv % p;
    for (int j = 0; j < f.rows; ++j) T[r][j] = T[r][j] % p * inv % p;
    for (int i = 0; i < f.rows; ++i) {
      if (i == r) continue;
      long long v = ((W[i][col] % p) + p) % p;
      if (v == 0) continue;
      for (int j = 0; j < f.cols; ++j)
        W[i][j] = ((W[i][j] - v * W[r][j]) % p + p) % p;
      for (int j = 0; j < f.rows; ++j)
        T[i][j] = ((T[i][j] - v * T[r][j]) % p + p) % p;
    }
    piv.push_back(col);
    ++r;
  }
  f.rank = r;
  f.pivot = piv;
  f.R.assign(W.begin(), W.begin() + r);
  f.E = std::move(T);
  std::vector<char> is_piv(f.cols, 0);
  for (int c : piv) is_piv[c] = 1;
  for (int c = 0; c < f.cols; ++c)
    if (!is_piv[c]) f.free_cols.push_back(c);
  return f;
}

int FpEchelon::inconsistent_row(const std::vector<long long>& b) const {
  for (int i = rank; i < rows; ++i) {
    long long acc = 0;
    for (int j = 0; j < rows; ++j) acc = (acc + E[i][j] % p * (b[j] % p)) % p;
    if (((acc % p) + p) % p != 0) return i;
  }
  return -1;
}

std::optional<std::vector<long long>> FpEchelon::solve(
    const std::vector<long long>& b) const {
  if (inconsistent_row(b) >= 0) return std::nullopt;
  std::vector<long long> x(cols, 0);
  for (int i = 0; i < rank; ++i) {
    long long acc = 0;
    for (int j = 0; j < rows; ++j) acc = (acc + E[i][j] % p * (b[j] % p)) % p;
    x[pivot[i]] = ((acc % p) + p) % p;
  }
  return x;
}

std::vector<std::vector<long long>> FpEchelon::kernel_basis() const {
  std::vector<std::vector<long long>> basis;
  for (int fc : free_cols) {
    std::vector<long long> v(cols, 0);
    v[fc] = 1;
    for (int i = 0; i < rank; ++i)
      v[pivot[i]] = ((-R[i][fc]) % p + p) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::vector<long long>> FpEchelon::cokernel_rows() const {
  std::vector<std::vector<long long>> out;
  for (int i = rank; i < rows; ++i) out.push_back(E[i]);
  return out;
}

// --------------------------------------------------------------- solve (Q)

namespace {

struct QSolve {
  bool solvable = false;
  std::vector<Rational> x;
  std::vector<std::vector<Rational>> kernel;
  int rank = 0;
  std::vector<Rational> left_null;
};

QSolve solve_rational(const std::vector<std::vector<Rational>>& A,
                      const std::vector<Rational>& b) {
  int rows = static_cast<int>(A.size());
  int cols = rows == 0 ? 0 : static_cast<int>(A[0].size());
  std::vector<std::vector<Rational>> W = A;
  std::vector<std::vector<Rational>> T(rows, std::vector<Rational>(rows, 0));
  for (int i = 0; i < rows; ++i) T[i][i] = 1;

  int r = 0;
  std::vector<int> piv;
  for (int col = 0; col < cols && r < rows; ++col) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (W[i][col] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(W[sel], W[r]);
    std::swap(T[sel], T[r]);
    Rational inv = 1 / W[r][col];
    for (auto& v : W[r]) v *= inv;
    for (auto& v : T[r]) v *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || W[i][col] == 0) continue;
      Rational f = W[i][col];
      for (int j = 0; j < cols; ++j) W[i][j] -= f * W[r][j];
      for (int j = 0; j < rows; ++j) T[i][j] -= f * T[r][j];
    }
    piv.push_back(col);
    ++r;
  }

  QSolve out;
  out.rank = r;
  std::vector<Rational> y(rows, 0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j) y[i] += T[i][j] * b[j];
  for (int i = r; i < rows; ++i)
    if (y[i] != 0) {
      out.left_null = T[i];
      return out;
    }
  out.solvable = true;
  out.x.assign(cols, 0);
  for (int i = 0; i < r; ++i) out.x[piv[i]] = y[i];
  std::vector<char> is_piv(cols, 0);
  for (int c : piv) is_piv[c] = 1;
  for (int fc = 0; fc < cols; ++fc) {
    if (is_piv[fc]) continue;
    std::vector<Rational> v(cols, 0);
    v[fc] = 1;
    for (int i = 0; i < r; ++i) v[piv[i]] = -W[i][fc];
    out.kernel.push_back(std::move(v));
  }
  return out;
}

}  // namespace

int mat_rank(const Matrix& A) {
  require(A.spec.is_field(), "BadRingSpec", "rank requires a field");
  if (A.spec.is_rational()) {
    std::vector<std::vector<Rational>> rows(A.rows,
                                            std::vector<Rational>(A.cols));
    for (int i = 0; i < A.rows; ++i)
      for (int j = 0; j < A.cols; ++j) rows[i][j] = A.at(i, j).rat;
    return solve_rational(rows, std::vector<Rational>(A.rows, 0)).rank;
  }
  return FpEchelon::build(A).rank;
}

LinearSolve solve_linear(const Matrix& A, const Matrix& b) {
  check_same_spec(A.spec, b.spec);
  require(A.spec.is_field(), "BadRingSpec",
          "solve_linear requires a field; use solve_linear_trunc");
  require(b.cols == 1 && b.rows == A.rows, "BadShape",
          "right-hand side must be a column of matching height");

  LinearSolve out;
  if (A.rows == 0) {
    // No constraints: everything solves and the kernel is the whole space.
    out.solvable = true;
    out.x = Matrix(A.spec, A.cols, 1);
    for (int j = 0; j < A.cols; ++j) {
      Matrix k(A.spec, A.cols, 1);
      k.at(j, 0) = re_one(A.spec);
      out.kernel.push_back(std::move(k));
    }
    return out;
  }
  if (A.spec.is_rational()) {
    std::vector<std::vector<Rational>> rows(A.rows,
                                            std::vector<Rational>(A.cols));
    std::vector<Rational> rhs(A.rows);
    for (int i = 0; i < A.rows; ++i) {
      rhs[i] = b.at(i, 0).rat;
      for (int j = 0; j < A.cols; ++j) rows[i][j] = A.at(i, j).rat;
    }
    QSolve qs = solve_rational(rows, rhs);
    out.solvable = qs.solvable;
    out.rank = qs.rank;
    if (!qs.solvable) {
      out.left_null = Matrix(A.spec, 1, A.rows);
      for (int j = 0; j < A.rows; ++j)
        out.left_null.at(0, j) = re_from_rational(A.spec, qs.left_null[j]);
      return out;
    }
    out.x = Matrix(A.spec, A.cols, 1);
    for (int j = 0; j < A.cols; ++j)
      out.x.at(j, 0) = re_from_rational(A.spec, qs.x[j]);
    for (const auto& kv : qs.kernel) {
      Matrix k(A.spec, A.cols, 1);
      for (int j = 0; j < A.cols; ++j) k.at(j, 0) = re_from_rational(A.spec, kv[j]);
      out.kernel.push_back(std::move(k));
    }
    return out;
  }

  FpEchelon f = FpEchelon::build(A);
  std::vector<long long> rhs(A.rows);
  for (int i = 0; i < A.rows; ++i) rhs[i] = b.at(i, 0).c[0];
  out.rank = f.rank;
  int bad = f.inconsistent_row(rhs);
  if (bad >= 0) {
    out.left_null = Matrix(A.spec, 1, A.rows);
    for (int j = 0; j < A.rows; ++j)
      out.left_null.at(0, j) = re_from_int(A.spec, f.E[bad][j]);
    return out;
  }
  out.solvable = true;
  auto x = *f.solve(rhs);
  out.x = Matrix(A.spec, A.cols, 1);
  for (int j = 0; j < A.cols; ++j) out.x.at(j, 0) = re_from_int(A.spec, x[j]);
  for (const auto& kv : f.kernel_basis()) {
    Matrix k(A.spec, A.cols, 1);
    for (int j = 0; j < A.cols; ++j) k.at(j, 0) = re_from_int(A.spec, kv[j]);
    out.kernel.push_back(std::move(k));
  }
  return out;
}

// ------------------------------------------------------ solve (truncations)

std::vector<TowerStage> tower_stages(const RingSpec& s) {
  require(!s.is_rational(), "BadRingSpec", "the rationals have no stages");
  std::vector<TowerStage> st;
  for (int j = 0; j < s.n; ++j)
    for (int i = 0; i < s.a; ++i) st.push_back({j, i});
  return st;
}

Matrix stage_digit_matrix(const Matrix& x, TowerStage st) {
  const RingSpec& s = x.spec;
  require(!s.is_rational(), "BadRingSpec", "stage digits live in truncations");
  long long pi = 1;
  for (int t = 0; t < st.i; ++t) pi *= s.p;
  Matrix r(s.residue_field(), x.rows, x.cols);
  for (size_t k = 0; k < x.e.size(); ++k) {
    const RingElement& v = x.e[k];
    for (int j = 0; j < st.j; ++j)
      require(v.c[j] == 0, "InternalInvariant",
              "earlier eps coefficient nonzero in stage digit extraction");
    require(v.c[st.j] % pi == 0, "InternalInvariant",
            "stage digit not divisible by p^i");
    r.e[k] = re_from_int(r.spec, v.c[st.j] / pi % s.p);
  }
  return r;
}

TruncSolve solve_linear_trunc(const Matrix& A, const Matrix& b) {
  check_same_spec(A.spec, b.spec);
  require(b.cols == 1 && b.rows == A.rows, "BadShape",
          "right-hand side must be a column of matching height");
  const RingSpec& s = A.spec;

  TruncSolve out;
  if (s.is_field()) {
    LinearSolve ls = solve_linear(A, b);
    out.solvable = ls.solvable;
    out.x = ls.x;
    out.kernel = ls.kernel;
    if (!ls.solvable)
      out.obstruction = TruncObstruction{0, {0, 0}, A, b, ls.left_null};
    return out;
  }

  const RingSpec k = s.residue_field();
  Matrix A0k = residue_matrix(A, k);

  Matrix u(s, A.cols, 1);
  std::vector<Matrix> params;  // symbolic kernel directions accumulated so far

  for (TowerStage st : tower_stages(s)) {
    Matrix r0 = b - A * u;
    std::vector<Matrix> w;
    w.reserve(params.size());
    for (const auto& P : params) w.push_back(A * P);

    // Residue-field system in (delta, theta): A0 delta + sum theta_t W_t = r0
    // at this stage's digit.
    int t = static_cast<int>(params.size());
    Matrix sys(k, A.rows, A.cols + t);
    Matrix rhs = stage_digit_matrix(r0, st);
    for (int i = 0; i < A.rows; ++i)
      for (int j = 0; j < A.cols; ++j) sys.at(i, j) = A0k.at(i, j);
    for (int c = 0; c < t; ++c) {
      Matrix d = stage_digit_matrix(w[c], st);
      for (int i = 0; i < A.rows; ++i) sys.at(i, A.cols + c) = d.at(i, 0);
    }

    LinearSolve ls = solve_linear(sys, rhs);
    if (!ls.solvable) {
      out.obstruction =
          TruncObstruction{st.i + st.j, st, sys, rhs, ls.left_null};
      return out;
    }

    RingElement mono = re_monomial(s, st.j, st.i);
    auto combine = [&](const Matrix& coeffs) {
      // coeffs: (cols + t) x 1 over k -> column over s.
      Matrix col(s, A.cols, 1);
      for (int j = 0; j < A.cols; ++j)
        col.at(j, 0) = mono * re_from_int(s, coeffs.at(j, 0).c[0]);
      for (int c = 0; c < t; ++c) {
        RingElement th = re_from_int(s, coeffs.at(A.cols + c, 0).c[0]);
        if (th.is_zero()) continue;
        col = col + th * params[c];
      }
      return col;
    };

    u = u + combine(ls.x);
    std::vector<Matrix> next;
    for (const auto& kv : ls.kernel) {
      Matrix col = combine(kv);
      if (!col.is_zero()) next.push_back(std::move(col));
    }
    params = std::move(next);

    // Parameter count grows at most by cols per stage (kernel of the stage
    // system); anything past that bound indicates a bookkeeping bug.
    if (params.size() > static_cast<size_t>(A.cols) * tower_stages(s).size())
      throw error("InternalInvariant", "trunc solver parameter blow-up");
  }

  out.solvable = true;
  out.x = u;
  out.kernel = params;
  return out;
}

}  // namespace tq

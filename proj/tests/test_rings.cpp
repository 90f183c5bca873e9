#include "test_support.hpp"

#include "tq/rings.hpp"

using namespace tq;

namespace {

RingElement random_element(const RingSpec& s, std::mt19937_64& rng) {
  if (s.is_rational()) {
    std::uniform_int_distribution<long long> num(-20, 20);
    std::uniform_int_distribution<long long> den(1, 12);
    return re_from_rational(s, Rational(num(rng), den(rng)));
  }
  std::uniform_int_distribution<long long> pick(0, s.modulus() - 1);
  RingElement x = re_zero(s);
  for (int j = 0; j < s.n; ++j)
    x = x + re_from_int(s, pick(rng)) * re_monomial(s, j, 0);
  return x;
}

Matrix random_matrix(const RingSpec& s, int r, int c, std::mt19937_64& rng) {
  Matrix m(s, r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = random_element(s, rng);
  return m;
}

}  // namespace

TEST_CASE("ring specs classify their points in the tower") {
  RingSpec q = RingSpec::rationals();
  CHECK(q.kind() == RingKind::Rationals);
  CHECK(q.is_field());
  CHECK(q.to_string() == "Q");

  RingSpec f7 = RingSpec::prime_field(7);
  CHECK(f7.kind() == RingKind::PrimeField);
  CHECK(f7.is_field());
  CHECK(f7.modulus() == 7);
  CHECK(f7.to_string() == "F_7");

  RingSpec z49 = RingSpec::mod_prime_power(7, 2);
  CHECK(z49.kind() == RingKind::ModPrimePower);
  CHECK(!z49.is_field());
  CHECK(z49.modulus() == 49);
  CHECK(z49.residue_field() == f7);
  CHECK(z49.to_string() == "Z/7^2");

  RingSpec e3 = RingSpec::eps_trunc(f7, 3);
  CHECK(e3.kind() == RingKind::EpsTrunc);
  CHECK(!e3.is_field());
  CHECK(e3.base() == f7);
  CHECK(e3.residue_field() == f7);
  CHECK(e3.to_string() == "F_7[e]/(e^3)");

  RingSpec mixed = RingSpec::eps_trunc(z49, 2);
  CHECK(mixed.base() == z49);
  CHECK(mixed.residue_field() == f7);

  CHECK_THROWS_AS(RingSpec::prime_field(4), error);
  CHECK_THROWS_AS(RingSpec::prime_field(2), error);
}

TEST_CASE("element arithmetic stays canonical in every ring") {
  std::vector<RingSpec> rings = {
      RingSpec::rationals(), RingSpec::prime_field(7),
      RingSpec::mod_prime_power(7, 2),
      RingSpec::eps_trunc(RingSpec::prime_field(7), 3),
      RingSpec::eps_trunc(RingSpec::mod_prime_power(7, 2), 2)};
  auto rng = testsup::make_rng(1);
  for (const RingSpec& s : rings) {
    RingElement zero = re_zero(s);
    RingElement one = re_one(s);
    CHECK(zero.is_zero());
    CHECK(one.is_unit());
    for (int trial = 0; trial < 40; ++trial) {
      RingElement x = random_element(s, rng);
      RingElement y = random_element(s, rng);
      RingElement z = random_element(s, rng);
      CHECK(x + y == y + x);
      CHECK((x + y) + z == x + (y + z));
      CHECK(x * (y + z) == x * y + x * z);
      CHECK(x * one == x);
      CHECK(x + zero == x);
      CHECK(x - x == zero);
      CHECK(-(-x) == x);
      if (x.is_unit()) {
        CHECK(x * re_inv(x) == one);
        CHECK(re_pow(x, -2) * re_pow(x, 2) == one);
      }
    }
  }
}

TEST_CASE("units are exactly the elements with unit residue") {
  RingSpec e2 = RingSpec::eps_trunc(RingSpec::prime_field(7), 2);
  RingElement eps = re_monomial(e2, 1, 0);
  CHECK(!eps.is_unit());
  CHECK_THROWS_AS(re_inv(eps), error);
  RingElement u = re_one(e2) + eps;
  CHECK(u.is_unit());
  CHECK(u * re_inv(u) == re_one(e2));

  RingSpec z49 = RingSpec::mod_prime_power(7, 2);
  RingElement seven = re_from_int(z49, 7);
  CHECK(!seven.is_unit());
  CHECK_THROWS_AS(re_inv(seven), error);
  CHECK(re_from_int(z49, 8).is_unit());
}

TEST_CASE("residue reduces along the tower and rejects bad denominators") {
  RingSpec q = RingSpec::rationals();
  RingSpec f7 = RingSpec::prime_field(7);
  RingSpec z49 = RingSpec::mod_prime_power(7, 2);

  RingElement half = re_from_rational(q, Rational(1, 2));
  CHECK(residue(half, f7) == re_from_int(f7, 4));
  CHECK(residue(half, z49) == re_from_int(z49, 25));

  RingElement seventh = re_from_rational(q, Rational(1, 7));
  CHECK_THROWS_WITH_AS(residue(seventh, f7),
                       doctest::Contains("NotPIntegral"), error);

  RingSpec e2 = RingSpec::eps_trunc(f7, 2);
  RingElement mixed = re_from_int(e2, 3) + re_monomial(e2, 1, 0);
  CHECK(residue(mixed, f7) == re_from_int(f7, 3));

  RingSpec f11 = RingSpec::prime_field(11);
  CHECK_THROWS_WITH_AS(residue(re_from_int(f7, 1), f11),
                       doctest::Contains("UnreachableTarget"), error);
}

TEST_CASE("square roots exist exactly for the quadratic residues") {
  RingSpec f7 = RingSpec::prime_field(7);
  // Squares mod 7 are {1, 2, 4}.
  for (long long v : {1, 2, 4}) {
    auto r = sqrt_unit(re_from_int(f7, v));
    REQUIRE(r.has_value());
    CHECK(*r * *r == re_from_int(f7, v));
  }
  for (long long v : {3, 5, 6}) CHECK(!sqrt_unit(re_from_int(f7, v)));

  RingSpec z343 = RingSpec::mod_prime_power(7, 3);
  auto r = sqrt_unit(re_from_int(z343, 2));
  REQUIRE(r.has_value());
  CHECK(*r * *r == re_from_int(z343, 2));

  RingSpec e3 = RingSpec::eps_trunc(f7, 3);
  RingElement x = re_one(e3) + re_monomial(e3, 1, 0) +
                  re_from_int(e3, 3) * re_monomial(e3, 2, 0);
  auto re = sqrt_unit(x);
  REQUIRE(re.has_value());
  CHECK(*re * *re == x);

  // -1 is not a square mod 7 but is one mod 17.
  CHECK(!sqrt_unit(re_from_int(f7, -1)));
  RingSpec f17 = RingSpec::prime_field(17);
  auto i = sqrt_unit(re_from_int(f17, -1));
  REQUIRE(i.has_value());
  CHECK(*i * *i == re_from_int(f17, -1));
}

TEST_CASE("matrix algebra round-trips inverses and determinants") {
  auto rng = testsup::make_rng(2);
  std::vector<RingSpec> rings = {
      RingSpec::prime_field(7), RingSpec::mod_prime_power(7, 2),
      RingSpec::eps_trunc(RingSpec::prime_field(11), 2)};
  for (const RingSpec& s : rings) {
    int found = 0;
    while (found < 10) {
      Matrix a = random_matrix(s, 4, 4, rng);
      RingElement det = [&] {
        try {
          return mat_det(a);
        } catch (const error&) {
          return re_zero(s);
        }
      }();
      if (!det.is_unit()) continue;
      ++found;
      Matrix inv = mat_inv(a);
      CHECK(a * inv == Matrix::identity(s, 4));
      CHECK(inv * a == Matrix::identity(s, 4));
      CHECK(mat_det(inv) * det == re_one(s));
      CHECK(mat_pow(a, 3) == a * a * a);
      CHECK(mat_pow(a, -1) == inv);
      CHECK(transpose(transpose(a)) == a);
      CHECK(trace(a * inv) == re_from_int(s, 4));
    }
  }
  Matrix sing = Matrix::from_int(RingSpec::prime_field(7), {{1, 2}, {2, 4}});
  CHECK_THROWS_WITH_AS(mat_inv(sing), doctest::Contains("SingularMatrix"),
                       error);
}

TEST_CASE("field solver produces solutions or checkable certificates") {
  auto rng = testsup::make_rng(3);
  for (const RingSpec& s :
       {RingSpec::rationals(), RingSpec::prime_field(7)}) {
    for (int trial = 0; trial < 25; ++trial) {
      Matrix a = random_matrix(s, 5, 4, rng);
      Matrix x0 = random_matrix(s, 4, 1, rng);
      LinearSolve known = solve_linear(a, a * x0);
      REQUIRE(known.solvable);
      CHECK(a * known.x == a * x0);
      for (const Matrix& k : known.kernel) CHECK((a * k).is_zero());
      CHECK(known.rank + static_cast<int>(known.kernel.size()) == 4);

      Matrix b = random_matrix(s, 5, 1, rng);
      LinearSolve any = solve_linear(a, b);
      if (any.solvable) {
        CHECK(a * any.x == b);
      } else {
        CHECK((any.left_null * a).is_zero());
        CHECK(!(any.left_null * b).is_zero());
      }
    }
  }
}

TEST_CASE("echelon factorization answers repeated queries consistently") {
  auto rng = testsup::make_rng(4);
  std::uniform_int_distribution<long long> pick(0, 6);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<long long>> rows(6, std::vector<long long>(5));
    for (auto& r : rows)
      for (auto& v : r) v = pick(rng);
    FpEchelon ech = FpEchelon::build_raw(rows, 7);

    std::vector<long long> x0(5);
    for (auto& v : x0) v = pick(rng);
    std::vector<long long> b(6, 0);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 5; ++j) b[i] = (b[i] + rows[i][j] * x0[j]) % 7;
    auto sol = ech.solve(b);
    REQUIRE(sol.has_value());
    for (int i = 0; i < 6; ++i) {
      long long acc = 0;
      for (int j = 0; j < 5; ++j) acc = (acc + rows[i][j] * (*sol)[j]) % 7;
      CHECK(acc == b[i]);
    }

    for (const auto& k : ech.kernel_basis())
      for (int i = 0; i < 6; ++i) {
        long long acc = 0;
        for (int j = 0; j < 5; ++j) acc = (acc + rows[i][j] * k[j]) % 7;
        CHECK(acc % 7 == 0);
      }
    CHECK(static_cast<int>(ech.kernel_basis().size()) == 5 - ech.rank);

    for (const auto& f : ech.cokernel_rows())
      for (int j = 0; j < 5; ++j) {
        long long acc = 0;
        for (int i = 0; i < 6; ++i) acc = (acc + f[i] * rows[i][j]) % 7;
        CHECK(acc % 7 == 0);
      }

    std::vector<long long> bad(6);
    for (auto& v : bad) v = pick(rng);
    auto maybe = ech.solve(bad);
    int row = ech.inconsistent_row(bad);
    if (maybe) {
      CHECK(row == -1);
    } else {
      REQUIRE(row >= 0);
      long long acc = 0;
      for (int i = 0; i < 6; ++i) acc = (acc + ech.E[row][i] * bad[i]) % 7;
      CHECK(acc % 7 != 0);
    }
  }
}

TEST_CASE("truncation solver handles carries that pure digit-chasing misses") {
  // 3x + 4y = 18, x + 6y = 20 over Z/49: the matrix is singular mod 7
  // (det = 14) yet (2, 3) solves exactly, so the residue solution must be
  // steered along the mod-7 kernel to clear the carry at the p-digit.
  RingSpec z49 = RingSpec::mod_prime_power(7, 2);
  Matrix a = Matrix::from_int(z49, {{3, 4}, {1, 6}});
  Matrix b = Matrix::from_int(z49, {{18}, {20}});
  TruncSolve ts = solve_linear_trunc(a, b);
  REQUIRE(ts.solvable);
  CHECK(a * ts.x == b);

  auto rng = testsup::make_rng(5);
  for (const RingSpec& s :
       {RingSpec::mod_prime_power(7, 3),
        RingSpec::eps_trunc(RingSpec::prime_field(7), 3),
        RingSpec::eps_trunc(RingSpec::mod_prime_power(7, 2), 2)}) {
    for (int trial = 0; trial < 15; ++trial) {
      Matrix m = random_matrix(s, 4, 3, rng);
      Matrix x0 = random_matrix(s, 3, 1, rng);
      TruncSolve sol = solve_linear_trunc(m, m * x0);
      REQUIRE(sol.solvable);
      CHECK(m * sol.x == m * x0);
      for (const Matrix& k : sol.kernel) CHECK((m * k).is_zero());
    }
  }
}

TEST_CASE("truncation solver certifies the first obstructed stage") {
  RingSpec z49 = RingSpec::mod_prime_power(7, 2);
  // 0 * x = 7 is fine mod 7 but obstructed at the p-digit.
  Matrix a = Matrix::from_int(z49, {{0}});
  Matrix b = Matrix::from_int(z49, {{7}});
  TruncSolve ts = solve_linear_trunc(a, b);
  CHECK(!ts.solvable);
  REQUIRE(ts.obstruction.has_value());
  CHECK(ts.obstruction->degree == 1);
  CHECK(ts.obstruction->stage.i == 1);
  CHECK(ts.obstruction->stage.j == 0);
  CHECK((ts.obstruction->f * ts.obstruction->A0).is_zero());
  CHECK(!(ts.obstruction->f * ts.obstruction->b0).is_zero());

  // eps * x = 1 is already obstructed at the residue field.
  RingSpec e2 = RingSpec::eps_trunc(RingSpec::prime_field(7), 2);
  Matrix ae(e2, 1, 1);
  ae.at(0, 0) = re_monomial(e2, 1, 0);
  TruncSolve t2 = solve_linear_trunc(ae, Matrix::identity(e2, 1));
  CHECK(!t2.solvable);
  REQUIRE(t2.obstruction.has_value());
  CHECK(t2.obstruction->degree == 0);

  // eps * x = eps is solvable even though eps is a zero divisor.
  Matrix be(e2, 1, 1);
  be.at(0, 0) = re_monomial(e2, 1, 0);
  TruncSolve t3 = solve_linear_trunc(ae, be);
  CHECK(t3.solvable);
  CHECK(ae * t3.x == be);
}

TEST_CASE("stage enumeration orders eps powers outermost") {
  RingSpec mixed = RingSpec::eps_trunc(RingSpec::mod_prime_power(7, 2), 2);
  std::vector<TowerStage> st = tower_stages(mixed);
  REQUIRE(st.size() == 4);
  CHECK((st[0].j == 0 && st[0].i == 0));
  CHECK((st[1].j == 0 && st[1].i == 1));
  CHECK((st[2].j == 1 && st[2].i == 0));
  CHECK((st[3].j == 1 && st[3].i == 1));

  Matrix x(mixed, 1, 1);
  x.at(0, 0) = re_from_int(mixed, 14) * re_monomial(mixed, 1, 0);
  Matrix digit = stage_digit_matrix(x, TowerStage{1, 1});
  CHECK(digit.spec == RingSpec::prime_field(7));
  CHECK(digit.at(0, 0) == re_from_int(RingSpec::prime_field(7), 2));
}

TEST_CASE("rational solves stay exact under coefficient blowup") {
  RingSpec q = RingSpec::rationals();
  // Hilbert-style matrix: ill-conditioned numerically, trivial exactly.
  Matrix h(q, 4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      h.at(i, j) = re_from_rational(q, Rational(1, i + j + 1));
  Matrix inv = mat_inv(h);
  CHECK(h * inv == Matrix::identity(q, 4));
  Matrix ones(q, 4, 1);
  for (int i = 0; i < 4; ++i) ones.at(i, 0) = re_one(q);
  LinearSolve ls = solve_linear(h, ones);
  REQUIRE(ls.solvable);
  CHECK(h * ls.x == ones);
}

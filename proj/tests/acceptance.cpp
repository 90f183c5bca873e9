// Acceptance gate: nine end-to-end criteria, one pass/fail line each.
// Every check is exact (integer or rational equality); there are no
// floating-point tolerances anywhere.  Exit status 0 only if all pass.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tq/centralizers.hpp"
#include "tq/cli.hpp"
#include "tq/deform.hpp"
#include "tq/explog.hpp"
#include "tq/groups.hpp"

using namespace tq;
using jsonio::Json;

namespace {

int g_failures = 0;

struct Check {
  bool ok = true;
  std::string note;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

template <typename F>
void run_criterion(int n, const std::string& desc, F&& body) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("unexpected exception: ") + e.what());
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  std::cout << "criterion " << n << ": " << (c.ok ? "PASS" : "FAIL") << " - "
            << desc << " [" << ms << " ms";
  if (!c.note.empty()) std::cout << "; " << c.note;
  std::cout << "]" << std::endl;
  if (!c.ok) ++g_failures;
}

Partition P(const std::string& text) { return Partition::parse(text); }

deform::TqRep example_rep() {
  RingSpec f7 = RingSpec::prime_field(7);
  deform::TqRep rep;
  rep.group = GroupSpec::with_gram(
      Family::GSp,
      Matrix::from_int(
          f7, {{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}}));
  rep.q = 29;
  rep.phi = Matrix::from_int(
      f7, {{1, -1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 1, 1}});
  rep.nil = Matrix::from_int(
      f7, {{0, 0, 1, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  return rep;
}

// A valid base point on a given orbit: phi the weight-scaling element for
// alpha = 2, so the twist holds with q = 4.
deform::TqRep orbit_base(const OrbitRep& orb) {
  deform::TqRep rep;
  rep.group = GroupSpec::with_gram(Family::Sp, orb.gram);
  rep.q = 4 % orb.ring.modulus();
  rep.phi = centralizers::scaling_element(orb, re_from_int(orb.ring, 2));
  rep.nil = orb.N;
  return rep;
}

// 'trials' random points of the first small-extension torsor, each chased
// through 'extra' further small extensions; returns the number that hit an
// obstruction certificate anywhere along the way.
int chase_random_lifts(const deform::TqRep& base,
                       const deform::LiftCondition& cond, bool eps_mode,
                       int extra, int trials, std::mt19937_64& rng, Check& c) {
  auto next_ring = [&](const RingSpec& r) {
    return eps_mode ? deform::eps_extension(r) : deform::p_extension(r);
  };
  deform::LiftResult first = deform::lift_step(base, cond, next_ring(base.ring()));
  if (!first.rep) {
    c.expect(false, "first extension step is already obstructed");
    return trials;
  }
  long long p = base.ring().residue_field().modulus();
  std::uniform_int_distribution<long long> pick(0, p - 1);
  int obstructed = 0;
  for (int trial = 0; trial < trials; ++trial) {
    deform::TqRep cur = *first.rep;
    if (!first.kernel.empty()) {
      const RingSpec& fs = first.kernel.front().dA.spec;
      Matrix da = Matrix::zeros(fs, cur.phi.rows, cur.phi.cols);
      Matrix db = da;
      for (const deform::LiftDirection& d : first.kernel) {
        RingElement coef = re_from_int(fs, pick(rng));
        da = da + coef * d.dA;
        db = db + coef * d.dB;
      }
      cur = deform::perturb(cur, da, db);
    }
    bool hit = false;
    for (int step = 0; step < extra && !hit; ++step) {
      deform::LiftResult lr = deform::lift_step(cur, cond, next_ring(cur.ring()));
      if (!lr.rep) {
        hit = true;
      } else {
        cur = *lr.rep;
      }
    }
    if (hit) ++obstructed;
  }
  return obstructed;
}

// Row data of the linear conditions cutting out H^0(ad^0) directly: X in
// the form algebra (lambda = 0), commuting with both phi and N, as one
// stacked integer matrix mod p acting on the m^2 entries of X.
std::vector<std::vector<long long>> h0_ad0_rows(const Matrix& J,
                                                const Matrix& phi,
                                                const Matrix& N, long long p) {
  int m = J.rows;
  auto val = [&](const Matrix& M, int i, int j) {
    return M.at(i, j).c.front() % p;
  };
  std::vector<std::vector<long long>> rows;
  auto row_of = [&](auto&& coeff) {
    std::vector<long long> r(static_cast<size_t>(m) * m, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        r[static_cast<size_t>(i) * m + j] = ((coeff(i, j) % p) + p) % p;
    return r;
  };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      // (X^T J + J X)_{ab} = 0
      rows.push_back(row_of([&](int i, int j) {
        long long v = 0;
        if (j == a) v += val(J, i, b);
        if (j == b) v += val(J, a, i);
        return v;
      }));
      // (X N - N X)_{ab} = 0
      rows.push_back(row_of([&](int i, int j) {
        long long v = 0;
        if (i == a) v += val(N, j, b);
        if (j == b) v -= val(N, a, i);
        return v;
      }));
      // (phi X - X phi)_{ab} = 0
      rows.push_back(row_of([&](int i, int j) {
        long long v = 0;
        if (j == b) v += val(phi, a, i);
        if (i == a) v -= val(phi, j, b);
        return v;
      }));
    }
  return rows;
}

// Reductive-quotient Lie dimension from the partition alone: one factor per
// distinct part, GL(l) for GL, and Aut(l) of the parity-determined type for
// the form families (even parts of Sp and odd parts of O carry orthogonal
// factors; the others symplectic).
int reductive_dim_formula(const Partition& sigma, Family f) {
  std::map<int, int> mult;
  for (int d : sigma.parts) ++mult[d];
  int dim = 0;
  for (const auto& [d, l] : mult) {
    if (f == Family::GL) {
      dim += l * l;
    } else {
      bool orthogonal = (f == Family::Sp) ? (d % 2 == 0) : (d % 2 == 1);
      dim += orthogonal ? l * (l - 1) / 2 : l * (l + 1) / 2;
    }
  }
  return dim;
}

int distinct_parts_with_parity(const Partition& sigma, int parity) {
  std::set<int> seen;
  for (int d : sigma.parts)
    if (d % 2 == parity) seen.insert(d);
  return static_cast<int>(seen.size());
}

Matrix random_strict_upper(const RingSpec& s, int m, std::mt19937_64& rng) {
  Matrix A(s, m, m);
  long long p = s.residue_field().modulus();
  std::uniform_int_distribution<long long> pick(0, p - 1);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      RingElement v = re_zero(s);
      for (int dj = 0; dj < s.n; ++dj)
        v = v + re_from_int(s, pick(rng)) * re_monomial(s, dj, 0);
      A.at(i, j) = v;
    }
  return A;
}

// Invertible by construction: unit diagonal times unitriangular factors.
Matrix random_invertible(const RingSpec& s, int m, std::mt19937_64& rng) {
  long long p = s.residue_field().modulus();
  std::uniform_int_distribution<long long> unit(1, p - 1);
  std::uniform_int_distribution<long long> any(0, p - 1);
  Matrix diag(s, m, m);
  for (int i = 0; i < m; ++i) diag.at(i, i) = re_from_int(s, unit(rng));
  Matrix lower = Matrix::identity(s, m);
  Matrix upper = Matrix::identity(s, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i > j) lower.at(i, j) = re_from_int(s, any(rng));
      if (i < j) upper.at(i, j) = re_from_int(s, any(rng));
    }
  return diag * lower * upper;
}

}  // namespace

int main() {
  std::cout << "exact acceptance gate (all checks integer/rational equality)"
            << std::endl;

  // 1. The bundled example: every admitting standard flag type yields a
  // self-verifying obstruction certificate at the second eps step.
  run_criterion(1, "bundled example emits verified flag obstructions", [](Check& c) {
    auto start = std::chrono::steady_clock::now();
    cli::RunReport rr = cli::dispatch({"deform", "paper-example"});
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    c.expect(rr.exit_code == 0, "command failed");
    if (!c.ok) return;
    const Json& result = rr.report.at("result");
    int admitting = 0;
    for (const Json& jf : result.at("flags")) {
      if (jf.at("admits") != true) continue;
      ++admitting;
      c.expect(jf.contains("certificate"), "admitting flag without certificate");
      if (!c.ok) return;
      deform::ObstructionCertificate cert =
          jsonio::certificate_from_json(jf.at("certificate"));
      c.expect(cert.degree == 2, "certificate degree is not 2");
      c.expect(cert.verify(), "certificate does not re-verify");
    }
    c.expect(admitting == 3, "expected exactly 3 admitting flag types");
    c.expect(result.at("minimally_ramified").at("lifted") == true,
             "minimally ramified chain obstructed");
    c.expect(secs <= 60.0, "runtime exceeded 60 s");
  });

  // 2. Minimally ramified smoothness: random tangent lifts always extend,
  // along both the eps chain and the p-digit chain, for the example and for
  // every admissible symplectic orbit in ranks 2 and 3 at p = 7 and 11.
  run_criterion(2, "random minimally ramified lifts never obstruct", [](Check& c) {
    std::mt19937_64 rng(20240801);
    {
      OrbitRep orb = orbits::build_representative(P("2+1+1"), Family::Sp, 4,
                                                  RingSpec::prime_field(7));
      deform::LiftCondition cond = deform::LiftCondition::minimally_ramified(orb);
      deform::TqRep rep = example_rep();
      int bad_eps = chase_random_lifts(rep, cond, true, 3, 100, rng, c);
      int bad_p = chase_random_lifts(rep, cond, false, 1, 100, rng, c);
      c.expect(bad_eps == 0, "example: eps-chain obstructions");
      c.expect(bad_p == 0, "example: p-chain obstructions");
    }
    for (long long p : {7LL, 11LL}) {
      RingSpec fp = RingSpec::prime_field(p);
      for (int m : {4, 6}) {
        for (const Partition& sigma : partitions::enumerate_admissible(m, Family::Sp)) {
          OrbitRep orb = orbits::build_representative(sigma, Family::Sp, m, fp);
          deform::TqRep base = orbit_base(orb);
          if (!deform::validate(base).empty()) {
            c.expect(false, "invalid base for " + sigma.to_string());
            return;
          }
          deform::LiftCondition cond =
              deform::LiftCondition::minimally_ramified(orb);
          int bad_eps = chase_random_lifts(base, cond, true, 3, 100, rng, c);
          int bad_p = chase_random_lifts(base, cond, false, 1, 100, rng, c);
          std::ostringstream tag;
          tag << "Sp_" << m << " " << sigma.to_string() << " at p = " << p;
          c.expect(bad_eps == 0, tag.str() + ": eps-chain obstructions");
          c.expect(bad_p == 0, tag.str() + ": p-chain obstructions");
          if (!c.ok) return;
        }
      }
    }
  });

  // 3. Tangent dimensions by exact rank, with the fixed-similitude
  // deformation dimension cross-checked against a direct kernel count.
  run_criterion(3, "tangent dimensions match the direct kernel count", [](Check& c) {
    deform::TqRep rep = example_rep();
    OrbitRep orb = orbits::build_representative(P("2+1+1"), Family::Sp, 4,
                                                RingSpec::prime_field(7));
    deform::TangentReport mr =
        deform::tangent_report(rep, deform::LiftCondition::minimally_ramified(orb));
    deform::TangentReport mrf = deform::tangent_report(
        rep, deform::LiftCondition::minimally_ramified(orb, 1));
    c.expect(mr.dim_lifting == 11, "free-similitude lifting dim != 11");
    c.expect(mrf.dim_lifting == 10, "fixed-similitude lifting dim != 10");

    FpEchelon ech = FpEchelon::build_raw(
        h0_ad0_rows(rep.group.gram, rep.phi, rep.nil, 7), 7);
    int direct = static_cast<int>(ech.kernel_basis().size());
    c.expect(direct == 3, "direct H^0(ad^0) kernel is not 3-dimensional");
    c.expect(mrf.dim_h0_ad0 == direct, "reported H^0(ad^0) disagrees");
    c.expect(mrf.dim_deformation == direct,
             "fixed-similitude deformation dim != H^0(ad^0)");
  });

  // 4. Purity: representatives keep their Jordan type over Q and mod p, and
  // the rank-3 contrast pair classifies as (pure, impure) at p = 7.
  run_criterion(4, "representatives are pure at p = 7, 17, 23", [](Check& c) {
    std::vector<RingSpec> rings = {
        RingSpec::rationals(), RingSpec::prime_field(7),
        RingSpec::prime_field(17), RingSpec::prime_field(23)};
    for (Family f : {Family::Sp, Family::O, Family::GL})
      for (int m = 1; m <= 8; ++m)
        for (const Partition& sigma : partitions::enumerate_admissible(m, f))
          for (const RingSpec& ring : rings) {
            OrbitRep rep = orbits::build_representative(sigma, f, m, ring);
            if (!(orbits::jordan_type(rep.N) == sigma)) {
              c.expect(false, family_name(f) + " " + sigma.to_string() +
                                  " changes type over " + ring.to_string());
              return;
            }
          }
    RingSpec q = RingSpec::rationals();
    Matrix n1 = Matrix::from_int(q, {{0, 1, 0}, {0, 0, 0}, {0, 0, 0}});
    Matrix n2 = n1;
    n2.at(1, 2) = re_from_int(q, 7);
    c.expect(orbits::purity(n1, 7).pure, "the integral 2+1 matrix is not pure");
    orbits::PurityReport pr = orbits::purity(n2, 7);
    c.expect(!pr.pure, "the p-divisible variant is not flagged impure");
    c.expect(pr.over_q == P("3") && pr.residue == P("2+1"),
             "impure pair types are wrong");
  });

  // 5. Pairing normalization: exact over Z/17^a; over F_7 exactly the
  // orthogonal cases needing sqrt(-1) fail, and report that radicand.
  run_criterion(5, "normalization is exact, failing only without sqrt(-1)", [](Check& c) {
    for (int a = 1; a <= 3; ++a) {
      RingSpec ring = a == 1 ? RingSpec::prime_field(17)
                             : RingSpec::mod_prime_power(17, a);
      for (Family f : {Family::Sp, Family::O})
        for (int m = 1; m <= 8; ++m)
          for (const Partition& sigma : partitions::enumerate_admissible(m, f)) {
            OrbitRep rep = orbits::build_representative(sigma, f, m, ring);
            orbits::NormalizeResult nr = orbits::normalize_to_standard(rep);
            if (!nr.C) {
              c.expect(false, family_name(f) + " " + sigma.to_string() +
                                  " failed over " + ring.to_string());
              return;
            }
            bool exact = transpose(*nr.C) * rep.gram * *nr.C == nr.J_std;
            bool standard = nr.J_std == orbits::standard_gram(
                                            rep.family == Family::Sp ? -1 : 1,
                                            m, ring);
            if (!exact || !standard) {
              c.expect(false, family_name(f) + " " + sigma.to_string() +
                                  " inexact over " + ring.to_string());
              return;
            }
          }
    }
    RingSpec f7 = RingSpec::prime_field(7);
    int failures_needing_i = 0;
    for (int m = 1; m <= 8; ++m) {
      for (const Partition& sigma : partitions::enumerate_admissible(m, Family::O)) {
        OrbitRep rep = orbits::build_representative(sigma, Family::O, m, f7);
        orbits::NormalizeResult nr = orbits::normalize_to_standard(rep);
        if (!nr.C) {
          ++failures_needing_i;
          c.expect(nr.missing.value_or(0) == -1,
                   "orthogonal failure not blamed on sqrt(-1)");
        } else {
          c.expect(transpose(*nr.C) * rep.gram * *nr.C == nr.J_std,
                   "orthogonal success inexact over F_7");
        }
      }
      for (const Partition& sigma : partitions::enumerate_admissible(m, Family::Sp)) {
        OrbitRep rep = orbits::build_representative(sigma, Family::Sp, m, f7);
        c.expect(orbits::normalize_to_standard(rep).C.has_value(),
                 "a symplectic case failed over F_7");
      }
    }
    c.expect(failures_needing_i > 0, "no orthogonal case exercised sqrt(-1)");
  });

  // 6. Component sections: counts 2^t (2^{t-1} for SO), pairwise-distinct
  // invariant tuples, exact commutation and group membership over Z/p^3.
  run_criterion(6, "component sections are exact over Z/p^3", [](Check& c) {
    for (long long p : {7LL, 17LL}) {
      RingSpec ring = RingSpec::mod_prime_power(p, 3);
      for (Family f : {Family::Sp, Family::O, Family::SO})
        for (int m = 1; m <= 8; ++m)
          for (const Partition& sigma : partitions::enumerate_admissible(m, f)) {
            OrbitRep rep = orbits::build_representative(sigma, f, m, ring);
            std::vector<centralizers::Section> secs =
                centralizers::component_sections(rep);
            int t = distinct_parts_with_parity(sigma, f == Family::Sp ? 0 : 1);
            long long expected = f == Family::SO
                                     ? (t > 0 ? 1LL << (t - 1) : 1)
                                     : 1LL << t;
            std::string tag = family_name(f) + " " + sigma.to_string() +
                              " at p = " + std::to_string(p);
            if (static_cast<long long>(secs.size()) != expected) {
              c.expect(false, tag + ": wrong section count");
              return;
            }
            std::set<std::vector<std::pair<int, int>>> tuples;
            for (const centralizers::Section& s : secs) {
              tuples.insert(s.tuple);
              if (!(s.g * rep.N == rep.N * s.g)) {
                c.expect(false, tag + ": section does not commute");
                return;
              }
              if (!centralizers::group_membership(s.g, rep.gram,
                                                  re_one(ring))) {
                c.expect(false, tag + ": section leaves the group");
                return;
              }
              if (f == Family::SO && !(mat_det(s.g) == re_one(ring))) {
                c.expect(false, tag + ": special section has det != 1");
                return;
              }
            }
            if (static_cast<long long>(tuples.size()) != expected) {
              c.expect(false, tag + ": tuples not pairwise distinct");
              return;
            }
          }
    }
  });

  // 7. exp/log: 1000 random nilpotents across sizes and rings; round trips,
  // the power law, conjugation equivariance, and the membership pairing.
  run_criterion(7, "exp/log identities hold exactly on 1000 samples", [](Check& c) {
    std::mt19937_64 rng(20240801);
    const long long primes[3] = {7, 11, 17};
    const long long qs[3] = {2, 3, 29};
    for (int i = 0; i < 1000 && c.ok; ++i) {
      long long p = primes[i % 3];
      int m = 2 + (i / 3) % 5;
      RingSpec ring;
      switch ((i / 15) % 3) {
        case 0: ring = RingSpec::prime_field(p); break;
        case 1: ring = RingSpec::mod_prime_power(p, 2); break;
        default: ring = RingSpec::eps_trunc(RingSpec::prime_field(p), 2);
      }
      Matrix A = random_strict_upper(ring, m, rng);
      Matrix U = explog::trunc_exp(A);
      c.expect(explog::trunc_log(U) == A, "log(exp(A)) != A");
      long long q = qs[i % 3];
      c.expect(explog::trunc_exp(re_from_int(ring, q) * A) == mat_pow(U, q),
               "exp(qA) != exp(A)^q");
      Matrix g = random_invertible(ring, m, rng);
      Matrix gi = mat_inv(g);
      c.expect(explog::trunc_exp(g * A * gi) == g * U * gi,
               "conjugation equivariance fails");
      if (m % 2 == 0) {
        Matrix J = orbits::standard_gram(-1, m, ring);
        bool in_algebra = centralizers::algebra_membership(A, J, false);
        bool in_group = centralizers::group_membership(U, J, re_one(ring));
        c.expect(in_algebra == in_group, "membership pairing disagrees");
      }
    }
    // Positive side of the pairing: orbit representatives exponentiate into
    // their groups with similitude exactly 1.
    for (long long p : primes) {
      RingSpec fp = RingSpec::prime_field(p);
      for (Family f : {Family::Sp, Family::O})
        for (int m = 1; m <= 6 && c.ok; ++m)
          for (const Partition& sigma : partitions::enumerate_admissible(m, f)) {
            OrbitRep rep = orbits::build_representative(sigma, f, m, fp);
            c.expect(centralizers::algebra_membership(rep.N, rep.gram, false),
                     "a representative left its algebra");
            c.expect(centralizers::group_membership(explog::trunc_exp(rep.N),
                                                    rep.gram, re_one(fp)),
                     "exp of a representative left its group");
          }
    }
  });

  // 8. Centralizer structure: dimension independent of the coefficient
  // field, no negative weights, and the weight-0 slice matching the
  // partition-combinatorial factor formula.
  run_criterion(8, "centralizer dimensions and grading are as predicted", [](Check& c) {
    for (Family f : {Family::GL, Family::Sp, Family::O})
      for (int m = 1; m <= 8; ++m)
        for (const Partition& sigma : partitions::enumerate_admissible(m, f)) {
          bool formed = family_has_form(f);
          std::string tag = family_name(f) + " " + sigma.to_string();
          OrbitRep over_q =
              orbits::build_representative(sigma, f, m, RingSpec::rationals());
          int dim_q = centralizers::centralizer_algebra(over_q, formed).dim;
          for (long long p : {7LL, 17LL}) {
            OrbitRep over_p = orbits::build_representative(
                sigma, f, m, RingSpec::prime_field(p));
            int dim_p = centralizers::centralizer_algebra(over_p, formed).dim;
            if (dim_p != dim_q) {
              c.expect(false, tag + ": dim differs between Q and F_" +
                                  std::to_string(p));
              return;
            }
            centralizers::GradedDims gd =
                centralizers::centralizer_graded(over_p, formed);
            int weight0 = 0;
            for (const auto& [w, d] : gd.by_weight) {
              if (w < 0) {
                c.expect(false, tag + ": negative weight in the grading");
                return;
              }
              if (w == 0) weight0 = d;
            }
            if (gd.total != dim_p) {
              c.expect(false, tag + ": graded total != algebra dim");
              return;
            }
            if (weight0 != reductive_dim_formula(sigma, f)) {
              c.expect(false, tag + ": weight-0 slice != factor formula");
              return;
            }
          }
        }
  });

  // 9. Combinatorics: the rank-2 symplectic orbit list, the non-Richardson
  // status of 2+1+1, and the diagnostics command reporting the closed-form
  // discrepancies at 2+2 and 2.
  run_criterion(9, "combinatorial cross-checks and diagnostics fire", [](Check& c) {
    std::vector<Partition> got = partitions::enumerate_admissible(4, Family::Sp);
    std::vector<Partition> want = {P("4"), P("2+2"), P("2+1+1"), P("1+1+1+1")};
    c.expect(got == want, "admissible list of Sp_4 is wrong");

    GroupSpec gsp4 =
        GroupSpec::standard(Family::GSp, 4, RingSpec::rationals());
    std::set<std::string> richardson;
    for (const std::vector<int>& flag :
         std::vector<std::vector<int>>{{}, {1}, {2}, {1, 2}})
      richardson.insert(deform::richardson_partition(gsp4, flag).to_string());
    c.expect(richardson ==
                 std::set<std::string>{"1+1+1+1", "2+2", "4"},
             "Richardson types of the four flags are wrong");
    c.expect(richardson.count("2+1+1") == 0, "2+1+1 appears as Richardson");

    for (const std::string sigma : {"2+2", "2"}) {
      cli::RunReport rr =
          cli::dispatch({"partitions", "diagnostics", "--sigma", sigma});
      c.expect(rr.exit_code == 0, "diagnostics command failed");
      if (rr.exit_code == 0)
        c.expect(rr.report.at("result").at("discrepancy") == true,
                 "diagnostics silent on " + sigma);
    }
  });

  std::cout << "acceptance: " << (9 - g_failures) << "/9 criteria passed"
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}

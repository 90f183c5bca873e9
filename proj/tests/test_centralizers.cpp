#include "test_support.hpp"

#include <set>

#include "tq/centralizers.hpp"
#include "tq/groups.hpp"

using namespace tq;
using namespace tq::centralizers;

namespace {

Partition P(const std::string& text) { return Partition::parse(text); }

// Lie dimension of one reductive factor, straight from its type.
int factor_dim(const Factor& f) {
  switch (f.kind) {
    case FactorKind::GL: return f.l * f.l;
    case FactorKind::Orthogonal: return f.l * (f.l - 1) / 2;
    case FactorKind::Symplectic: return f.l * (f.l + 1) / 2;
  }
  return 0;
}

}  // namespace

TEST_CASE("factor data matches the lowest-weight multiplicities") {
  Structure st = centralizer_structure(P("2+1+1"), Family::Sp);
  REQUIRE(st.factors.size() == 2);
  CHECK(st.factors[0].d == 2);
  CHECK(st.factors[0].s == -1);
  CHECK(st.factors[0].l == 1);
  CHECK(st.factors[0].kind == FactorKind::Orthogonal);
  CHECK(st.factors[1].d == 1);
  CHECK(st.factors[1].s == 0);
  CHECK(st.factors[1].l == 2);
  CHECK(st.factors[1].kind == FactorKind::Symplectic);
  CHECK(st.dim_reductive == 3);  // o_1 (0) + sp_2 (3)
  CHECK(st.t == 1);
  CHECK(st.component_order == 2);

  Structure gsp = centralizer_structure(P("2+1+1"), Family::GSp);
  CHECK(gsp.dim_reductive == 4);  // similitude line added
  CHECK(gsp.t == 1);

  for (int m = 1; m <= 8; ++m)
    for (Family f : {Family::Sp, Family::O, Family::GL})
      for (const Partition& sigma : partitions::enumerate_admissible(m, f)) {
        Structure s = centralizer_structure(sigma, f);
        int dim = family_similitude(f) ? 1 : 0;
        std::set<int> parts_seen;
        for (const Factor& fac : s.factors) {
          CHECK(fac.l == sigma.multiplicity(fac.d));
          CHECK(fac.s == 1 - fac.d);
          CHECK(parts_seen.insert(fac.d).second);
          dim += factor_dim(fac);
        }
        CHECK(dim == s.dim_reductive);
        CHECK(s.component_order ==
              partitions::component_order(sigma, f).order);
      }
}

TEST_CASE("centralizer kernels have the partition-formula dimensions") {
  // dim z_gl = sum min(d_i, d_j).
  auto gl_dim = [](const Partition& sigma) {
    int total = 0;
    for (int a : sigma.parts)
      for (int b : sigma.parts) total += std::min(a, b);
    return total;
  };
  for (const RingSpec& ring :
       {RingSpec::rationals(), RingSpec::prime_field(7)})
    for (int m = 1; m <= 6; ++m)
      for (const Partition& sigma :
           partitions::enumerate_admissible(m, Family::GL)) {
        OrbitRep rep = orbits::build_representative(sigma, Family::GL, m, ring);
        CHECK(centralizer_algebra(rep, false).dim == gl_dim(sigma));
      }

  RingSpec f7 = RingSpec::prime_field(7);
  OrbitRep sp211 =
      orbits::build_representative(P("2+1+1"), Family::Sp, 4, f7);
  CHECK(centralizer_algebra(sp211, true).dim == 6);
  OrbitRep gsp211 =
      orbits::build_representative(P("2+1+1"), Family::GSp, 4, f7);
  CHECK(centralizer_algebra(gsp211, true).dim == 7);
}

TEST_CASE("centralizer dimensions agree over the rationals and F_p") {
  for (int m = 1; m <= 6; ++m)
    for (Family f : {Family::Sp, Family::O, Family::GL})
      for (const Partition& sigma : partitions::enumerate_admissible(m, f)) {
        OrbitRep over_q = orbits::build_representative(
            sigma, f, m, RingSpec::rationals());
        int dim_q = centralizer_algebra(over_q, family_has_form(f)).dim;
        for (long long p : {7, 17}) {
          OrbitRep over_p = orbits::build_representative(
              sigma, f, m, RingSpec::prime_field(p));
          CHECK(centralizer_algebra(over_p, family_has_form(f)).dim == dim_q);
        }
      }
}

TEST_CASE("the centralizer basis actually centralizes") {
  RingSpec f7 = RingSpec::prime_field(7);
  for (const std::string& text : {"2+1+1", "2+2", "4"}) {
    OrbitRep rep =
        orbits::build_representative(P(text), Family::Sp, 4, f7);
    GroupSpec G = GroupSpec::with_gram(Family::Sp, rep.gram);
    AlgebraBasis basis = centralizer_algebra(rep, true);
    CHECK(static_cast<int>(basis.basis.size()) == basis.dim);
    for (const Matrix& x : basis.basis) {
      CHECK(x * rep.N == rep.N * x);
      CHECK(groups::try_algebra_membership(x, G).has_value());
    }
  }
}

TEST_CASE("the weight grading splits the centralizer without negative part") {
  for (int m = 1; m <= 7; ++m)
    for (Family f : {Family::Sp, Family::O})
      for (const Partition& sigma : partitions::enumerate_admissible(m, f)) {
        OrbitRep rep = orbits::build_representative(
            sigma, f, m, RingSpec::prime_field(17));
        GradedDims gd = centralizer_graded(rep, true);
        CHECK(gd.total == centralizer_algebra(rep, true).dim);
        int weight0 = 0;
        for (const auto& [w, d] : gd.by_weight) {
          CHECK(w >= 0);
          CHECK(d > 0);
          if (w == 0) weight0 = d;
        }
        Structure st = centralizer_structure(sigma, f);
        CHECK(weight0 == st.dim_reductive);
      }
}

TEST_CASE("the scaling element scales N quadratically and fixes the form") {
  for (const RingSpec& ring :
       {RingSpec::prime_field(7), RingSpec::mod_prime_power(7, 3)}) {
    for (const std::string& text : {"2+1+1", "2+2", "4"}) {
      OrbitRep rep = orbits::build_representative(P(text), Family::Sp, 4, ring);
      RingElement alpha = re_from_int(ring, 3);
      Matrix s = scaling_element(rep, alpha);
      CHECK(s * rep.N == (alpha * alpha) * (rep.N * s));
      CHECK(transpose(s) * rep.gram * s == rep.gram);
      CHECK(mat_det(s).is_unit());
    }
  }
  OrbitRep rep = orbits::build_representative(
      P("2+1+1"), Family::Sp, 4, RingSpec::prime_field(7));
  CHECK_THROWS_AS(scaling_element(rep, re_from_int(rep.ring, 7)), error);
}

TEST_CASE("component sections hit every component exactly once") {
  RingSpec z343 = RingSpec::mod_prime_power(7, 3);
  for (int m = 1; m <= 8; ++m)
    for (Family f : {Family::Sp, Family::O, Family::SO})
      for (const Partition& sigma : partitions::enumerate_admissible(m, f)) {
        OrbitRep rep = orbits::build_representative(sigma, f, m, z343);
        std::vector<Section> sections = component_sections(rep);
        partitions::ComponentOrder co = partitions::component_order(sigma, f);
        CHECK(static_cast<long long>(sections.size()) == co.order);
        GroupSpec G = GroupSpec::with_gram(f, rep.gram);
        std::set<std::vector<std::pair<int, int>>> tuples;
        for (const Section& s : sections) {
          CHECK(tuples.insert(s.tuple).second);
          CHECK(s.g * rep.N == rep.N * s.g);
          RingElement mu = groups::group_membership(s.g, G);
          CHECK(mu == re_one(z343));
        }
      }
}

TEST_CASE("membership predicates accept the form algebra and group") {
  RingSpec f7 = RingSpec::prime_field(7);
  Matrix j = orbits::standard_gram(-1, 4, f7);
  OrbitRep rep = orbits::build_representative(P("2+2"), Family::Sp, 4, f7);
  CHECK(algebra_membership(rep.N, rep.gram, false));
  CHECK(!algebra_membership(Matrix::identity(f7, 4), j, false));
  // The identity is a similitude with mu = 1, and 2*Id with mu = 4.
  CHECK(group_membership(Matrix::identity(f7, 4), j, re_one(f7)));
  Matrix two = scalar_matrix(f7, 4, re_from_int(f7, 2));
  CHECK(group_membership(two, j, re_from_int(f7, 4)));
  CHECK(!group_membership(two, j, re_one(f7)));
}

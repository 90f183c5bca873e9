// Centralizers of the assembled nilpotent representatives: the reductive
// quotient's factor data and dimension formulas, exact kernel computations
// of the centralizing Lie algebra (whole, graded by weight), the scaling
// element, and integral sections of the component group.

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "tq/orbits.hpp"

namespace tq {
namespace centralizers {

// One reductive factor Aut(L(s), psi_s), attached to the distinct part size
// d = 1 - s with multiplicity l.  psi_s is symmetric exactly when d has the
// self-dual parity for the family, giving an orthogonal factor.
enum class FactorKind { GL, Orthogonal, Symplectic };

struct Factor {
  int s = 0;           // weight of the lowest-weight space
  int d = 0;           // part size, d = 1 - s
  int l = 0;           // multiplicity = dim L(s)
  FactorKind kind = FactorKind::GL;
};

struct Structure {
  std::vector<Factor> factors;   // descending part size
  int dim_reductive = 0;         // sum of factor dims (+1 for similitudes)
  int t = 0;                     // number of orthogonal factors
  long long component_order = 1;
};
Structure centralizer_structure(const Partition& sigma, Family f);

// Membership predicates.  algebra: X^t J + J X = lambda J for some scalar
// lambda (zero unless the family carries a similitude factor); group:
// g^t J g = mu J for a unit mu.
bool algebra_membership(const Matrix& X, const Matrix& J, bool similitude);
bool group_membership(const Matrix& g, const Matrix& J,
                      const RingElement& mu);

// Exact kernel of the centralizing conditions over a field.
//   form_algebra = false: all X with X N = N X inside gl_m.
//   form_algebra = true: additionally X^t J + J X = lambda J, with the
//   lambda column present only for similitude families.
struct AlgebraBasis {
  std::vector<Matrix> basis;
  int dim = 0;
};
AlgebraBasis centralizer_algebra(const OrbitRep& rep, bool form_algebra);

// Weight-graded dimensions of the same kernel; the grading is by
// weight(row label) - weight(col label) and splits the defining equations.
struct GradedDims {
  std::map<int, int> by_weight;
  int total = 0;
};
GradedDims centralizer_graded(const OrbitRep& rep, bool form_algebra);

// diag(alpha^{weight(i)}); conjugation scales N by alpha^2 and fixes the
// Gram form (similitude factor 1).  alpha must be a unit.
Matrix scaling_element(const OrbitRep& rep, const RingElement& alpha);

// Integral sections of the component group: one chain-sign flip on the
// first block of each orthogonal factor, all sign patterns; SO keeps the
// even patterns.  Each section commutes with N exactly and preserves the
// Gram form; `tuple` lists (s, iota_s) per orthogonal factor.
struct Section {
  Matrix g;
  std::vector<std::pair<int, int>> tuple;
};
std::vector<Section> component_sections(const OrbitRep& rep);

}  // namespace centralizers
}  // namespace tq

#pragma once

// A classical group over a coefficient ring: family, size, and the Gram
// matrix of the preserved form, together with exact membership tests that
// return the scalar invariant (lambda for the Lie algebra, the similitude
// mu for the group).

#include <optional>

#include "tq/orbits.hpp"

namespace tq {

struct GroupSpec {
  Family family = Family::GL;
  int m = 0;
  RingSpec ring;
  Matrix gram;  // empty (0 x 0) for GL

  // The standard form of the family over `ring` (GL carries no form).
  static GroupSpec standard(Family f, int m, const RingSpec& ring);
  // A user-supplied Gram matrix; validated (square, unit determinant,
  // epsilon-symmetric for the family, even size for Sp/GSp).
  static GroupSpec with_gram(Family f, const Matrix& gram);

  bool has_form() const { return family_has_form(family); }
  bool similitude() const { return family_similitude(family); }
  int epsilon() const { return family_epsilon(family); }
  // The same group with the Gram matrix re-coded over `target` (residue or
  // canonical lift along the tower).
  GroupSpec to_ring(const RingSpec& target) const;
};

namespace groups {

// Scalar lambda with X^T J + J X = lambda J.  Families without a similitude
// character require lambda = 0; GL members always pass with lambda = 0.
// Error NotInAlgebra.
RingElement algebra_membership(const Matrix& X, const GroupSpec& G);
std::optional<RingElement> try_algebra_membership(const Matrix& X,
                                                  const GroupSpec& G);

// Similitude mu (a unit) with g^T J g = mu J.  Sp/O/SO require mu = 1 and
// SO additionally det g = 1; GL requires only invertibility (mu = 1).
// Error NotInGroup.
RingElement group_membership(const Matrix& g, const GroupSpec& G);
std::optional<RingElement> try_group_membership(const Matrix& g,
                                                const GroupSpec& G);

}  // namespace groups
}  // namespace tq

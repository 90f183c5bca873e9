#pragma once

// Lifting of tame inertia representations: a pair (Phi, N) over an Artinian
// coefficient ring with Phi N Phi^{-1} = q N, lifted one small ring
// extension at a time under a chosen matching condition.  Obstructions are
// reported as exact linear-algebra certificates over the residue field.

#include <optional>
#include <string>
#include <vector>

#include "tq/explog.hpp"
#include "tq/groups.hpp"
#include "tq/orbits.hpp"

namespace tq {
namespace deform {

// Phi unipotent-scaled Frobenius action, nil the log of the tame generator.
struct TqRep {
  GroupSpec group;
  long long q = 1;
  Matrix phi;
  Matrix nil;

  const RingSpec& ring() const { return group.ring; }
  // Truncated exponential of nil; the image of the tame generator.
  Matrix tau() const { return explog::trunc_exp(nil); }
};

// Empty result means the representation satisfies every structural
// invariant (memberships, nilpotency, the q-twist relation, q prime to p).
std::vector<std::string> validate(const TqRep& rep);

struct LiftCondition {
  enum class Kind {
    Unrestricted,
    FixedSimilitude,
    MinimallyRamified,
    ParabolicRamified,
  };
  Kind kind = Kind::Unrestricted;
  // FixedSimilitude target (also usable inside MinimallyRamified).
  std::optional<long long> nu;
  // MinimallyRamified: the orbit representative whose lifts N must track.
  std::optional<OrbitRep> orbit;
  // ParabolicRamified: ascending isotropic dimension jumps of the standard
  // flag (e.g. {1,2} for the full flag of a rank-2 symplectic group).
  std::vector<int> flag;

  static LiftCondition unrestricted();
  static LiftCondition fixed_similitude(long long nu);
  static LiftCondition minimally_ramified(OrbitRep orbit,
                                          std::optional<long long> nu = {});
  static LiftCondition parabolic_ramified(std::vector<int> flag);
  std::string name() const;
};

// An unsolvable degree-d residue-field system together with a left-null
// certificate: f * A = 0 and f * b != 0 can be re-checked independently.
struct ObstructionCertificate {
  int degree = 0;
  Matrix A;  // system matrix over the residue field
  Matrix b;  // right-hand side (column)
  Matrix f;  // left-null row witnessing inconsistency
  bool verify() const;
};

struct ConjugacyResult {
  std::optional<Matrix> g;  // g * rep.N * g^{-1} = N, residue(g) = 1
  std::optional<ObstructionCertificate> certificate;
};

// Successive approximation of a conjugating element between rep.N and N
// (both over the same ring, equal residues).  Fails with the first
// obstructed degree when N is not in the exact orbit of rep.N.
ConjugacyResult conjugate_nilpotent(const Matrix& N, const OrbitRep& rep);

bool check_condition(const TqRep& rep, const LiftCondition& cond);

// A residue-field tangent direction of the lift parametrization:
// Phi -> (1 + pi dA) Phi, N -> N + pi dB at the top monomial pi.
struct LiftDirection {
  Matrix dA;
  Matrix dB;
};

// Applies a tangent direction at the top monomial of rep's ring.
TqRep perturb(const TqRep& rep, const Matrix& dA, const Matrix& dB);

struct LiftResult {
  std::optional<TqRep> rep;
  std::optional<ObstructionCertificate> certificate;
  // Homogeneous solution directions of the same step (the lift torsor).
  std::vector<LiftDirection> kernel;
};

// One small extension step (eps-degree over a field base, or one p-digit at
// eps-length one).  Solves the linearized twist relation under `cond`;
// deterministic first solution in echelon order.
LiftResult lift_step(const TqRep& rep, const LiftCondition& cond,
                     const RingSpec& target);

struct TangentReport {
  int dim_lifting = 0;
  int dim_h0 = 0;
  int dim_h0_ad0 = 0;
  int dim_deformation = 0;
};

// Exact dimension counts for the first-order (dual-number) step from a
// residue-field representation.
TangentReport tangent_report(const TqRep& rep, const LiftCondition& cond);

struct SearchResult {
  std::optional<ObstructionCertificate> certificate;
  std::optional<TqRep> witness;  // the first-order lift that obstructs
  long long classes_tried = 0;
  bool exhausted = false;
  std::string note;
};

// Enumerates first-order lift classes of a residue-field representation
// under `cond` (modulo strict equivalence) and chases each one through
// eps-power steps up to exponent `depth`; returns the first obstruction
// certificate in deterministic order, or reports exhaustion.
SearchResult search_unliftable(const TqRep& rep, const LiftCondition& cond,
                               int depth, int threads = 1);

// Generic-element orbit type of the nilradical of the standard parabolic
// with the given flag (computed over the rationals, deterministically).
Partition richardson_partition(const GroupSpec& G,
                               const std::vector<int>& flag);

// Next ring along the eps chain (field -> dual numbers -> ...), and along
// the p-digit chain.
RingSpec eps_extension(const RingSpec& r);
RingSpec p_extension(const RingSpec& r);

}  // namespace deform
}  // namespace tq

#pragma once

// Integral representatives of nilpotent orbits: chain blocks with their
// pairings, assembly by partition, Jordan types, purity of reduction, and
// normalization of the block Gram forms to the standard ones.

#include <optional>

#include "tq/partitions.hpp"
#include "tq/rings.hpp"

namespace tq {

// One basis vector of an assembled representative: chain position pos
// (1-based, so the vector is N^(d-pos) applied to the chain generator) in
// block `block`, with `primed` naming the twin chain of a paired block.
// Its weight is d + 1 - 2*pos.
struct OrbitLabel {
  int block = 0;
  int pos = 1;
  bool primed = false;
  bool operator==(const OrbitLabel&) const = default;
};

struct OrbitBlock {
  int d = 0;          // part size
  bool paired = false;
  int offset = 0;     // first basis index of this block
  int span() const { return paired ? 2 * d : d; }
};

struct OrbitRep {
  Family family = Family::GL;
  int m = 0;
  Partition sigma;
  RingSpec ring;
  std::vector<OrbitBlock> blocks;
  std::vector<OrbitLabel> labels;  // size m, in basis order
  Matrix N;
  Matrix gram;  // empty (0 x 0) for GL
};

namespace orbits {

// Single chain M(d) or paired chain M(d,d) with its pairing; epsilon is the
// form sign (+1 orthogonal, -1 symplectic).  Paired blocks are ordered
// (v_1..v_d, v'_1..v'_d); the pairing couples positions i and d+1-i with
// value (-1)^i, extended epsilon-symmetrically.
struct BlockMatrices {
  Matrix N;
  Matrix gram;
};
BlockMatrices build_block(int d, bool paired, int epsilon, const RingSpec& ring);

// Assemble the representative for an admissible partition: descending part
// order; odd parts single / even parts paired for the orthogonal families
// and the reverse for the symplectic ones; Jordan blocks for GL.
// Errors: InadmissiblePartition, BadPartition (total != m).
OrbitRep build_representative(const Partition& sigma, Family f, int m,
                              const RingSpec& ring);

int label_weight(const OrbitRep& rep, int basis_index);

// Jordan type over a field from ranks of powers.  Error: NotNilpotent.
Partition jordan_type(const Matrix& N);

struct PurityReport {
  bool pure = false;
  Partition over_q;
  Partition residue;
};
// Compare the Jordan type over Q with the type of the mod-p reduction.
PurityReport purity(const Matrix& N_over_q, long long p);

// The standard form: antidiagonal ones when epsilon = +1; the antidiagonal
// [[0, I'], [-I', 0]] block matrix when epsilon = -1 (m even).
Matrix standard_gram(int epsilon, int m, const RingSpec& ring);

// Change of basis C with C^T gram C = standard_gram.  The symplectic side
// is a signed permutation; the orthogonal side mixes self-paired vectors
// pairwise through (sqrt(eta) v - sqrt(-eta') v')/sqrt(2) and reports the
// radicand (-1 or 2) whose square root the ring lacks.
struct NormalizeResult {
  std::optional<Matrix> C;
  std::optional<long long> missing;  // MissingSquareRoot radicand
  Matrix J_std;
};
NormalizeResult normalize_to_standard(const OrbitRep& rep);

// C with C^T J1 C = J2 for two epsilon-symmetric unimodular forms over a
// field or truncation ring (residue-field congruence plus an exact Newton
// lift).  Empty when the forms are genuinely inequivalent (discriminant
// classes differ over the residue field).
std::optional<Matrix> congruence_transform(const Matrix& J1, const Matrix& J2);

}  // namespace orbits
}  // namespace tq

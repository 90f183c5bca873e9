#pragma once

// Partition combinatorics for nilpotent orbits of the classical groups:
// admissibility per family, enumeration, weight-space dimension counts,
// component-group orders and the dominance order.

#include <string>
#include <vector>

namespace tq {

enum class Family { GL, Sp, O, SO, GSp, GO };

Family family_parse(const std::string& name);
std::string family_name(Family f);
// Sign of the preserved bilinear form: +1 orthogonal, -1 symplectic.
// Error FormlessFamily for GL.
int family_epsilon(Family f);
bool family_has_form(Family f);
bool family_similitude(Family f);  // GSp, GO

struct Partition {
  std::vector<int> parts;  // weakly decreasing, all positive

  Partition() = default;
  explicit Partition(std::vector<int> p);
  static Partition parse(const std::string& text);  // "2+1+1"

  int total() const;
  int multiplicity(int d) const;
  std::string to_string() const;
  bool operator==(const Partition&) const = default;
};

namespace partitions {

// Orthogonal families: every even part has even multiplicity; symplectic
// families: every odd part has even multiplicity; GL: no constraint.
bool is_admissible(const Partition& sigma, Family f);

// All admissible partitions of m in reverse-lexicographic order (larger
// first part first): (4, Sp) -> 4, 2+2, 2+1+1, 1+1+1+1.
std::vector<Partition> enumerate_admissible(int m, Family f);

// dim M(s): #{i : d_i - 1 >= |s| and d_i - 1 == s (mod 2)}.
int weight_dim(const Partition& sigma, int s);

// dim L(s): #{i : d_i = 1 - s}; nonzero only for s <= 0.
int lowest_weight_dim(const Partition& sigma, int s);

struct ComponentOrder {
  int t = 0;            // number of symmetric lowest-weight factors
  long long order = 1;  // 2^t, halved (min 1) for SO, 1 for GL
};
// Error InadmissiblePartition when sigma is not admissible for f.
ComponentOrder component_order(const Partition& sigma, Family f);

// Dominance order via prefix sums.  Error UnequalTotals.
bool dominance_leq(const Partition& sigma, const Partition& tau);

// Comparison of the direct weight-space counts against the closed-form
// expressions from the literature (m_s = #{j : d_j - 1 >= |s|} and
// l_s = m_{s+1} - m_s), which ignore the parity constraint and disagree
// with the direct counts on e.g. 2+2 (weight 0) and 2 (lowest weight -1).
// The direct counts are authoritative; this only reports where the closed
// forms go wrong.
struct FormulaDiagnostics {
  std::vector<int> weight_mismatch;  // weights s with m_s formula != direct
  std::vector<int> lowest_mismatch;  // s <= 0 with l_s formula != direct
};
FormulaDiagnostics formula_diagnostics(const Partition& sigma);

}  // namespace partitions
}  // namespace tq

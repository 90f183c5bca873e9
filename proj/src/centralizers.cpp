#include "tq/centralizers.hpp"

#include <algorithm>
#include <cassert>

namespace tq {
namespace centralizers {

namespace {

void require(bool cond, const char* code, const std::string& what) {
  if (!cond) throw error(code, what);
}

bool self_dual_parity(Family f, int d) {
  return family_epsilon(f) == 1 ? d % 2 == 1 : d % 2 == 0;
}

}  // namespace

Structure centralizer_structure(const Partition& sigma, Family f) {
  Structure out;
  if (family_has_form(f)) {
    // Validates admissibility as a side effect.
    out.component_order = partitions::component_order(sigma, f).order;
  }
  size_t i = 0;
  while (i < sigma.parts.size()) {
    const int d = sigma.parts[i];
    size_t j = i;
    while (j < sigma.parts.size() && sigma.parts[j] == d) ++j;
    const int l = static_cast<int>(j - i);
    Factor fac;
    fac.d = d;
    fac.s = 1 - d;
    fac.l = l;
    if (!family_has_form(f)) {
      fac.kind = FactorKind::GL;
      out.dim_reductive += l * l;
    } else if (self_dual_parity(f, d)) {
      fac.kind = FactorKind::Orthogonal;
      out.dim_reductive += l * (l - 1) / 2;
      ++out.t;
    } else {
      fac.kind = FactorKind::Symplectic;
      out.dim_reductive += l * (l + 1) / 2;
    }
    out.factors.push_back(fac);
    i = j;
  }
  if (family_similitude(f)) ++out.dim_reductive;
  if (family_has_form(f)) {
    auto co = partitions::component_order(sigma, f);
    require(co.t == out.t, "InternalInvariant",
            "orthogonal factor count disagrees with the component order");
  }
  return out;
}

bool algebra_membership(const Matrix& X, const Matrix& J, bool similitude) {
  Matrix D = transpose(X) * J + J * X;
  if (!similitude) return D.is_zero();
  if (D.is_zero()) return true;
  // Find the scalar lambda from the first nonzero Gram entry.
  for (int i = 0; i < J.rows; ++i)
    for (int j = 0; j < J.cols; ++j)
      if (J.at(i, j).is_unit()) {
        RingElement lambda = D.at(i, j) * re_inv(J.at(i, j));
        return D == lambda * J;
      }
  return false;
}

bool group_membership(const Matrix& g, const Matrix& J,
                      const RingElement& mu) {
  return transpose(g) * J * g == mu * J;
}

namespace {

// Columns of the linear system: the m^2 entries of X row-major, then the
// optional similitude scalar.
struct SystemSpec {
  int m = 0;
  bool form = false;
  bool lambda = false;
  int cols() const { return m * m + (lambda ? 1 : 0); }
};

Matrix build_system(const OrbitRep& rep, const SystemSpec& ss,
                    const std::vector<int>& active_cols) {
  const RingSpec& ring = rep.ring;
  const Matrix& N = rep.N;
  const int m = ss.m;
  const int eq_rows = ss.form ? 2 * m * m : m * m;
  Matrix A(ring, eq_rows, static_cast<int>(active_cols.size()));
  for (size_t c = 0; c < active_cols.size(); ++c) {
    const int col = active_cols[c];
    if (col == m * m) {  // lambda column, form equations only
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          A.at(m * m + i * m + j, static_cast<int>(c)) =
              -rep.gram.at(i, j);
      continue;
    }
    const int a = col / m, b = col % m;
    // Commutator equations (X N - N X)_{ij} = 0.
    for (int j = 0; j < m; ++j)
      if (!N.at(b, j).is_zero())
        A.at(a * m + j, static_cast<int>(c)) =
            A.at(a * m + j, static_cast<int>(c)) + N.at(b, j);
    for (int i = 0; i < m; ++i)
      if (!N.at(i, a).is_zero())
        A.at(i * m + b, static_cast<int>(c)) =
            A.at(i * m + b, static_cast<int>(c)) - N.at(i, a);
    if (ss.form) {
      // (X^t J + J X - lambda J)_{ij} = 0.
      for (int j = 0; j < m; ++j)
        if (!rep.gram.at(a, j).is_zero())
          A.at(m * m + b * m + j, static_cast<int>(c)) =
              A.at(m * m + b * m + j, static_cast<int>(c)) + rep.gram.at(a, j);
      for (int i = 0; i < m; ++i)
        if (!rep.gram.at(i, a).is_zero())
          A.at(m * m + i * m + b, static_cast<int>(c)) =
              A.at(m * m + i * m + b, static_cast<int>(c)) + rep.gram.at(i, a);
    }
  }
  return A;
}

}  // namespace

AlgebraBasis centralizer_algebra(const OrbitRep& rep, bool form_algebra) {
  require(rep.ring.is_field(), "BadRingSpec",
          "centralizer kernels are computed over a field");
  require(!form_algebra || family_has_form(rep.family), "FormlessFamily",
          "no form algebra for GL");
  SystemSpec ss{rep.m, form_algebra,
                form_algebra && family_similitude(rep.family)};
  std::vector<int> cols(ss.cols());
  for (size_t i = 0; i < cols.size(); ++i) cols[i] = static_cast<int>(i);
  Matrix A = build_system(rep, ss, cols);
  LinearSolve ls = solve_linear(A, Matrix(rep.ring, A.rows, 1));
  AlgebraBasis out;
  out.dim = static_cast<int>(ls.kernel.size());
  for (const auto& k : ls.kernel) {
    Matrix X(rep.ring, rep.m, rep.m);
    for (int a = 0; a < rep.m; ++a)
      for (int b = 0; b < rep.m; ++b) X.at(a, b) = k.at(a * rep.m + b, 0);
    out.basis.push_back(std::move(X));
  }
  return out;
}

GradedDims centralizer_graded(const OrbitRep& rep, bool form_algebra) {
  require(rep.ring.is_field(), "BadRingSpec",
          "centralizer kernels are computed over a field");
  SystemSpec ss{rep.m, form_algebra,
                form_algebra && family_similitude(rep.family)};
  std::map<int, std::vector<int>> cols_by_weight;
  for (int a = 0; a < rep.m; ++a)
    for (int b = 0; b < rep.m; ++b)
      cols_by_weight[orbits::label_weight(rep, a) -
                     orbits::label_weight(rep, b)]
          .push_back(a * rep.m + b);
  if (ss.lambda) cols_by_weight[0].push_back(rep.m * rep.m);
  GradedDims out;
  for (const auto& [w, cols] : cols_by_weight) {
    Matrix A = build_system(rep, ss, cols);
    LinearSolve ls = solve_linear(A, Matrix(rep.ring, A.rows, 1));
    const int dim = static_cast<int>(ls.kernel.size());
    if (dim > 0) out.by_weight[w] = dim;
    out.total += dim;
  }
  return out;
}

Matrix scaling_element(const OrbitRep& rep, const RingElement& alpha) {
  require(alpha.is_unit(), "NotAUnit", "scaling needs a unit");
  Matrix S(rep.ring, rep.m, rep.m);
  RingElement inv = re_inv(alpha);
  for (int i = 0; i < rep.m; ++i) {
    const int w = orbits::label_weight(rep, i);
    RingElement v = re_one(rep.ring);
    for (int k = 0; k < (w >= 0 ? w : -w); ++k)
      v = v * (w >= 0 ? alpha : inv);
    S.at(i, i) = v;
  }
  return S;
}

std::vector<Section> component_sections(const OrbitRep& rep) {
  std::vector<Section> out;
  const RingSpec& ring = rep.ring;
  if (!family_has_form(rep.family)) {
    out.push_back({Matrix::identity(ring, rep.m), {}});
    return out;
  }
  Structure st = centralizer_structure(rep.sigma, rep.family);
  // First block (assembly order) of each orthogonal factor.
  struct Target {
    int s;
    int offset;
    int d;
  };
  std::vector<Target> targets;
  for (const Factor& fac : st.factors) {
    if (fac.kind != FactorKind::Orthogonal) continue;
    for (const auto& blk : rep.blocks)
      if (blk.d == fac.d && !blk.paired) {
        targets.push_back({fac.s, blk.offset, blk.d});
        break;
      }
  }
  require(static_cast<int>(targets.size()) == st.t, "InternalInvariant",
          "missing a single block for an orthogonal factor");

  for (unsigned long long bits = 0; bits < (1ull << targets.size()); ++bits) {
    Section sec{Matrix::identity(ring, rep.m), {}};
    int det_sign = 1;
    for (size_t k = 0; k < targets.size(); ++k) {
      const bool flip = (bits >> k) & 1u;
      sec.tuple.emplace_back(targets[k].s, flip ? -1 : 1);
      if (!flip) continue;
      for (int i = 0; i < targets[k].d; ++i)
        sec.g.at(targets[k].offset + i, targets[k].offset + i) =
            re_from_int(ring, -1);
      if (targets[k].d % 2 == 1) det_sign = -det_sign;
    }
    if (rep.family == Family::SO && det_sign != 1) continue;
    assert(sec.g * rep.N == rep.N * sec.g);
    assert(group_membership(sec.g, rep.gram, re_one(ring)));
    out.push_back(std::move(sec));
  }
  return out;
}

}  // namespace centralizers
}  // namespace tq

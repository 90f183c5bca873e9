#include "tq/deform.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace tq {

// ------------------------------------------------------------------ groups

namespace {

void requirex(bool ok, const std::string& what) {
  if (!ok) throw error("Internal", what);
}

std::pair<int, int> first_unit_entry(const Matrix& J) {
  for (int i = 0; i < J.rows; ++i)
    for (int j = 0; j < J.cols; ++j)
      if (J.at(i, j).is_unit()) return {i, j};
  throw error("SingularMatrix", "form has no unit entry");
}

// Entrywise lift through centered signed representatives.  Unlike the
// canonical lift this commutes with negation (the centered lift of -1 is
// -1), so an epsilon-symmetric Gram matrix stays epsilon-symmetric across a
// p-digit extension.
Matrix signed_lift(const Matrix& x, const RingSpec& target) {
  long long pa = x.spec.modulus();
  Matrix out(target, x.rows, x.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      RingElement v = re_zero(target);
      const RingElement& s = x.at(i, j);
      for (size_t t = 0; t < s.c.size(); ++t) {
        long long c = s.c[t];
        if (c > pa / 2) c -= pa;
        v = v + re_from_int(target, c) * re_monomial(target,
                                                     static_cast<int>(t), 0);
      }
      out.at(i, j) = v;
    }
  return out;
}

}  // namespace

GroupSpec GroupSpec::standard(Family f, int m, const RingSpec& ring) {
  GroupSpec g;
  g.family = f;
  g.m = m;
  g.ring = ring;
  if (family_has_form(f)) {
    g.gram = orbits::standard_gram(family_epsilon(f), m, ring);
  } else {
    g.gram = Matrix(ring, 0, 0);
  }
  return g;
}

GroupSpec GroupSpec::with_gram(Family f, const Matrix& gram) {
  if (!family_has_form(f))
    throw error("FormlessFamily", "GL groups carry no Gram matrix");
  if (!gram.is_square() || gram.rows == 0)
    throw error("BadShape", "Gram matrix must be square and nonempty");
  int eps = family_epsilon(f);
  if (eps < 0 && gram.rows % 2 != 0)
    throw error("BadShape", "alternating forms need even size");
  RingElement e = re_from_int(gram.spec, eps);
  if (transpose(gram) != e * gram)
    throw error("BadShape", "Gram matrix has the wrong symmetry");
  if (!mat_det(gram).is_unit())
    throw error("SingularMatrix", "Gram matrix must be unimodular");
  GroupSpec g;
  g.family = f;
  g.m = gram.rows;
  g.ring = gram.spec;
  g.gram = gram;
  return g;
}

GroupSpec GroupSpec::to_ring(const RingSpec& target) const {
  GroupSpec g = *this;
  g.ring = target;
  if (!has_form()) {
    g.gram = Matrix(target, 0, 0);
    return g;
  }
  if (target.p != ring.p) throw error("UnreachableTarget", "different tower");
  if (target.a <= ring.a && target.n <= ring.n) {
    g.gram = residue_matrix(gram, target);
  } else if (target.a >= ring.a && target.n >= ring.n) {
    g.gram = signed_lift(gram, target);
  } else {
    throw error("UnreachableTarget", "incomparable rings");
  }
  return g;
}

namespace groups {

std::optional<RingElement> try_algebra_membership(const Matrix& X,
                                                  const GroupSpec& G) {
  if (!X.is_square() || X.rows != G.m || X.spec != G.ring) return {};
  if (!G.has_form()) return re_zero(G.ring);
  Matrix S = transpose(X) * G.gram + G.gram * X;
  RingElement lam = re_zero(G.ring);
  if (G.similitude()) {
    auto [i0, j0] = first_unit_entry(G.gram);
    lam = S.at(i0, j0) * re_inv(G.gram.at(i0, j0));
  }
  if (S != lam * G.gram) return {};
  return lam;
}

RingElement algebra_membership(const Matrix& X, const GroupSpec& G) {
  auto r = try_algebra_membership(X, G);
  if (!r)
    throw error("NotInAlgebra",
                "matrix does not satisfy the form-compatibility relation");
  return *r;
}

std::optional<RingElement> try_group_membership(const Matrix& g,
                                                const GroupSpec& G) {
  if (!g.is_square() || g.rows != G.m || g.spec != G.ring) return {};
  if (!G.has_form()) {
    if (!mat_det(g).is_unit()) return {};
    return re_one(G.ring);
  }
  Matrix S = transpose(g) * G.gram * g;
  auto [i0, j0] = first_unit_entry(G.gram);
  RingElement mu = S.at(i0, j0) * re_inv(G.gram.at(i0, j0));
  if (!mu.is_unit()) return {};
  if (S != mu * G.gram) return {};
  if (!G.similitude() && mu != re_one(G.ring)) return {};
  if (G.family == Family::SO && mat_det(g) != re_one(G.ring)) return {};
  return mu;
}

RingElement group_membership(const Matrix& g, const GroupSpec& G) {
  auto r = try_group_membership(g, G);
  if (!r)
    throw error("NotInGroup", "matrix does not preserve the form up to an "
                              "allowed similitude");
  return *r;
}

}  // namespace groups

// ------------------------------------------------------------------ deform

namespace deform {
namespace {

// ----------------------------------------------------------- small helpers

long long ll_of(const RingElement& x) {
  requirex(!x.spec.is_rational(), "expected a finite-ring element");
  return x.c.empty() ? 0 : x.c[0];
}

RingElement lift_element(const RingElement& x, const RingSpec& target) {
  Matrix w(x.spec, 1, 1);
  w.at(0, 0) = x;
  return lift_matrix(w, target).at(0, 0);
}

Matrix comm(const Matrix& X, const Matrix& Y) { return X * Y - Y * X; }

std::vector<long long> vec_ll(const Matrix& X) {
  std::vector<long long> v(static_cast<size_t>(X.rows) * X.cols);
  for (int i = 0; i < X.rows; ++i)
    for (int j = 0; j < X.cols; ++j)
      v[static_cast<size_t>(i) * X.cols + j] = ll_of(X.at(i, j));
  return v;
}

Matrix unvec(const RingSpec& k, int m, const std::vector<long long>& v,
             size_t offset = 0) {
  Matrix X(k, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      X.at(i, j) = re_from_int(k, v[offset + static_cast<size_t>(i) * m + j]);
  return X;
}

Matrix col_of(const Matrix& X) {
  Matrix c(X.spec, X.rows * X.cols, 1);
  for (int i = 0; i < X.rows; ++i)
    for (int j = 0; j < X.cols; ++j) c.at(i * X.cols + j, 0) = X.at(i, j);
  return c;
}

Matrix from_combination(const std::vector<Matrix>& basis,
                        const std::vector<long long>& coeff, size_t offset,
                        const RingSpec& k, int m) {
  Matrix X = Matrix::zeros(k, m, m);
  for (size_t t = 0; t < basis.size(); ++t)
    X = X + re_from_int(k, coeff[offset + t]) * basis[t];
  return X;
}

// Least quadratic non-residue mod p.
long long nonsquare_mod(long long p) {
  for (long long c = 2; c < p; ++c)
    if (mod_pow(c, (p - 1) / 2, p) != 1) return c;
  throw error("Internal", "no non-residue found");
}

bool is_square_unit(const RingElement& x) {
  long long p = x.spec.p;
  long long v = ll_of(x) % p;
  requirex(v != 0, "square class of a non-unit");
  return mod_pow(v, (p - 1) / 2, p) == 1;
}

Matrix diag_matrix(const RingSpec& k, const std::vector<RingElement>& d) {
  Matrix D = Matrix::zeros(k, static_cast<int>(d.size()),
                           static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) D.at(static_cast<int>(i),
                                             static_cast<int>(i)) = d[i];
  return D;
}

// ------------------------------------------------------------- small steps

struct StepInfo {
  TowerStage stage;
  RingElement pi;  // top monomial of the target ring
  int degree = 0;
};

StepInfo step_info(const RingSpec& from, const RingSpec& to) {
  if (from.p == 0 || to.p != from.p)
    throw error("NotSmall", "rings do not sit in one tower");
  StepInfo s;
  if (from.a == 1 && to.a == 1 && to.n == from.n + 1) {
    s.stage = TowerStage{from.n, 0};
  } else if (from.n == 1 && to.n == 1 && to.a == from.a + 1) {
    s.stage = TowerStage{0, from.a};
  } else {
    throw error("NotSmall", "not a small extension: " + from.to_string() +
                                " -> " + to.to_string());
  }
  s.pi = re_monomial(to, s.stage.j, s.stage.i);
  s.degree = s.stage.j + s.stage.i;
  return s;
}

TowerStage top_stage(const RingSpec& r) {
  auto st = tower_stages(r);
  return st.back();
}

// ------------------------------------------------- residue-field subspaces

std::vector<Matrix> basis_gl(const RingSpec& k, int m) {
  std::vector<Matrix> b;
  b.reserve(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Matrix X = Matrix::zeros(k, m, m);
      X.at(i, j) = re_one(k);
      b.push_back(X);
    }
  return b;
}

// Rows of the relation X^T J + J X = lambda J over the form's ring; columns
// are the m^2 entries of X plus one lambda column when with_lambda is set.
Matrix form_rows(const Matrix& J, bool with_lambda) {
  const RingSpec& k = J.spec;
  int m = J.rows;
  Matrix A = Matrix::zeros(k, m * m, m * m + (with_lambda ? 1 : 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      int r = i * m + j;
      for (int a = 0; a < m; ++a) {
        // (X^T J)_{ij} contributes J_{aj} against X_{ai}; (J X)_{ij}
        // contributes J_{ia} against X_{aj}.
        A.at(r, a * m + i) = A.at(r, a * m + i) + J.at(a, j);
        A.at(r, a * m + j) = A.at(r, a * m + j) + J.at(i, a);
      }
      if (with_lambda) A.at(r, m * m) = -J.at(i, j);
    }
  return A;
}

std::vector<Matrix> kernel_matrices(const Matrix& A, const RingSpec& k,
                                    int m) {
  LinearSolve ls = solve_linear(A, Matrix::zeros(k, A.rows, 1));
  std::vector<Matrix> out;
  out.reserve(ls.kernel.size());
  for (const Matrix& col : ls.kernel) {
    Matrix X(k, m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) X.at(i, j) = col.at(i * m + j, 0);
    out.push_back(X);
  }
  return out;
}

// Basis of the full derivation space of the group: for form families the
// matrices with X^T J + J X = lambda J (lambda free only when the family
// has a similitude character); gl_m otherwise.
std::vector<Matrix> basis_hat_g(const GroupSpec& Gk) {
  if (!Gk.has_form()) return basis_gl(Gk.ring, Gk.m);
  return kernel_matrices(form_rows(Gk.gram, Gk.similitude()), Gk.ring, Gk.m);
}

// Basis of the lambda = 0 part (the space where nilpotent elements live).
std::vector<Matrix> basis_g0(const GroupSpec& Gk) {
  if (!Gk.has_form()) return basis_gl(Gk.ring, Gk.m);
  return kernel_matrices(form_rows(Gk.gram, false), Gk.ring, Gk.m);
}

// ------------------------------------------------------- group corrections

// Newton-correct an entrywise lift until g^T J g = mu J holds exactly; mu
// is fixed by the caller and must agree with g at the residue level.
Matrix group_correct_to(Matrix g, const Matrix& J, const RingElement& mu) {
  const RingSpec& R = J.spec;
  RingElement half = re_inv(re_from_int(R, 2));
  int bound = 2 * (R.a + R.n) + 6;
  for (int pass = 0; pass < bound; ++pass) {
    Matrix E = transpose(g) * J * g - mu * J;
    if (E.is_zero()) return g;
    Matrix X = (-half * re_inv(mu)) * (mat_inv(J) * E);
    g = g * (Matrix::identity(R, g.rows) + X);
  }
  throw error("Internal", "group correction did not terminate");
}

// Same, but with the similitude read off from g itself.
std::pair<Matrix, RingElement> group_correct_free(Matrix g, const Matrix& J) {
  auto [i0, j0] = first_unit_entry(J);
  RingElement mu =
      (transpose(g) * J * g).at(i0, j0) * re_inv(J.at(i0, j0));
  requirex(mu.is_unit(), "similitude of a degenerate lift");
  return {group_correct_to(std::move(g), J, mu), mu};
}

// ------------------------------------------------------- chain extraction

// A Jordan chain basis of (N, J) over the residue field, organised to match
// the standard block layout of its orbit type: P^{-1} N P is the layout
// shift, and P^T J P is the layout Gram matrix with each self-paired block
// scaled by a recorded unit eta (normalised to 1 or the fixed non-residue).
struct ExtractedChains {
  Partition sigma{std::vector<int>{}};
  OrbitRep layout;
  Matrix P;
  std::vector<std::optional<RingElement>> eta;  // aligned with layout.blocks
};

RingElement pair_with(const Matrix& J, const Matrix& x, const Matrix& y) {
  return (transpose(x) * J * y).at(0, 0);
}

ExtractedChains extract_chains(const Matrix& N, const Matrix& J, Family fam) {
  const RingSpec& k = N.spec;
  requirex(k.is_field() && k.p > 0, "chain extraction needs a finite field");
  int m = N.rows;
  ExtractedChains ec;
  ec.sigma = orbits::jordan_type(N);
  ec.layout = orbits::build_representative(ec.sigma, fam, m, k);
  ec.eta.assign(ec.layout.blocks.size(), std::nullopt);
  ec.P = Matrix::zeros(k, m, m);
  bool formful = family_has_form(fam);
  long long p = k.p;
  RingElement half = re_inv(re_from_int(k, 2));

  // Remaining space: ambient column vectors spanning the orthocomplement of
  // everything extracted so far (for GL, chain tops are tracked instead).
  std::vector<Matrix> rem;
  for (int i = 0; i < m; ++i) {
    Matrix e = Matrix::zeros(k, m, 1);
    e.at(i, 0) = re_one(k);
    rem.push_back(e);
  }
  std::vector<Matrix> gl_tops;  // bottom-layer images of chosen generators

  auto place_chain = [&](const Matrix& gen, int d, int col0) {
    Matrix v = gen;
    std::vector<Matrix> chain(d, Matrix());
    for (int t = 0; t < d; ++t) {
      chain[static_cast<size_t>(d - 1 - t)] = v;  // position d - t
      if (t + 1 < d) v = N * v;
    }
    // chain[i-1] = N^{d-i} gen sits at position i.
    for (int i = 0; i < d; ++i)
      for (int r = 0; r < m; ++r) ec.P.at(r, col0 + i) = chain[i].at(r, 0);
  };

  auto ortho_shrink = [&](const std::vector<Matrix>& span_vecs) {
    int w = static_cast<int>(rem.size());
    Matrix A = Matrix::zeros(k, static_cast<int>(span_vecs.size()), w);
    for (size_t s = 0; s < span_vecs.size(); ++s)
      for (int j = 0; j < w; ++j)
        A.at(static_cast<int>(s), j) = pair_with(J, rem[j], span_vecs[s]);
    LinearSolve ls = solve_linear(A, Matrix::zeros(k, A.rows, 1));
    std::vector<Matrix> next;
    for (const Matrix& c : ls.kernel) {
      Matrix x = Matrix::zeros(k, m, 1);
      for (int j = 0; j < w; ++j) x = x + c.at(j, 0) * rem[j];
      next.push_back(x);
    }
    rem = std::move(next);
  };

  for (size_t b = 0; b < ec.layout.blocks.size(); ++b) {
    const OrbitBlock& blk = ec.layout.blocks[b];
    int d = blk.d;
    Matrix Nd1 = mat_pow(N, d - 1);
    if (!formful) {
      // GL: pick a generator whose bottom-layer image is independent of the
      // bottoms of all previously chosen generators.
      Matrix Kd = mat_pow(N, d);
      LinearSolve ker = solve_linear(Kd, Matrix::zeros(k, m, 1));
      int w = static_cast<int>(gl_tops.size());
      Matrix S(k, m, w);
      for (int t = 0; t < w; ++t)
        for (int r = 0; r < m; ++r) S.at(r, t) = gl_tops[t].at(r, 0);
      int before = w == 0 ? 0 : mat_rank(S);
      Matrix found;
      for (const Matrix& cnd : ker.kernel) {
        Matrix top = Nd1 * cnd;
        if (top.is_zero()) continue;
        Matrix T(k, m, w + 1);
        for (int t = 0; t < w; ++t)
          for (int r = 0; r < m; ++r) T.at(r, t) = S.at(r, t);
        for (int r = 0; r < m; ++r) T.at(r, w) = top.at(r, 0);
        if (mat_rank(T) == before + 1) {
          found = cnd;
          break;
        }
      }
      requirex(found.rows == m, "no independent chain generator");
      gl_tops.push_back(Nd1 * found);
      place_chain(found, d, blk.offset);
      continue;
    }

    if (!blk.paired) {
      // Self-paired parity: find an anisotropic top vector.
      Matrix v;
      for (const Matrix& c : rem) {
        if (!pair_with(J, c, Nd1 * c).is_zero()) {
          v = c;
          break;
        }
      }
      if (v.rows == 0) {
        bool done = false;
        for (size_t i = 0; i < rem.size() && !done; ++i)
          for (size_t j = 0; j < rem.size() && !done; ++j) {
            if (i == j) continue;
            if (!pair_with(J, rem[i], Nd1 * rem[j]).is_zero()) {
              v = rem[i] + rem[j];
              done = true;
            }
          }
      }
      requirex(v.rows == m && !pair_with(J, v, Nd1 * v).is_zero(),
               "no anisotropic top vector in a self-paired layer");
      // Clean the lower diagonal pairings c_t = <v, N^t v> (the only ones
      // not forced to vanish share the parity of d - 1).
      for (int t = d - 3; t >= 0; t -= 2) {
        RingElement ct = pair_with(J, v, mat_pow(N, t) * v);
        if (ct.is_zero()) continue;
        RingElement cd = pair_with(J, v, Nd1 * v);
        RingElement alpha = -(ct * half * re_inv(cd));
        v = v + alpha * (mat_pow(N, d - 1 - t) * v);
      }
      RingElement cd = pair_with(J, v, Nd1 * v);
      RingElement eta = re_from_int(k, (d % 2 == 0) ? 1 : -1) * cd;
      // Normalise eta to 1 or the canonical non-residue by scaling v.
      if (is_square_unit(eta)) {
        v = re_inv(*sqrt_unit(eta)) * v;
        eta = re_one(k);
      } else {
        RingElement c_ns = re_from_int(k, nonsquare_mod(p));
        RingElement s = *sqrt_unit(eta * re_inv(c_ns));
        v = re_inv(s) * v;
        eta = c_ns;
      }
      ec.eta[b] = eta;
      place_chain(v, d, blk.offset);
      std::vector<Matrix> span_vecs;
      for (int t = 0; t < d; ++t) span_vecs.push_back(mat_pow(N, t) * v);
      ortho_shrink(span_vecs);
      continue;
    }

    // Dual pair: top vector v plus a partner w with <v, N^{d-1} w> != 0.
    Matrix v, w;
    bool done = false;
    for (size_t i = 0; i < rem.size() && !done; ++i) {
      if ((Nd1 * rem[i]).is_zero()) continue;
      for (size_t j = 0; j < rem.size() && !done; ++j) {
        if (!pair_with(J, rem[i], Nd1 * rem[j]).is_zero()) {
          v = rem[i];
          w = rem[j];
          done = true;
        }
      }
    }
    requirex(done, "no dual partner in a paired layer");
    for (int delta = 1; delta <= d - 1; ++delta) {
      int t = d - 1 - delta;
      RingElement ed = pair_with(J, v, Nd1 * w);
      RingElement et = pair_with(J, v, mat_pow(N, t) * w);
      if (!et.is_zero()) w = w + (-(et * re_inv(ed))) * (mat_pow(N, delta) * w);
      if (delta % 2 == 1) {
        ed = pair_with(J, v, Nd1 * w);
        RingElement cv = pair_with(J, v, mat_pow(N, t) * v);
        if (!cv.is_zero())
          v = v + (-(cv * half * re_inv(ed))) * (mat_pow(N, delta) * w);
        ed = pair_with(J, v, Nd1 * w);
        RingElement cw = pair_with(J, w, mat_pow(N, t) * w);
        if (!cw.is_zero())
          w = w + (cw * half * re_inv(ed)) * (mat_pow(N, delta) * v);
      }
    }
    RingElement ed = pair_with(J, v, Nd1 * w);
    w = (re_from_int(k, (d % 2 == 0) ? 1 : -1) * re_inv(ed)) * w;
    place_chain(v, d, blk.offset);
    place_chain(w, d, blk.offset + d);
    std::vector<Matrix> span_vecs;
    for (int t = 0; t < d; ++t) {
      span_vecs.push_back(mat_pow(N, t) * v);
      span_vecs.push_back(mat_pow(N, t) * w);
    }
    ortho_shrink(span_vecs);
  }

  // Exactness self-checks: shift alignment and the scaled layout Gram.
  requirex(mat_det(ec.P).is_unit(), "extracted chains are dependent");
  requirex(N * ec.P == ec.P * ec.layout.N, "chain basis misaligned");
  if (formful) {
    Matrix expected = ec.layout.gram;
    for (size_t b = 0; b < ec.layout.blocks.size(); ++b) {
      if (!ec.eta[b]) continue;
      const OrbitBlock& blk = ec.layout.blocks[b];
      for (int i = 0; i < blk.d; ++i)
        for (int j = 0; j < blk.d; ++j)
          expected.at(blk.offset + i, blk.offset + j) =
              *ec.eta[b] * expected.at(blk.offset + i, blk.offset + j);
    }
    requirex(transpose(ec.P) * J * ec.P == expected,
             "chain basis Gram mismatch");
  }
  return ec;
}

// ------------------------------------------------------- residue alignment

// g0 in the group of J over k with g0 M g0^{-1} = N and g0^T J g0 = mu J.
struct ResidueAlign {
  Matrix g0;
  RingElement mu;
};

std::optional<ResidueAlign> align_residue(const Matrix& N, const Matrix& M,
                                          const GroupSpec& Gk) {
  const RingSpec& k = Gk.ring;
  if (orbits::jordan_type(N) != orbits::jordan_type(M)) return {};
  if (!Gk.has_form()) {
    ExtractedChains EN = extract_chains(N, Matrix(), Gk.family);
    ExtractedChains EM = extract_chains(M, Matrix(), Gk.family);
    ResidueAlign ra{EN.P * mat_inv(EM.P), re_one(k)};
    requirex(ra.g0 * M == N * ra.g0, "GL alignment failed");
    return ra;
  }
  const Matrix& J = Gk.gram;
  ExtractedChains EN = extract_chains(N, J, Gk.family);
  ExtractedChains EM = extract_chains(M, J, Gk.family);
  std::vector<RingElement> mus{re_one(k)};
  if (Gk.similitude())
    mus.push_back(re_from_int(k, nonsquare_mod(k.p)));
  const auto& blocks = EN.layout.blocks;
  for (const RingElement& mu : mus) {
    Matrix W = Matrix::identity(k, Gk.m);
    bool ok = true;
    size_t b = 0;
    while (b < blocks.size() && ok) {
      if (blocks[b].paired) {
        for (int t = 0; t < blocks[b].d; ++t) {
          int r = blocks[b].offset + blocks[b].d + t;
          W.at(r, r) = mu;
        }
        ++b;
        continue;
      }
      size_t e = b;
      while (e < blocks.size() && !blocks[e].paired &&
             blocks[e].d == blocks[b].d)
        ++e;
      std::vector<RingElement> etaN, etaM;
      for (size_t t = b; t < e; ++t) {
        etaN.push_back(*EN.eta[t]);
        etaM.push_back(mu * *EM.eta[t]);
      }
      auto C = orbits::congruence_transform(diag_matrix(k, etaN),
                                            diag_matrix(k, etaM));
      if (!C) {
        ok = false;
        break;
      }
      int l = static_cast<int>(e - b);
      for (int r = 0; r < l; ++r)
        for (int c = 0; c < l; ++c)
          for (int t = 0; t < blocks[b].d; ++t)
            W.at(blocks[b + r].offset + t, blocks[b + c].offset + t) =
                C->at(r, c);
      b = e;
    }
    if (!ok) continue;
    Matrix g0 = EN.P * W * mat_inv(EM.P);
    if (Gk.family == Family::SO && mat_det(g0) != re_one(k)) {
      // Compose with a determinant -1 element of the stabiliser of M: flip
      // one odd-length self-paired chain.
      bool fixed = false;
      for (size_t t = 0; t < blocks.size(); ++t) {
        if (blocks[t].paired || blocks[t].d % 2 == 0) continue;
        Matrix F = Matrix::identity(k, Gk.m);
        for (int s = 0; s < blocks[t].d; ++s) {
          int r = blocks[t].offset + s;
          F.at(r, r) = re_from_int(k, -1);
        }
        g0 = g0 * (EM.P * F * mat_inv(EM.P));
        fixed = true;
        break;
      }
      if (!fixed) continue;  // the class genuinely splits
    }
    requirex(g0 * M == N * g0, "alignment does not conjugate");
    requirex(transpose(g0) * J * g0 == mu * J, "alignment leaves the group");
    return ResidueAlign{g0, mu};
  }
  return {};
}

// ------------------------------------------------------------- certificates

ObstructionCertificate make_certificate(int degree, const Matrix& A,
                                        const Matrix& b, const FpEchelon& ech,
                                        const std::vector<long long>& bvec) {
  int row = ech.inconsistent_row(bvec);
  requirex(row >= 0, "no certificate row for an unsolvable system");
  Matrix f(A.spec, 1, A.rows);
  for (int j = 0; j < A.rows; ++j)
    f.at(0, j) = re_from_int(A.spec, ech.E[static_cast<size_t>(row)]
                                          [static_cast<size_t>(j)]);
  ObstructionCertificate cert;
  cert.degree = degree;
  cert.A = A;
  cert.b = b;
  cert.f = f;
  requirex(cert.verify(), "certificate failed self-verification");
  return cert;
}

// --------------------------------------------------- transported base point

struct Transport {
  Matrix T;        // T^T J T = s * (layout Gram), s a unit
  Matrix M;        // T N_sigma T^{-1}, the base point inside the working form
  OrbitRep rep_R;  // representative over the working ring (layout frame)
};

std::optional<Transport> make_transport(const GroupSpec& G,
                                        const OrbitRep& orbit) {
  Transport tp;
  tp.rep_R = orbits::build_representative(orbit.sigma, orbit.family, orbit.m,
                                          G.ring);
  if (!G.has_form()) {
    tp.T = Matrix::identity(G.ring, G.m);
    tp.M = tp.rep_R.N;
    return tp;
  }
  if (G.gram == tp.rep_R.gram) {
    tp.T = Matrix::identity(G.ring, G.m);
  } else {
    auto T = orbits::congruence_transform(G.gram, tp.rep_R.gram);
    if (!T && G.similitude()) {
      RingElement c = re_from_int(G.ring, nonsquare_mod(G.ring.p));
      T = orbits::congruence_transform(G.gram, c * tp.rep_R.gram);
    }
    if (!T) return {};
    tp.T = *T;
  }
  tp.M = tp.T * tp.rep_R.N * mat_inv(tp.T);
  return tp;
}

// Synthetic representative carrying the transported base point, suitable
// for conjugate_nilpotent (same layout metadata, working Gram).
OrbitRep transported_rep(const Transport& tp, const GroupSpec& G) {
  OrbitRep r = tp.rep_R;
  r.N = tp.M;
  r.gram = G.has_form() ? G.gram : Matrix(G.ring, 0, 0);
  return r;
}

// --------------------------------------------------------------- MR witness

// Full witness g in the working group with g M g^{-1} = N (exact over the
// representation's ring), where M is the transported representative.
struct MrWitness {
  Matrix g;
  Transport tp;
};

std::optional<MrWitness> mr_witness(const TqRep& rep, const OrbitRep& orbit) {
  const GroupSpec& G = rep.group;
  const RingSpec& R = G.ring;
  RingSpec k = R.residue_field();
  if (orbit.m != G.m) return {};
  auto tp = make_transport(G, orbit);
  if (!tp) return {};
  Matrix Nk = residue_matrix(rep.nil, k);
  Matrix Mk = residue_matrix(tp->M, k);
  if (orbits::jordan_type(Nk) != orbit.sigma) return {};
  auto ra = align_residue(Nk, Mk, G.to_ring(k));
  if (!ra) return {};
  Matrix g0 = lift_matrix(ra->g0, R);
  if (G.has_form())
    g0 = group_correct_to(std::move(g0), G.gram, lift_element(ra->mu, R));
  Matrix Nt = mat_inv(g0) * rep.nil * g0;
  ConjugacyResult cr = conjugate_nilpotent(Nt, transported_rep(*tp, G));
  if (!cr.g) return {};
  MrWitness w{g0 * *cr.g, *tp};
  requirex(w.g * tp->M * mat_inv(w.g) == rep.nil, "MR witness mismatch");
  return w;
}

// ------------------------------------------------------------ flag algebra

std::vector<Matrix> kernel_columns_any(const Matrix& A) {
  if (A.spec.is_field()) {
    LinearSolve ls = solve_linear(A, Matrix::zeros(A.spec, A.rows, 1));
    return ls.kernel;
  }
  TruncSolve ts = solve_linear_trunc(A, Matrix::zeros(A.spec, A.rows, 1));
  return ts.kernel;
}

// Reduce a spanning set of a free direct summand to a unit-pivot basis.
Matrix saturate_columns(const std::vector<Matrix>& gens, int m, int expect,
                        const RingSpec& spec) {
  std::vector<Matrix> kept;
  std::vector<int> pivots;
  for (Matrix c : gens) {
    for (size_t t = 0; t < kept.size(); ++t)
      c = c - c.at(pivots[t], 0) * kept[t];
    int pr = -1;
    for (int r = 0; r < m; ++r)
      if (c.at(r, 0).is_unit()) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    c = re_inv(c.at(pr, 0)) * c;
    kept.push_back(c);
    pivots.push_back(pr);
  }
  requirex(expect < 0 || static_cast<int>(kept.size()) == expect,
           "saturated basis has unexpected rank");
  Matrix B(spec, m, static_cast<int>(kept.size()));
  for (size_t j = 0; j < kept.size(); ++j)
    for (int r = 0; r < m; ++r) B.at(r, static_cast<int>(j)) = kept[j].at(r, 0);
  return B;
}

// Functional rows spanning { f : f * B = 0 } for a unit-pivot basis B.
Matrix annihilator_rows(const Matrix& B) {
  const RingSpec& spec = B.spec;
  int m = B.rows;
  if (B.cols == m) return Matrix(spec, 0, m);
  std::vector<Matrix> cols = kernel_columns_any(transpose(B));
  Matrix F = saturate_columns(cols, m, m - B.cols, spec);
  return transpose(F);
}

struct FlagData {
  std::vector<int> jumps;
  std::vector<Matrix> members;  // ascending chain of bases, last = identity
  std::vector<Matrix> ann;      // annihilator rows per member
  std::vector<Matrix> members_k, ann_k;
  std::vector<Matrix> p_basis;  // stabiliser subalgebra over k
  std::vector<Matrix> n_basis;  // strictly-decreasing subalgebra over k
};

FlagData build_flag(const GroupSpec& G, const std::vector<int>& jumps) {
  const RingSpec& R = G.ring;
  int m = G.m;
  FlagData fd;
  fd.jumps = jumps;
  int prev = 0;
  for (int d : jumps) {
    if (d <= prev || d > m) throw error("BadFlag", "jumps must strictly "
                                                   "ascend within range");
    prev = d;
  }
  if (G.has_form() && !jumps.empty()) {
    int top = jumps.back();
    for (int i = 0; i < top; ++i)
      for (int j = 0; j < top; ++j)
        if (!G.gram.at(i, j).is_zero())
          throw error("FlagNotIsotropic",
                      "standard flag member is not isotropic for the form");
  }
  auto initial_basis = [&](int d) {
    Matrix B = Matrix::zeros(R, m, d);
    for (int i = 0; i < d; ++i) B.at(i, i) = re_one(R);
    return B;
  };
  for (int d : jumps) fd.members.push_back(initial_basis(d));
  if (G.has_form()) {
    for (auto it = jumps.rbegin(); it != jumps.rend(); ++it) {
      int d = *it;
      Matrix A = Matrix::zeros(R, d, m);
      for (int i = 0; i < d; ++i)
        for (int r = 0; r < m; ++r) A.at(i, r) = G.gram.at(r, i);
      Matrix P = saturate_columns(kernel_columns_any(A), m, m - d, R);
      // Skip the duplicate when the top member is Lagrangian.
      if (m - d == d) {
        bool inside = true;
        for (int r = d; r < m && inside; ++r)
          for (int c = 0; c < P.cols && inside; ++c)
            if (!P.at(r, c).is_zero()) inside = false;
        if (inside) continue;
      }
      fd.members.push_back(P);
    }
  }
  fd.members.push_back(Matrix::identity(R, m));
  std::sort(fd.members.begin(), fd.members.end(),
            [](const Matrix& a, const Matrix& b) { return a.cols < b.cols; });
  for (const Matrix& B : fd.members) fd.ann.push_back(annihilator_rows(B));

  RingSpec k = R.residue_field();
  for (const Matrix& B : fd.members)
    fd.members_k.push_back(residue_matrix(B, k));
  for (const Matrix& A : fd.ann) fd.ann_k.push_back(residue_matrix(A, k));

  // Subalgebra bases over k: assemble all linear conditions on X and take
  // the kernel.  Columns: m^2 entries of X (plus lambda for the stabiliser
  // of a similitude family).
  Matrix Jk = G.has_form() ? residue_matrix(G.gram, k) : Matrix();
  auto stack_conditions = [&](bool strict, bool with_lambda) {
    std::vector<Matrix> rows;
    if (G.has_form()) rows.push_back(form_rows(Jk, with_lambda));
    int cols = m * m + (with_lambda ? 1 : 0);
    for (size_t t = 0; t < fd.members_k.size(); ++t) {
      const Matrix& B = fd.members_k[t];
      Matrix A = strict ? (t == 0 ? Matrix::identity(k, m) : fd.ann_k[t - 1])
                        : fd.ann_k[t];
      if (A.rows == 0) continue;
      Matrix C = Matrix::zeros(k, A.rows * B.cols, cols);
      for (int r = 0; r < A.rows; ++r)
        for (int c = 0; c < B.cols; ++c)
          for (int a = 0; a < m; ++a)
            for (int bcol = 0; bcol < m; ++bcol)
              C.at(r * B.cols + c, a * m + bcol) =
                  C.at(r * B.cols + c, a * m + bcol) +
                  A.at(r, a) * B.at(bcol, c);
      rows.push_back(C);
    }
    int total = 0;
    for (const Matrix& r : rows) total += r.rows;
    Matrix S = Matrix::zeros(k, total, cols);
    int off = 0;
    for (const Matrix& r : rows) {
      for (int i = 0; i < r.rows; ++i)
        for (int j = 0; j < r.cols; ++j) S.at(off + i, j) = r.at(i, j);
      off += r.rows;
    }
    return S;
  };
  fd.p_basis = kernel_matrices(stack_conditions(false, G.similitude()), k, m);
  fd.n_basis = kernel_matrices(stack_conditions(true, false), k, m);
  return fd;
}

bool stabilises_flag(const Matrix& g, const FlagData& fd) {
  for (size_t t = 0; t < fd.members.size(); ++t) {
    if (fd.ann[t].rows == 0) continue;
    if (!(fd.ann[t] * g * fd.members[t]).is_zero()) return false;
  }
  return true;
}

bool strictly_decreases_flag(const Matrix& X, const FlagData& fd) {
  for (size_t t = 0; t < fd.members.size(); ++t) {
    Matrix A = t == 0 ? Matrix::identity(X.spec, X.rows) : fd.ann[t - 1];
    if (A.rows == 0) continue;
    if (!(A * X * fd.members[t]).is_zero()) return false;
  }
  return true;
}

// ------------------------------------------------------------ Par frames

// Degree-by-degree frame search: g with g^{-1} Phi g stabilising the
// standard flag and g^{-1} N g strictly decreasing along its completion.
// The residue level must already be in position (the flag condition is
// taken relative to the standard residue flag); each deeper digit is a
// greedy linear solve, complete at the first-order level.
struct ParFrame {
  Matrix g;
  Matrix phi_rot;
  Matrix nil_rot;
  FlagData fd;
};

std::optional<ParFrame> par_frame(const TqRep& rep,
                                  const std::vector<int>& jumps) {
  const GroupSpec& G = rep.group;
  const RingSpec& R = G.ring;
  RingSpec k = R.residue_field();
  FlagData fd = build_flag(G, jumps);
  FlagData fdk = build_flag(G.to_ring(k), jumps);
  Matrix phik = residue_matrix(rep.phi, k);
  Matrix nilk = residue_matrix(rep.nil, k);
  if (!stabilises_flag(phik, fdk) || !strictly_decreases_flag(nilk, fdk))
    return {};
  Matrix g = Matrix::identity(R, G.m);
  Matrix phr = rep.phi;
  Matrix nlr = rep.nil;
  std::vector<Matrix> zbasis = basis_hat_g(G.to_ring(k));
  auto stages = tower_stages(R);
  for (const TowerStage& st : stages) {
    if (st.j == 0 && st.i == 0) continue;
    if (G.has_form()) {
      g = group_correct_free(std::move(g), G.gram).first;
      Matrix gi = mat_inv(g);
      phr = gi * rep.phi * g;
      nlr = gi * rep.nil * g;
    }
    // Stack the digit conditions for one correction g <- g (1 + pi Z).
    std::vector<std::vector<long long>> rows;
    std::vector<long long> rhs;
    auto add_block = [&](const Matrix& A, const Matrix& B, const Matrix& Ak,
                         const Matrix& Bk, const Matrix& Yk,
                         const Matrix& Ycur) {
      if (A.rows == 0 || B.cols == 0) return;
      Matrix E = A * Ycur * B;
      Matrix digit = stage_digit_matrix(E, st);
      std::vector<std::vector<long long>> cols;
      for (const Matrix& Z : zbasis) cols.push_back(vec_ll(Ak * comm(Yk, Z) *
                                                           Bk));
      std::vector<long long> dv = vec_ll(digit);
      for (size_t r = 0; r < dv.size(); ++r) {
        std::vector<long long> row(zbasis.size());
        for (size_t c = 0; c < zbasis.size(); ++c) row[c] = cols[c][r];
        rows.push_back(std::move(row));
        rhs.push_back((k.p - dv[r] % k.p) % k.p);
      }
    };
    for (size_t t = 0; t < fd.members.size(); ++t)
      add_block(fd.ann[t], fd.members[t], fd.ann_k[t], fd.members_k[t], phik,
                phr);
    for (size_t t = 0; t < fd.members.size(); ++t) {
      Matrix A = t == 0 ? Matrix::identity(R, G.m) : fd.ann[t - 1];
      Matrix Ak = t == 0 ? Matrix::identity(k, G.m) : fd.ann_k[t - 1];
      add_block(A, fd.members[t], Ak, fd.members_k[t], nilk, nlr);
    }
    if (rows.empty()) continue;
    FpEchelon ech = FpEchelon::build_raw(rows, k.p);
    auto sol = ech.solve(rhs);
    if (!sol) return {};
    Matrix Z = from_combination(zbasis, *sol, 0, k, G.m);
    Matrix u = Matrix::identity(R, G.m) +
               re_monomial(R, st.j, st.i) * lift_matrix(Z, R);
    g = g * u;
    Matrix ui = mat_inv(u);
    phr = ui * phr * u;
    nlr = ui * nlr * u;
  }
  if (G.has_form()) {
    g = group_correct_free(std::move(g), G.gram).first;
    Matrix gi = mat_inv(g);
    phr = gi * rep.phi * g;
    nlr = gi * rep.nil * g;
  }
  if (!stabilises_flag(phr, fd) || !strictly_decreases_flag(nlr, fd))
    return {};
  ParFrame pf{g, phr, nlr, fd};
  return pf;
}

// --------------------------------------------------------- lift_step parts

Matrix stack_columns(const RingSpec& k, int rows,
                     const std::vector<std::vector<long long>>& cols) {
  Matrix A = Matrix::zeros(k, rows, static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c)
    for (int r = 0; r < rows; ++r)
      A.at(r, static_cast<int>(c)) = re_from_int(k, cols[c][r]);
  return A;
}

}  // namespace

// ----------------------------------------------------------- public pieces

LiftCondition LiftCondition::unrestricted() { return LiftCondition{}; }

LiftCondition LiftCondition::fixed_similitude(long long nu) {
  LiftCondition c;
  c.kind = Kind::FixedSimilitude;
  c.nu = nu;
  return c;
}

LiftCondition LiftCondition::minimally_ramified(OrbitRep orbit,
                                                std::optional<long long> nu) {
  LiftCondition c;
  c.kind = Kind::MinimallyRamified;
  c.orbit = std::move(orbit);
  c.nu = nu;
  return c;
}

LiftCondition LiftCondition::parabolic_ramified(std::vector<int> flag) {
  LiftCondition c;
  c.kind = Kind::ParabolicRamified;
  c.flag = std::move(flag);
  return c;
}

std::string LiftCondition::name() const {
  switch (kind) {
    case Kind::Unrestricted: return "unrestricted";
    case Kind::FixedSimilitude: return "fixed-similitude";
    case Kind::MinimallyRamified: return "minimally-ramified";
    case Kind::ParabolicRamified: return "parabolic-ramified";
  }
  return "?";
}

bool ObstructionCertificate::verify() const {
  if (f.rows != 1 || f.cols != A.rows || b.rows != A.rows || b.cols != 1)
    return false;
  return (f * A).is_zero() && !(f * b).is_zero();
}

std::vector<std::string> validate(const TqRep& rep) {
  std::vector<std::string> v;
  const GroupSpec& G = rep.group;
  const RingSpec& R = G.ring;
  if (R.p <= 0) {
    v.push_back("coefficient ring must have positive residue characteristic");
    return v;
  }
  if (rep.q < 1 || rep.q % R.p == 0)
    v.push_back("q must be a positive integer prime to p");
  if (!rep.phi.is_square() || rep.phi.rows != G.m || rep.phi.spec != R ||
      !rep.nil.is_square() || rep.nil.rows != G.m || rep.nil.spec != R) {
    v.push_back("phi and the nilpotent must be m x m over the group ring");
    return v;
  }
  auto mu = groups::try_group_membership(rep.phi, G);
  if (!mu) v.push_back("phi is not a member of the group");
  auto lam = groups::try_algebra_membership(rep.nil, G);
  if (!lam)
    v.push_back("the nilpotent is not a member of the Lie algebra");
  else if (!lam->is_zero())
    v.push_back("the nilpotent has a nonzero similitude scalar");
  RingSpec k = R.residue_field();
  bool nilp = true;
  try {
    orbits::jordan_type(residue_matrix(rep.nil, k));
  } catch (const error&) {
    nilp = false;
    v.push_back("the nilpotent is not nilpotent");
  }
  if (mu && nilp) {
    Matrix lhs = rep.phi * rep.nil * mat_inv(rep.phi);
    if (lhs != re_from_int(R, rep.q) * rep.nil)
      v.push_back("the twist relation phi N phi^{-1} = q N fails");
    else if (R.p > G.m) {
      Matrix T = explog::trunc_exp(rep.nil);
      if (rep.phi * T * mat_inv(rep.phi) != mat_pow(T, rep.q))
        v.push_back("the exponentiated twist relation fails");
      if (G.has_form() &&
          groups::try_group_membership(T, G) != std::optional(re_one(R)))
        v.push_back("the exponential of the nilpotent leaves the group");
    }
  }
  return v;
}

ConjugacyResult conjugate_nilpotent(const Matrix& N, const OrbitRep& rep) {
  const RingSpec& R = N.spec;
  if (rep.ring != R || !N.is_square() || N.rows != rep.m)
    throw error("BadShape", "matrix and representative rings disagree");
  ConjugacyResult out;
  if (R.is_field()) {
    if (N != rep.N)
      throw error("ResidueMismatch",
                  "over a field the matrices must agree exactly");
    out.g = Matrix::identity(R, rep.m);
    return out;
  }
  RingSpec k = R.residue_field();
  if (residue_matrix(N, k) != residue_matrix(rep.N, k))
    throw error("ResidueMismatch",
                "conjugation target must agree at the residue field");
  bool formful = family_has_form(rep.family);
  Matrix Jk = formful ? residue_matrix(rep.gram, k) : Matrix();
  GroupSpec Gk;
  Gk.family = rep.family;
  Gk.m = rep.m;
  Gk.ring = k;
  Gk.gram = formful ? Jk : Matrix(k, 0, 0);
  std::vector<Matrix> basis = basis_g0(Gk);
  Matrix Mk = residue_matrix(rep.N, k);
  std::vector<std::vector<long long>> cols;
  for (const Matrix& X : basis) cols.push_back(vec_ll(comm(X, Mk)));
  std::vector<std::vector<long long>> rows(
      static_cast<size_t>(rep.m) * rep.m,
      std::vector<long long>(basis.size()));
  for (size_t c = 0; c < cols.size(); ++c)
    for (size_t r = 0; r < rows.size(); ++r) rows[r][c] = cols[c][r];
  FpEchelon ech = FpEchelon::build_raw(rows, k.p);
  Matrix A_sys = stack_columns(k, rep.m * rep.m, cols);

  Matrix g = Matrix::identity(R, rep.m);
  for (const TowerStage& st : tower_stages(R)) {
    if (st.j == 0 && st.i == 0) continue;
    if (formful) g = group_correct_to(std::move(g), rep.gram, re_one(R));
    Matrix delta = N - g * rep.N * mat_inv(g);
    if (delta.is_zero()) continue;
    Matrix digit = stage_digit_matrix(delta, st);
    if (digit.is_zero()) continue;
    std::vector<long long> b = vec_ll(digit);
    auto sol = ech.solve(b);
    if (!sol) {
      Matrix bcol(k, rep.m * rep.m, 1);
      for (size_t r = 0; r < b.size(); ++r)
        bcol.at(static_cast<int>(r), 0) = re_from_int(k, b[r]);
      out.certificate =
          make_certificate(st.j + st.i, A_sys, bcol, ech, b);
      return out;
    }
    Matrix X = from_combination(basis, *sol, 0, k, rep.m);
    g = (Matrix::identity(R, rep.m) +
         re_monomial(R, st.j, st.i) * lift_matrix(X, R)) *
        g;
  }
  if (formful) g = group_correct_to(std::move(g), rep.gram, re_one(R));
  requirex(g * rep.N * mat_inv(g) == N, "approximation did not converge");
  out.g = g;
  return out;
}

bool check_condition(const TqRep& rep, const LiftCondition& cond) {
  auto viols = validate(rep);
  if (!viols.empty()) throw error("InvalidRep", viols.front());
  const GroupSpec& G = rep.group;
  switch (cond.kind) {
    case LiftCondition::Kind::Unrestricted:
      return true;
    case LiftCondition::Kind::FixedSimilitude: {
      requirex(cond.nu.has_value(), "fixed-similitude needs a target");
      return groups::group_membership(rep.phi, G) ==
             re_from_int(G.ring, *cond.nu);
    }
    case LiftCondition::Kind::MinimallyRamified: {
      requirex(cond.orbit.has_value(), "minimally-ramified needs an orbit");
      if (cond.nu && groups::group_membership(rep.phi, G) !=
                         re_from_int(G.ring, *cond.nu))
        return false;
      return mr_witness(rep, *cond.orbit).has_value();
    }
    case LiftCondition::Kind::ParabolicRamified:
      return par_frame(rep, cond.flag).has_value();
  }
  return false;
}

TqRep perturb(const TqRep& rep, const Matrix& dA, const Matrix& dB) {
  const RingSpec& R = rep.ring();
  TowerStage st = top_stage(R);
  RingElement pi = re_monomial(R, st.j, st.i);
  TqRep out = rep;
  out.phi = (Matrix::identity(R, rep.group.m) + pi * lift_matrix(dA, R)) *
            rep.phi;
  out.nil = rep.nil + pi * lift_matrix(dB, R);
  return out;
}

namespace {

LiftResult lift_step_parabolic(const TqRep& rep, const LiftCondition& cond,
                               const RingSpec& R1, const StepInfo& step) {
  const GroupSpec& G0 = rep.group;
  const RingSpec& R0 = G0.ring;
  RingSpec k = R0.residue_field();
  GroupSpec G1 = G0.to_ring(R1);
  int m = G0.m;
  long long p = k.p;
  auto pf = par_frame(rep, cond.flag);
  if (!pf)
    throw error("ConditionNotSatisfied",
                "representation is not parabolic-ramified for this flag");
  FlagData fd1 = build_flag(G1, cond.flag);
  Matrix Jk = G1.has_form() ? residue_matrix(G1.gram, k) : Matrix();
  Matrix phik = residue_matrix(pf->phi_rot, k);
  Matrix nilk = residue_matrix(pf->nil_rot, k);
  RingElement qk = re_from_int(k, rep.q);

  // Frame over the larger ring.
  Matrix Gf = lift_matrix(pf->g, R1);
  if (G1.has_form()) Gf = group_correct_free(std::move(Gf), G1.gram).first;

  // Particular flag-compatible lift of the rotated Phi: one digit solve for
  // p-hat = Pl (1 + pi X) with X over gl(k) plus a similitude increment.
  Matrix Pl = lift_matrix(pf->phi_rot, R1);
  {
    std::vector<Matrix> xbasis = basis_gl(k, m);
    std::vector<std::vector<long long>> rows;
    std::vector<long long> rhs;
    size_t ncols = xbasis.size() + (G1.similitude() ? 1 : 0);
    auto add_rows = [&](const std::vector<std::vector<long long>>& cols,
                        const std::vector<long long>& target) {
      for (size_t r = 0; r < target.size(); ++r) {
        std::vector<long long> row(ncols, 0);
        for (size_t c = 0; c < cols.size(); ++c) row[c] = cols[c][r];
        rows.push_back(std::move(row));
        rhs.push_back((p - target[r] % p) % p);
      }
    };
    if (G1.has_form()) {
      RingElement mu0 = groups::group_membership(pf->phi_rot, G0);
      RingElement mu1 = lift_element(mu0, R1);
      Matrix Eform = transpose(Pl) * G1.gram * Pl - mu1 * G1.gram;
      Matrix digit = stage_digit_matrix(Eform, step.stage);
      RingElement muk = residue(mu0, k);
      std::vector<std::vector<long long>> cols;
      for (const Matrix& X : xbasis)
        cols.push_back(vec_ll(muk * (transpose(X) * Jk + Jk * X)));
      if (G1.similitude()) cols.push_back(vec_ll(-Jk));  // d(mu) column
      add_rows(cols, vec_ll(digit));
    }
    for (size_t t = 0; t < fd1.members.size(); ++t) {
      if (fd1.ann[t].rows == 0) continue;
      Matrix E = fd1.ann[t] * Pl * fd1.members[t];
      Matrix digit = stage_digit_matrix(E, step.stage);
      std::vector<std::vector<long long>> cols;
      for (const Matrix& X : xbasis)
        cols.push_back(vec_ll(fd1.ann_k[t] * phik * X * fd1.members_k[t]));
      add_rows(cols, vec_ll(digit));
    }
    FpEchelon ech = FpEchelon::build_raw(rows, p);
    auto sol = ech.solve(rhs);
    requirex(sol.has_value(), "no flag-compatible lift of phi");
    Matrix X = from_combination(xbasis, *sol, 0, k, m);
    Pl = Pl * (Matrix::identity(R1, m) + step.pi * lift_matrix(X, R1));
  }

  // Particular flag-compatible lift of the rotated nilpotent.
  Matrix Nl = lift_matrix(pf->nil_rot, R1);
  {
    std::vector<Matrix> xbasis = basis_gl(k, m);
    std::vector<std::vector<long long>> rows;
    std::vector<long long> rhs;
    auto add_rows = [&](const std::vector<std::vector<long long>>& cols,
                        const std::vector<long long>& target) {
      for (size_t r = 0; r < target.size(); ++r) {
        std::vector<long long> row(xbasis.size(), 0);
        for (size_t c = 0; c < cols.size(); ++c) row[c] = cols[c][r];
        rows.push_back(std::move(row));
        rhs.push_back((p - target[r] % p) % p);
      }
    };
    if (G1.has_form()) {
      Matrix Eform = transpose(Nl) * G1.gram + G1.gram * Nl;
      Matrix digit = stage_digit_matrix(Eform, step.stage);
      std::vector<std::vector<long long>> cols;
      for (const Matrix& X : xbasis)
        cols.push_back(vec_ll(transpose(X) * Jk + Jk * X));
      add_rows(cols, vec_ll(digit));
    }
    for (size_t t = 0; t < fd1.members.size(); ++t) {
      Matrix A = t == 0 ? Matrix::identity(R1, m) : fd1.ann[t - 1];
      if (A.rows == 0) continue;
      Matrix E = A * Nl * fd1.members[t];
      Matrix digit = stage_digit_matrix(E, step.stage);
      std::vector<std::vector<long long>> cols;
      Matrix Ak = residue_matrix(A, k);
      Matrix Bk = residue_matrix(fd1.members[t], k);
      for (const Matrix& X : xbasis) cols.push_back(vec_ll(Ak * X * Bk));
      add_rows(cols, vec_ll(digit));
    }
    FpEchelon ech = FpEchelon::build_raw(rows, p);
    auto sol = ech.solve(rhs);
    requirex(sol.has_value(), "no flag-compatible lift of the nilpotent");
    Matrix C = from_combination(xbasis, *sol, 0, k, m);
    Nl = Nl + step.pi * lift_matrix(C, R1);
  }

  // Linearised twist relation inside the parabolic coordinates.
  Matrix D = Pl * Nl * mat_inv(Pl) - re_from_int(R1, rep.q) * Nl;
  Matrix digit = stage_digit_matrix(D, step.stage);
  Matrix phiki = mat_inv(phik);
  std::vector<std::vector<long long>> cols;
  for (const Matrix& a : fd1.p_basis)
    cols.push_back(vec_ll(qk * comm(a, nilk)));
  for (const Matrix& b : fd1.n_basis)
    cols.push_back(vec_ll(phik * b * phiki - qk * b));
  Matrix A_sys = stack_columns(k, m * m, cols);
  FpEchelon ech = FpEchelon::build(A_sys);
  std::vector<long long> rhs = vec_ll(-digit);
  LiftResult out;
  auto sol = ech.solve(rhs);
  if (!sol) {
    Matrix bcol(k, m * m, 1);
    for (size_t r = 0; r < rhs.size(); ++r)
      bcol.at(static_cast<int>(r), 0) = re_from_int(k, rhs[r]);
    out.certificate = make_certificate(step.degree, A_sys, bcol, ech, rhs);
    return out;
  }
  Matrix a_sol = from_combination(fd1.p_basis, *sol, 0, k, m);
  Matrix b_sol =
      from_combination(fd1.n_basis, *sol, fd1.p_basis.size(), k, m);
  Matrix Gfi = mat_inv(Gf);
  Matrix phi1 = Gf *
                ((Matrix::identity(R1, m) + step.pi * lift_matrix(a_sol, R1)) *
                 Pl) *
                Gfi;
  Matrix nil1 = Gf * (Nl + step.pi * lift_matrix(b_sol, R1)) * Gfi;
  TqRep rep1;
  rep1.group = G1;
  rep1.q = rep.q;
  rep1.phi = phi1;
  rep1.nil = nil1;
  requirex(validate(rep1).empty(), "parabolic lift fails validation");
  Matrix gk = residue_matrix(Gf, k);
  Matrix gki = mat_inv(gk);
  for (const auto& kv : ech.kernel_basis()) {
    Matrix da = from_combination(fd1.p_basis, kv, 0, k, m);
    Matrix db = from_combination(fd1.n_basis, kv, fd1.p_basis.size(), k, m);
    out.kernel.push_back(LiftDirection{gk * da * gki, gk * db * gki});
  }
  out.rep = rep1;
  return out;
}

}  // namespace

LiftResult lift_step(const TqRep& rep, const LiftCondition& cond,
                     const RingSpec& target) {
  auto viols = validate(rep);
  if (!viols.empty()) throw error("InvalidRep", viols.front());
  const GroupSpec& G0 = rep.group;
  const RingSpec& R0 = G0.ring;
  StepInfo step = step_info(R0, target);
  if (cond.kind == LiftCondition::Kind::ParabolicRamified)
    return lift_step_parabolic(rep, cond, target, step);

  RingSpec k = R0.residue_field();
  GroupSpec G1 = G0.to_ring(target);
  GroupSpec Gk = G0.to_ring(k);
  int m = G0.m;
  RingElement qk = re_from_int(k, rep.q);
  Matrix phik = residue_matrix(rep.phi, k);
  Matrix nilk = residue_matrix(rep.nil, k);
  Matrix phiki = mat_inv(phik);

  // Group- and algebra-corrected particular lifts.
  RingElement mu0 = groups::group_membership(rep.phi, G0);
  bool fixed_mu = cond.kind == LiftCondition::Kind::FixedSimilitude ||
                  (cond.kind == LiftCondition::Kind::MinimallyRamified &&
                   cond.nu.has_value());
  if (fixed_mu && mu0 != re_from_int(R0, *cond.nu))
    throw error("ConditionNotSatisfied", "similitude already disagrees");
  RingElement mu1 = fixed_mu ? re_from_int(target, *cond.nu)
                             : lift_element(mu0, target);
  Matrix phihat = lift_matrix(rep.phi, target);
  if (G1.has_form())
    phihat = group_correct_to(std::move(phihat), G1.gram, mu1);
  Matrix nilhat = lift_matrix(rep.nil, target);
  if (G1.has_form()) {
    Matrix E = transpose(nilhat) * G1.gram + G1.gram * nilhat;
    if (!E.is_zero()) {
      Matrix digit = stage_digit_matrix(E, step.stage);
      Matrix Jk = residue_matrix(G1.gram, k);
      LinearSolve ls = solve_linear(form_rows(Jk, false), col_of(-digit));
      requirex(ls.solvable, "no algebra-compatible lift of the nilpotent");
      Matrix C(k, m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) C.at(i, j) = ls.x.at(i * m + j, 0);
      nilhat = nilhat + step.pi * lift_matrix(C, target);
    }
  }

  // Minimally ramified: exact base point over the target ring and the
  // particular tangent direction pointing back into the pure cone.
  Matrix B0 = Matrix::zeros(k, m, m);
  std::vector<Matrix> xbasis;
  if (cond.kind == LiftCondition::Kind::MinimallyRamified) {
    requirex(cond.orbit.has_value(), "minimally-ramified needs an orbit");
    auto tp1 = make_transport(G1, *cond.orbit);
    if (!tp1)
      throw error("ConditionNotSatisfied",
                  "representative form is inequivalent to the working form");
    Matrix M0 = residue_matrix(tp1->M, R0);
    Matrix Nk = residue_matrix(rep.nil, k);
    Matrix Mk = residue_matrix(M0, k);
    if (orbits::jordan_type(Nk) != cond.orbit->sigma)
      throw error("ConditionNotSatisfied", "wrong residue orbit type");
    auto ra = align_residue(Nk, Mk, Gk);
    if (!ra)
      throw error("ConditionNotSatisfied",
                  "residue nilpotent is not conjugate to the representative");
    Matrix g0 = lift_matrix(ra->g0, R0);
    if (G0.has_form())
      g0 = group_correct_to(std::move(g0), G0.gram, lift_element(ra->mu, R0));
    OrbitRep rep_T0 = transported_rep(*tp1, G1);
    rep_T0.ring = R0;
    rep_T0.N = M0;
    rep_T0.gram = G0.has_form() ? G0.gram : Matrix(R0, 0, 0);
    ConjugacyResult cr =
        conjugate_nilpotent(mat_inv(g0) * rep.nil * g0, rep_T0);
    if (!cr.g)
      throw error("ConditionNotSatisfied",
                  "representation is not minimally ramified");
    Matrix w0 = g0 * *cr.g;
    Matrix w1 = lift_matrix(w0, target);
    if (G1.has_form())
      w1 = group_correct_free(std::move(w1), G1.gram).first;
    Matrix npure = w1 * tp1->M * mat_inv(w1);
    requirex(residue_matrix(npure, R0) == rep.nil,
             "pure lift does not reduce to the representation");
    B0 = stage_digit_matrix(npure - nilhat, step.stage);
    xbasis = basis_g0(Gk);
  }

  Matrix D = phihat * nilhat * mat_inv(phihat) -
             re_from_int(target, rep.q) * nilhat;
  Matrix digit = stage_digit_matrix(D, step.stage);

  std::vector<Matrix> abasis;
  if (fixed_mu && G1.has_form())
    abasis = basis_g0(Gk);
  else
    abasis = basis_hat_g(Gk);
  std::vector<Matrix> bbasis;
  bool mr = cond.kind == LiftCondition::Kind::MinimallyRamified;
  if (!mr) bbasis = basis_g0(Gk);

  std::vector<std::vector<long long>> cols;
  for (const Matrix& a : abasis) cols.push_back(vec_ll(qk * comm(a, nilk)));
  if (mr) {
    for (const Matrix& x : xbasis) {
      Matrix B = comm(x, nilk);
      cols.push_back(vec_ll(phik * B * phiki - qk * B));
    }
  } else {
    for (const Matrix& b : bbasis)
      cols.push_back(vec_ll(phik * b * phiki - qk * b));
  }
  Matrix A_sys = stack_columns(k, m * m, cols);
  FpEchelon ech = FpEchelon::build(A_sys);
  Matrix rhs_mat = -digit;
  if (mr) rhs_mat = rhs_mat - (phik * B0 * phiki - qk * B0);
  std::vector<long long> rhs = vec_ll(rhs_mat);

  LiftResult out;
  auto sol = ech.solve(rhs);
  if (!sol) {
    Matrix bcol(k, m * m, 1);
    for (size_t r = 0; r < rhs.size(); ++r)
      bcol.at(static_cast<int>(r), 0) = re_from_int(k, rhs[r]);
    out.certificate = make_certificate(step.degree, A_sys, bcol, ech, rhs);
    return out;
  }
  Matrix A_sol = from_combination(abasis, *sol, 0, k, m);
  Matrix B_sol = mr ? B0 + comm(from_combination(xbasis, *sol, abasis.size(),
                                                 k, m),
                                nilk)
                    : from_combination(bbasis, *sol, abasis.size(), k, m);
  TqRep rep1;
  rep1.group = G1;
  rep1.q = rep.q;
  rep1.phi = (Matrix::identity(target, m) + step.pi * lift_matrix(A_sol,
                                                                  target)) *
             phihat;
  rep1.nil = nilhat + step.pi * lift_matrix(B_sol, target);
  requirex(validate(rep1).empty(), "lift fails validation");
  for (const auto& kv : ech.kernel_basis()) {
    Matrix da = from_combination(abasis, kv, 0, k, m);
    Matrix db = mr ? comm(from_combination(xbasis, kv, abasis.size(), k, m),
                          nilk)
                   : from_combination(bbasis, kv, abasis.size(), k, m);
    out.kernel.push_back(LiftDirection{da, db});
  }
  out.rep = rep1;
  return out;
}

TangentReport tangent_report(const TqRep& rep, const LiftCondition& cond) {
  const GroupSpec& G = rep.group;
  const RingSpec& R = G.ring;
  if (!R.is_field() || R.p <= 0)
    throw error("BadShape", "tangent report needs a residue-field base");
  RingSpec eps2 = RingSpec::eps_trunc(R, 2);
  LiftResult lr = lift_step(rep, cond, eps2);
  requirex(lr.rep.has_value(), "first-order step is unobstructed");
  int m = G.m;
  std::vector<std::vector<long long>> rows;
  for (const LiftDirection& d : lr.kernel) {
    std::vector<long long> row = vec_ll(d.dA);
    std::vector<long long> rb = vec_ll(d.dB);
    row.insert(row.end(), rb.begin(), rb.end());
    rows.push_back(std::move(row));
  }
  TangentReport tr;
  if (!rows.empty()) {
    FpEchelon ech = FpEchelon::build_raw(rows, R.p);
    // build_raw consumes rows as a matrix whose rank we want.
    tr.dim_lifting = ech.rank;
  }

  Matrix phik = rep.phi;
  Matrix nilk = rep.nil;
  auto h0_dim = [&](bool lambda_free) {
    int cols = m * m + (lambda_free && G.similitude() ? 1 : 0);
    std::vector<Matrix> blocks;
    if (G.has_form()) blocks.push_back(form_rows(G.gram, lambda_free &&
                                                             G.similitude()));
    auto comm_rows = [&](const Matrix& Y) {
      Matrix C = Matrix::zeros(R, m * m, cols);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int a = 0; a < m; ++a) {
            // coefficient of X_{i a} from X*Y and of X_{a j} from -Y*X
            C.at(i * m + j, i * m + a) =
                C.at(i * m + j, i * m + a) + Y.at(a, j);
            C.at(i * m + j, a * m + j) =
                C.at(i * m + j, a * m + j) - Y.at(i, a);
          }
      return C;
    };
    blocks.push_back(comm_rows(nilk));
    blocks.push_back(comm_rows(phik));
    if (!G.has_form() && !lambda_free) {
      Matrix tr_row = Matrix::zeros(R, 1, cols);
      for (int i = 0; i < m; ++i) tr_row.at(0, i * m + i) = re_one(R);
      blocks.push_back(tr_row);
    }
    int total = 0;
    for (const Matrix& b : blocks) total += b.rows;
    Matrix S = Matrix::zeros(R, total, cols);
    int off = 0;
    for (const Matrix& b : blocks) {
      for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) S.at(off + i, j) = b.at(i, j);
      off += b.rows;
    }
    return cols - mat_rank(S);
  };
  tr.dim_h0 = h0_dim(true);
  tr.dim_h0_ad0 = h0_dim(false);
  int dim_amb = G.has_form()
                    ? static_cast<int>(basis_hat_g(G).size())
                    : m * m;
  tr.dim_deformation = tr.dim_lifting - dim_amb + tr.dim_h0;
  return tr;
}

RingSpec eps_extension(const RingSpec& r) {
  if (r.p == 0 || r.a != 1)
    throw error("NotSmall", "eps extensions require a prime-field base");
  return RingSpec::eps_trunc(RingSpec::prime_field(r.p), r.n + 1);
}

RingSpec p_extension(const RingSpec& r) {
  if (r.p == 0 || r.n != 1)
    throw error("NotSmall", "p extensions require eps-length one");
  return RingSpec::mod_prime_power(r.p, r.a + 1);
}

Partition richardson_partition(const GroupSpec& G,
                               const std::vector<int>& flag) {
  GroupSpec GQ = GroupSpec::standard(G.family, G.m, RingSpec::rationals());
  FlagData fd = build_flag(GQ, flag);
  auto sample = [&](long long seed0, long long mult) {
    Matrix N = Matrix::zeros(GQ.ring, G.m, G.m);
    long long c = seed0;
    for (const Matrix& b : fd.n_basis) {
      N = N + re_from_int(GQ.ring, c) * b;
      c = c * mult + 1;
    }
    return orbits::jordan_type(N);
  };
  Partition s1 = sample(2, 3);
  Partition s2 = sample(5, 7);
  if (s1 == s2) return s1;
  // Keep the dominant of the two draws (a non-generic draw only drops).
  return partitions::dominance_leq(s1, s2) ? s2 : s1;
}

SearchResult search_unliftable(const TqRep& rep, const LiftCondition& cond,
                               int depth, int threads) {
  (void)threads;  // trial classes are chased serially and deterministically
  const GroupSpec& G = rep.group;
  const RingSpec& R = G.ring;
  if (!R.is_field() || R.p <= 0)
    throw error("BadShape", "search needs a residue-field base");
  long long p = R.p;
  int m = G.m;
  SearchResult out;
  if (!check_condition(rep, cond)) {
    out.exhausted = true;
    out.note = "base representation does not satisfy the condition";
    return out;
  }
  if (cond.kind == LiftCondition::Kind::ParabolicRamified) {
    Partition rich = richardson_partition(G, cond.flag);
    Partition sig = orbits::jordan_type(rep.nil);
    if (!partitions::dominance_leq(sig, rich)) {
      out.exhausted = true;
      out.note = "orbit type is not dominated by the Richardson type";
      return out;
    }
  }
  RingSpec eps2 = RingSpec::eps_trunc(R, 2);
  LiftResult first = lift_step(rep, cond, eps2);
  requirex(first.rep.has_value(), "base admits no first-order lift");

  // Tangent classes modulo strict equivalence (coboundaries).
  std::vector<std::vector<long long>> reducer;  // echelon rows, 2 m^2 wide
  std::vector<int> pivots;
  auto reduce_row = [&](std::vector<long long> v) {
    for (size_t t = 0; t < reducer.size(); ++t) {
      long long c = v[static_cast<size_t>(pivots[t])] % p;
      if (c == 0) continue;
      for (size_t j = 0; j < v.size(); ++j)
        v[j] = ((v[j] - c * reducer[t][j]) % p + p) % p;
    }
    return v;
  };
  auto add_row = [&](std::vector<long long> v) {
    v = reduce_row(std::move(v));
    int pc = -1;
    for (size_t j = 0; j < v.size(); ++j)
      if (v[j] % p != 0) {
        pc = static_cast<int>(j);
        break;
      }
    if (pc < 0) return false;
    long long inv = mod_inv(v[static_cast<size_t>(pc)], p);
    for (size_t j = 0; j < v.size(); ++j) v[j] = (v[j] * inv) % p;
    reducer.push_back(std::move(v));
    pivots.push_back(pc);
    return true;
  };
  Matrix phik = rep.phi;
  Matrix nilk = rep.nil;
  Matrix phiki = mat_inv(phik);
  for (const Matrix& X : basis_hat_g(G)) {
    std::vector<long long> row = vec_ll(X - phik * X * phiki);
    std::vector<long long> rb = vec_ll(comm(X, nilk));
    row.insert(row.end(), rb.begin(), rb.end());
    add_row(std::move(row));
  }
  std::vector<std::vector<long long>> classes;
  for (const LiftDirection& d : first.kernel) {
    std::vector<long long> row = vec_ll(d.dA);
    std::vector<long long> rb = vec_ll(d.dB);
    row.insert(row.end(), rb.begin(), rb.end());
    std::vector<long long> r = reduce_row(row);
    bool nonzero = false;
    for (long long x : r) nonzero = nonzero || x % p != 0;
    if (nonzero && add_row(row)) classes.push_back(std::move(row));
  }

  // Candidate tangent vectors. Obstructed lifts are points of the first
  // order solution space, not classes: a class whose chosen representative
  // extends can still contain non-extending points, because shifting by a
  // coboundary moves the quadratic part of the defect. The parabolic
  // conditions show this concretely, so for them we sweep low-support
  // combinations of the kernel basis before walking the class space.
  std::vector<std::vector<long long>> candidates;
  size_t vlen = 2 * static_cast<size_t>(m) * m;
  constexpr size_t kCandidateCap = 100000;
  auto add_cand = [&](std::vector<long long> v) {
    if (candidates.size() < kCandidateCap) candidates.push_back(std::move(v));
  };
  add_cand(std::vector<long long>(vlen, 0));
  if (cond.kind == LiftCondition::Kind::ParabolicRamified) {
    std::vector<std::vector<long long>> dirs;
    for (const LiftDirection& d : first.kernel) {
      std::vector<long long> row = vec_ll(d.dA);
      std::vector<long long> rb = vec_ll(d.dB);
      row.insert(row.end(), rb.begin(), rb.end());
      dirs.push_back(std::move(row));
    }
    for (const auto& dir : dirs)
      for (long long c = 1; c < p; ++c) {
        std::vector<long long> v(vlen, 0);
        for (size_t j = 0; j < vlen; ++j) v[j] = c * dir[j] % p;
        add_cand(std::move(v));
      }
    for (size_t i = 0; i < dirs.size(); ++i)
      for (size_t j = i + 1; j < dirs.size(); ++j)
        for (long long ci = 1; ci < p; ++ci)
          for (long long cj = 1; cj < p; ++cj) {
            std::vector<long long> v(vlen, 0);
            for (size_t t = 0; t < vlen; ++t)
              v[t] = (ci * dirs[i][t] + cj * dirs[j][t]) % p;
            add_cand(std::move(v));
          }
  }
  size_t rdim = classes.size();
  double total = 1;
  for (size_t t = 0; t < rdim; ++t) total *= static_cast<double>(p);
  if (total <= static_cast<double>(kCandidateCap)) {
    std::vector<long long> idx(rdim, 0);
    while (true) {
      size_t t0 = 0;
      while (t0 < rdim && ++idx[t0] == p) idx[t0++] = 0;
      if (t0 == rdim) break;
      std::vector<long long> v(vlen, 0);
      for (size_t t = 0; t < rdim; ++t)
        for (size_t j = 0; j < vlen; ++j)
          v[j] = (v[j] + idx[t] * classes[t][j]) % p;
      add_cand(std::move(v));
    }
  } else {
    for (const auto& c : classes) add_cand(c);
    out.note = "class space exceeded the enumeration bound; spanning set "
               "only";
  }

  for (const auto& cand : candidates) {
    ++out.classes_tried;
    Matrix dA = unvec(R, m, cand, 0);
    Matrix dB = unvec(R, m, cand, static_cast<size_t>(m) * m);
    TqRep base;
    base.group = G.to_ring(eps2);
    base.q = rep.q;
    base.phi = lift_matrix(rep.phi, eps2);
    base.nil = lift_matrix(rep.nil, eps2);
    TqRep cur = perturb(base, dA, dB);
    for (int n = 2; n < depth; ++n) {
      RingSpec next = RingSpec::eps_trunc(R, n + 1);
      LiftResult lr;
      try {
        lr = lift_step(cur, cond, next);
      } catch (const error& e) {
        // Frame tracking can fail beyond first order; record and move on.
        out.note = std::string("frame search failed at depth ") +
                   std::to_string(n + 1) + " (" + e.code() + ")";
        break;
      }
      if (lr.certificate) {
        out.certificate = lr.certificate;
        out.witness = perturb(base, dA, dB);
        return out;
      }
      cur = *lr.rep;
    }
  }
  out.exhausted = true;
  return out;
}

}  // namespace deform
}  // namespace tq

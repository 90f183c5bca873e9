#include "tq/orbits.hpp"

#include <algorithm>
#include <cassert>

namespace tq {
namespace orbits {

namespace {

int sign_pow(int k) { return k % 2 == 0 ? 1 : -1; }  // (-1)^k

void require(bool cond, const char* code, const std::string& what) {
  if (!cond) throw error(code, what);
}

}  // namespace

BlockMatrices build_block(int d, bool paired, int epsilon,
                          const RingSpec& ring) {
  require(d >= 1, "BadPartition", "block size must be positive");
  require(epsilon == 1 || epsilon == -1, "BadFamily", "epsilon must be +-1");
  const int span = paired ? 2 * d : d;
  BlockMatrices out{Matrix(ring, span, span), Matrix(ring, span, span)};
  // Chain action N v_i = v_{i-1} on each chain.
  for (int i = 1; i < d; ++i) {
    out.N.at(i - 1, i) = re_one(ring);
    if (paired) out.N.at(d + i - 1, d + i) = re_one(ring);
  }
  if (!paired) {
    for (int i = 1; i <= d; ++i) {
      const int j = d + 1 - i;
      out.gram.at(i - 1, j - 1) = re_from_int(ring, sign_pow(i));
    }
  } else {
    for (int i = 1; i <= d; ++i) {
      const int j = d + 1 - i;
      out.gram.at(i - 1, d + j - 1) = re_from_int(ring, sign_pow(i));
      out.gram.at(d + j - 1, i - 1) = re_from_int(ring, epsilon * sign_pow(i));
    }
  }
  return out;
}

OrbitRep build_representative(const Partition& sigma, Family f, int m,
                              const RingSpec& ring) {
  require(sigma.total() == m, "BadPartition",
          "partition " + sigma.to_string() + " is not a partition of " +
              std::to_string(m));
  if (family_has_form(f) && !partitions::is_admissible(sigma, f))
    throw error("InadmissiblePartition", sigma.to_string() +
                                             " is not admissible for " +
                                             family_name(f));

  OrbitRep rep;
  rep.family = f;
  rep.m = m;
  rep.sigma = sigma;
  rep.ring = ring;
  rep.N = Matrix(ring, m, m);
  rep.gram = family_has_form(f) ? Matrix(ring, m, m) : Matrix(ring, 0, 0);

  // Descending part order; one single block per part of the self-dual
  // parity, one paired block per two parts of the other parity.
  int offset = 0;
  auto emit = [&](int d, bool paired) {
    OrbitBlock blk{d, paired, offset};
    const int b = static_cast<int>(rep.blocks.size());
    BlockMatrices bm = build_block(
        d, paired, family_has_form(f) ? family_epsilon(f) : 1, ring);
    for (int i = 0; i < blk.span(); ++i)
      for (int j = 0; j < blk.span(); ++j) {
        rep.N.at(offset + i, offset + j) = bm.N.at(i, j);
        if (family_has_form(f))
          rep.gram.at(offset + i, offset + j) = bm.gram.at(i, j);
      }
    for (int rep_chain = 0; rep_chain < (paired ? 2 : 1); ++rep_chain)
      for (int pos = 1; pos <= d; ++pos)
        rep.labels.push_back({b, pos, rep_chain == 1});
    rep.blocks.push_back(blk);
    offset += blk.span();
  };

  size_t i = 0;
  while (i < sigma.parts.size()) {
    const int d = sigma.parts[i];
    size_t j = i;
    while (j < sigma.parts.size() && sigma.parts[j] == d) ++j;
    const int mult = static_cast<int>(j - i);
    if (!family_has_form(f)) {
      for (int t = 0; t < mult; ++t) emit(d, false);
    } else {
      const bool single_parity =
          family_epsilon(f) == 1 ? d % 2 == 1 : d % 2 == 0;
      if (single_parity) {
        for (int t = 0; t < mult; ++t) emit(d, false);
      } else {
        require(mult % 2 == 0, "InadmissiblePartition",
                "odd multiplicity of a non-self-dual part");
        for (int t = 0; t < mult / 2; ++t) emit(d, true);
      }
    }
    i = j;
  }
  return rep;
}

int label_weight(const OrbitRep& rep, int basis_index) {
  const OrbitLabel& l = rep.labels.at(basis_index);
  return rep.blocks.at(l.block).d + 1 - 2 * l.pos;
}

Partition jordan_type(const Matrix& N) {
  require(N.is_square(), "BadShape", "jordan type of a non-square matrix");
  require(N.spec.is_field(), "BadRingSpec",
          "jordan type is computed over a field");
  const int m = N.rows;
  std::vector<int> rank_of_power{m};  // rank N^0
  Matrix P = Matrix::identity(N.spec, m);
  for (int k = 1; k <= m && !P.is_zero(); ++k) {
    P = P * N;
    rank_of_power.push_back(mat_rank(P));
  }
  if (!P.is_zero()) throw error("NotNilpotent", "matrix is not nilpotent");
  // c_k = #parts >= k = rank N^{k-1} - rank N^k.
  std::vector<int> c;
  for (size_t k = 1; k < rank_of_power.size(); ++k)
    c.push_back(rank_of_power[k - 1] - rank_of_power[k]);
  std::vector<int> parts;
  for (int idx = 1; idx <= (c.empty() ? 0 : c[0]); ++idx) {
    int d = 0;
    for (int v : c)
      if (v >= idx) ++d;
    parts.push_back(d);
  }
  if (parts.empty()) parts.assign(m, 1);  // N = 0
  return Partition(parts);
}

PurityReport purity(const Matrix& N_over_q, long long p) {
  require(N_over_q.spec.is_rational(), "BadRingSpec",
          "purity compares Q with its mod-p reduction");
  PurityReport rep;
  rep.over_q = jordan_type(N_over_q);
  rep.residue = jordan_type(residue_matrix(N_over_q, RingSpec::prime_field(p)));
  rep.pure = rep.over_q == rep.residue;
  return rep;
}

Matrix standard_gram(int epsilon, int m, const RingSpec& ring) {
  require(epsilon == 1 || epsilon == -1, "BadFamily", "epsilon must be +-1");
  Matrix J(ring, m, m);
  if (epsilon == 1) {
    for (int i = 0; i < m; ++i) J.at(i, m - 1 - i) = re_one(ring);
  } else {
    require(m % 2 == 0, "BadShape", "alternating forms need even rank");
    for (int i = 0; i < m / 2; ++i) {
      J.at(i, m - 1 - i) = re_from_int(ring, 1);
      J.at(m - 1 - i, i) = re_from_int(ring, -1);
    }
  }
  return J;
}

// ------------------------------------------------------------- normalize

namespace {

Matrix unit_column(const RingSpec& ring, int m, int idx, long long scale) {
  Matrix v(ring, m, 1);
  v.at(idx, 0) = re_from_int(ring, scale);
  return v;
}

RingElement pair_value(const Matrix& gram, const Matrix& u, const Matrix& v) {
  return (transpose(u) * gram * v).at(0, 0);
}

}  // namespace

NormalizeResult normalize_to_standard(const OrbitRep& rep) {
  require(family_has_form(rep.family), "FormlessFamily",
          "GL representatives have no Gram form to normalize");
  const RingSpec& ring = rep.ring;
  const int eps = family_epsilon(rep.family);
  const int m = rep.m;
  NormalizeResult out;
  out.J_std = standard_gram(eps, m, ring);

  // Collect the +-1 cross pairings and (orthogonal case) the self-paired
  // chain middles straight off the block structure.
  struct CrossPair {
    Matrix x, y;  // phi(x, y) = phi-value c = +-1 before adjustment
    int c;
  };
  std::vector<CrossPair> pairs;
  std::vector<std::pair<Matrix, int>> middles;  // (vector, eta = phi(v,v))

  for (size_t b = 0; b < rep.blocks.size(); ++b) {
    const OrbitBlock& blk = rep.blocks[b];
    const int d = blk.d, off = blk.offset;
    if (!blk.paired) {
      for (int i = 1; 2 * i < d + 1; ++i)
        pairs.push_back({unit_column(ring, m, off + i - 1, 1),
                         unit_column(ring, m, off + d - i, 1), sign_pow(i)});
      if (d % 2 == 1) {
        const int mid = (d + 1) / 2;
        middles.emplace_back(unit_column(ring, m, off + mid - 1, 1),
                             sign_pow(mid));
      }
    } else {
      for (int i = 1; i <= d; ++i)
        pairs.push_back({unit_column(ring, m, off + i - 1, 1),
                         unit_column(ring, m, off + d + (d - i), 1),
                         sign_pow(i)});
    }
  }

  // Orthogonal case: mix self-paired vectors two at a time into hyperbolic
  // pairs w = (sqrt(eta) v - sqrt(-eta') v')/sqrt(2),
  // w' = (sqrt(eta) v + sqrt(-eta') v')/sqrt(2); at most one survivor gets
  // rescaled directly.
  std::optional<Matrix> center;
  auto root_of = [&](long long radicand) -> std::optional<RingElement> {
    if (radicand == 1) return re_one(ring);
    auto r = sqrt_unit(re_from_int(ring, radicand));
    if (!r && !out.missing) out.missing = radicand;
    return r;
  };
  for (size_t t = 0; t + 1 < middles.size(); t += 2) {
    const auto& [v, eta] = middles[t];
    const auto& [vp, etap] = middles[t + 1];
    auto a = root_of(eta);        // sqrt(eta)
    auto bq = root_of(-etap);     // sqrt(-eta')
    auto s2 = root_of(2);
    if (!a || !bq || !s2) return out;
    RingElement inv_s2 = re_inv(*s2);
    Matrix w = inv_s2 * ((*a) * v - (*bq) * vp);
    Matrix wp = inv_s2 * ((*a) * v + (*bq) * vp);
    pairs.push_back({w, wp, 1});
  }
  if (middles.size() % 2 == 1) {
    const auto& [v, eta] = middles.back();
    if (eta == 1) {
      center = v;
    } else {
      auto r = root_of(-1);  // t with t^2 = eta^{-1} = -1
      if (!r) return out;
      center = re_inv(*r) * v;
    }
  }

  require(2 * pairs.size() + (center ? 1 : 0) == static_cast<size_t>(m),
          "InternalInvariant", "pair bookkeeping mismatch");

  // Slot i pairs with slot m+1-i carrying phi_std = +1 (orthogonal) or
  // +1/-1 split (symplectic); a c = -1 cross value is absorbed into x.
  Matrix C(ring, m, m);
  auto set_col = [&](int slot, const Matrix& v) {
    for (int r = 0; r < m; ++r) C.at(r, slot) = v.at(r, 0);
  };
  for (size_t s = 0; s < pairs.size(); ++s) {
    const auto& pr = pairs[s];
    Matrix x = pr.c == 1 ? pr.x : re_from_int(ring, pr.c) * pr.x;
    set_col(static_cast<int>(s), x);
    set_col(m - 1 - static_cast<int>(s), pr.y);
  }
  if (center) set_col(m / 2, *center);

  require(transpose(C) * rep.gram * C == out.J_std, "InternalInvariant",
          "normalization did not reach the standard form");
  out.C = C;
  return out;
}

// ---------------------------------------------------------- congruence

namespace {

struct CanonicalBasis {
  Matrix T;           // T^t J T = canonical
  int nonsquare = 0;  // orthogonal case: 1 if the last diagonal entry is the
                      // fixed non-residue, else 0
};

long long smallest_nonresidue(long long p) {
  for (long long z = 2; z < p; ++z)
    if (mod_pow(z, (p - 1) / 2, p) == p - 1) return z;
  throw error("InternalInvariant", "no quadratic non-residue found");
}

// Over F_p.  Alternating: hyperbolic pairs arranged against the standard
// alternating Gram.  Symmetric: orthogonal diagonalization, entries scaled
// into {1, c} with c the smallest non-residue, c-pairs merged back to ones.
CanonicalBasis reduce_to_canonical(const Matrix& J, int eps) {
  const RingSpec& k = J.spec;
  const int m = J.rows;
  std::vector<Matrix> rem;
  for (int i = 0; i < m; ++i) rem.push_back(unit_column(k, m, i, 1));
  CanonicalBasis out;
  out.T = Matrix(k, m, m);
  auto set_col = [&](int slot, const Matrix& v) {
    for (int r = 0; r < m; ++r) out.T.at(r, slot) = v.at(r, 0);
  };

  if (eps == -1) {
    int slot = 0;
    while (!rem.empty()) {
      Matrix u = rem.front();
      rem.erase(rem.begin());
      int wi = -1;
      for (size_t t = 0; t < rem.size(); ++t)
        if (!pair_value(J, u, rem[t]).is_zero()) {
          wi = static_cast<int>(t);
          break;
        }
      require(wi >= 0, "SingularMatrix", "degenerate alternating form");
      Matrix w = re_inv(pair_value(J, u, rem[wi])) * rem[wi];
      rem.erase(rem.begin() + wi);
      for (auto& r : rem) {
        RingElement beta = pair_value(J, u, r);
        RingElement alpha = -pair_value(J, w, r);
        r = r - alpha * u - beta * w;
      }
      set_col(slot, u);
      set_col(m - 1 - slot, w);
      ++slot;
    }
    return out;
  }

  // Symmetric: diagonalize.
  std::vector<std::pair<Matrix, RingElement>> diag;
  while (!rem.empty()) {
    int vi = -1;
    for (size_t t = 0; t < rem.size(); ++t)
      if (!pair_value(J, rem[t], rem[t]).is_zero()) {
        vi = static_cast<int>(t);
        break;
      }
    Matrix v(k, m, 1);
    if (vi >= 0) {
      v = rem[vi];
      rem.erase(rem.begin() + vi);
    } else {
      // All diagonal values vanish; some cross value does not (p odd).
      bool found = false;
      for (size_t a = 0; a < rem.size() && !found; ++a)
        for (size_t b = a + 1; b < rem.size() && !found; ++b)
          if (!pair_value(J, rem[a], rem[b]).is_zero()) {
            v = rem[a] + rem[b];
            rem[a] = rem[a] - rem[b];  // keep the complementary direction
            rem.erase(rem.begin() + b);
            found = true;
          }
      require(found, "SingularMatrix", "degenerate symmetric form");
    }
    RingElement q = pair_value(J, v, v);
    RingElement qi = re_inv(q);
    for (auto& r : rem) r = r - (qi * pair_value(J, v, r)) * v;
    diag.emplace_back(v, q);
  }

  const long long c = smallest_nonresidue(k.p);
  RingElement cre = re_from_int(k, c);
  std::vector<Matrix> ones, cs;
  for (auto& [v, q] : diag) {
    if (auto r = sqrt_unit(q)) {
      ones.push_back(re_inv(*r) * v);
    } else {
      auto r2 = sqrt_unit(q * re_inv(cre));
      require(r2.has_value(), "InternalInvariant", "square-class trichotomy");
      cs.push_back(re_inv(*r2) * v);
    }
  }
  // Merge pairs of c-entries into ones: find x, y with c (x^2 + y^2) = 1.
  while (cs.size() >= 2) {
    Matrix vi = cs[cs.size() - 2], vj = cs[cs.size() - 1];
    cs.pop_back();
    cs.pop_back();
    long long x = 0, y = -1;
    const long long cinv = mod_inv(c, k.p);
    for (x = 0; x < k.p; ++x) {
      const long long target = ((cinv - x * x) % k.p + k.p) % k.p;
      if (target == 0) {
        y = 0;
        break;
      }
      if (auto ry = sqrt_unit(re_from_int(k, target))) {
        y = ry->c[0];
        break;
      }
    }
    require(y >= 0, "InternalInvariant", "binary form universality");
    RingElement xe = re_from_int(k, x), ye = re_from_int(k, y);
    ones.push_back(xe * vi + ye * vj);
    ones.push_back(ye * vi - xe * vj);
  }
  int slot = 0;
  for (auto& v : ones) set_col(slot++, v);
  if (!cs.empty()) {
    set_col(slot++, cs[0]);
    out.nonsquare = 1;
  }
  return out;
}

Matrix canonical_gram_for(const CanonicalBasis& cb, const Matrix& J, int eps) {
  const RingSpec& k = J.spec;
  const int m = J.rows;
  if (eps == -1) return standard_gram(-1, m, k);
  Matrix D = Matrix::identity(k, m);
  if (cb.nonsquare)
    D.at(m - 1, m - 1) = re_from_int(k, smallest_nonresidue(k.p));
  return D;
}

}  // namespace

std::optional<Matrix> congruence_transform(const Matrix& J1, const Matrix& J2) {
  require(J1.spec == J2.spec && J1.rows == J2.rows && J1.is_square() &&
              J2.is_square(),
          "BadShape", "congruence needs equal-size forms over one ring");
  const RingSpec& ring = J1.spec;
  require(!ring.is_rational(), "BadRingSpec",
          "congruence transport works over the p-rings");
  int eps;
  if (transpose(J1) == J1 && transpose(J2) == J2)
    eps = 1;
  else if (transpose(J1) == -J1 && transpose(J2) == -J2)
    eps = -1;
  else
    throw error("NotEpsilonSymmetric",
                "forms must share a definite symmetry type");

  const RingSpec k = ring.residue_field();
  Matrix J1k = residue_matrix(J1, k), J2k = residue_matrix(J2, k);
  CanonicalBasis t1 = reduce_to_canonical(J1k, eps);
  CanonicalBasis t2 = reduce_to_canonical(J2k, eps);
  if (eps == 1 && t1.nonsquare != t2.nonsquare) return std::nullopt;
  assert(canonical_gram_for(t1, J1k, eps) == canonical_gram_for(t2, J2k, eps));
  Matrix Ck = t1.T * mat_inv(t2.T);

  if (ring.is_field()) {
    require(transpose(Ck) * J1 * Ck == J2, "InternalInvariant",
            "field-level congruence failed");
    return Ck;
  }

  // Newton refinement: with S = C^t J1 C and defect E = S - J2 (which lies
  // in the maximal ideal), H = -1/2 S^{-1} E satisfies H^t S + S H = -E, so
  // C(1 + H) squares the defect ideal each pass.
  Matrix C = lift_matrix(Ck, ring);
  RingElement half = re_inv(re_from_int(ring, 2));
  const int max_passes = 2 * (ring.a + ring.n) + 4;
  for (int pass = 0; pass < max_passes; ++pass) {
    Matrix S = transpose(C) * J1 * C;
    Matrix E = S - J2;
    if (E.is_zero()) return C;
    Matrix H = -half * (mat_inv(S) * E);
    C = C * (Matrix::identity(ring, J1.rows) + H);
  }
  throw error("InternalInvariant", "congruence Newton lift did not converge");
}

}  // namespace orbits
}  // namespace tq

#pragma once
#include "groebner.hpp"

namespace charsym::homalg {

using groebner::GBasis;
using groebner::MonoOrder;
using groebner::PolyFp;
using groebner::VecFp;

/* matrix of a module map P^a -> P^b: a columns, each a vector of length b */
using MatFp = std::vector<VecFp>;

namespace detail {

inline std::vector<std::vector<int>> subsets(int d, int j) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (int(cur.size()) == j) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v < d; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline MatFp transpose(const MatFp& cols, int target_rank, u64 p, int nv) {
  int a = int(cols.size());
  MatFp out(target_rank, VecFp(a, PolyFp::zero(p, nv)));
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < target_rank; ++j) out[j][i] = cols[i][j];
  return out;
}

inline VecFp apply(const MatFp& cols, const VecFp& v, int target_rank, u64 p, int nv) {
  VecFp out(target_rank, PolyFp::zero(p, nv));
  for (size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < target_rank; ++i)
      out[i] = groebner::fp_add(out[i], groebner::fp_mul(v[j], cols[j][i]));
  return out;
}

}  // namespace detail

struct KoszulComplex {
  std::vector<PolyFp> seq;
  u64 p = 0;
  int nvars = 0;
  std::vector<int> ranks;  // ranks[j] = binomial(d, j), j = 0..d
  std::vector<MatFp> diff;  // diff[j]: K_(j+1) -> K_j, j = 0..d-1
};

inline KoszulComplex koszul(const std::vector<PolyFp>& f) {
  int d = int(f.size());
  if (d < 1 || d > 3) throw PreconditionError("koszul: sequence length must be 1..3");
  u64 p = f[0].p;
  int nv = f[0].nvars;
  for (const auto& g : f) {
    groebner::check_ctx(g, f[0]);
    if (g.is_zero()) throw PreconditionError("koszul: zero entry in the sequence");
  }
  KoszulComplex K{f, p, nv, {}, {}};
  std::vector<std::vector<std::vector<int>>> bases;
  for (int j = 0; j <= d; ++j) bases.push_back(detail::subsets(d, j));
  for (int j = 0; j <= d; ++j) K.ranks.push_back(int(bases[j].size()));
  for (int j = 0; j < d; ++j) {
    const auto& src = bases[j + 1];
    const auto& dst = bases[j];
    auto index_of = [&](const std::vector<int>& s) {
      for (size_t k = 0; k < dst.size(); ++k)
        if (dst[k] == s) return int(k);
      throw std::logic_error("koszul: missing exterior basis element");
    };
    MatFp m;
    for (const auto& S : src) {
      VecFp col(dst.size(), PolyFp::zero(p, nv));
      for (size_t pos = 0; pos < S.size(); ++pos) {
        std::vector<int> T = S;
        T.erase(T.begin() + pos);
        PolyFp entry = pos % 2 ? groebner::fp_neg(f[S[pos]]) : f[S[pos]];
        col[index_of(T)] = groebner::fp_add(col[index_of(T)], entry);
      }
      m.push_back(std::move(col));
    }
    K.diff.push_back(std::move(m));
  }
  // d compose d = 0
  for (int j = 0; j + 1 < d; ++j)
    for (const auto& col : K.diff[j + 1]) {
      VecFp img = detail::apply(K.diff[j], col, K.ranks[j], p, nv);
      if (!groebner::vec_is_zero(img)) throw std::logic_error("koszul: differentials do not compose to zero");
    }
  return K;
}

/* module presented as P^rank / <rel> */
struct PresentedModule {
  int rank = 0;
  std::vector<VecFp> rel;
};

namespace detail {

/* cohomology ker(delta[i]) / im(delta[i-1]) of a complex of free modules,
   delta[i]: P^(ranks[i]) -> P^(ranks[i+1]); presented over kernel generators */
struct Cohomology {
  PresentedModule pres;
  i64 dim = 0;
};

inline Cohomology complex_cohomology(const std::vector<MatFp>& delta,
                                     const std::vector<int>& ranks, int i, u64 p, int nv,
                                     MonoOrder ord) {
  int L = int(delta.size());
  if (ranks[i] == 0) return {{0, {}}, 0};
  std::vector<VecFp> ker;
  if (i == L || ranks[i + 1] == 0) {
    for (int k = 0; k < ranks[i]; ++k) {
      VecFp e(ranks[i], PolyFp::zero(p, nv));
      e[k] = PolyFp::constant(p, nv, 1);
      ker.push_back(std::move(e));
    }
  } else {
    ker = groebner::syzygies_of(delta[i], ranks[i + 1], ord, p, nv);
  }
  if (ker.empty()) return {{0, {}}, 0};
  int k = int(ker.size());
  groebner::ModuleBasis engine(ker, ord, p, nv, ranks[i]);
  std::vector<VecFp> rel = groebner::syzygies_of(ker, ranks[i], ord, p, nv);
  for (auto& r : rel)
    r.resize(k, PolyFp::zero(p, nv));
  if (i > 0)
    for (const auto& col : delta[i - 1]) {
      if (groebner::vec_is_zero(col)) continue;
      VecFp lift;
      if (!engine.contains(col, &lift))
        throw std::logic_error("complex_cohomology: image escapes the kernel");
      rel.push_back(std::move(lift));
    }
  auto dim = groebner::module_quotient_dim(rel, k, ord, p, nv);
  if (!dim) throw NotFinite("cohomology has infinite dimension over F_p");
  return {{k, std::move(rel)}, *dim};
}

/* smallest number of generators = dim of M/mM */
inline i64 minimal_generators(const PresentedModule& M, u64 p, int nv, MonoOrder ord) {
  if (M.rank == 0) return 0;
  std::vector<VecFp> rel = M.rel;
  for (int c = 0; c < M.rank; ++c)
    for (int v = 0; v < nv; ++v) {
      VecFp row(M.rank, PolyFp::zero(p, nv));
      row[c] = PolyFp::variable(p, nv, v);
      rel.push_back(std::move(row));
    }
  auto dim = groebner::module_quotient_dim(rel, M.rank, ord, p, nv);
  if (!dim) throw std::logic_error("minimal_generators: artinian reduction not finite");
  return *dim;
}

/* for a cyclic presentation P^1/<rel>, test ann = (f) by two-sided membership */
inline bool ann_equals_ideal(const PresentedModule& M, const std::vector<PolyFp>& f,
                             MonoOrder ord) {
  if (M.rank != 1) return false;
  std::vector<PolyFp> J;
  for (const auto& r : M.rel)
    if (!r[0].is_zero()) J.push_back(r[0]);
  if (J.empty()) return false;
  GBasis gbJ = groebner::buchberger(J, ord);
  GBasis gbF = groebner::buchberger(f, ord);
  for (const auto& g : f)
    if (!groebner::normal_form(g, gbJ).is_zero()) return false;
  for (const auto& g : J)
    if (!groebner::normal_form(g, gbF).is_zero()) return false;
  return true;
}

}  // namespace detail

struct ExtReport {
  std::vector<i64> dims;  // Ext^i(P/(f), P) dimensions, i = 0..d
  bool cyclic = false;
  bool annihilator_match = false;
};

/* Ext via the dual Koszul complex; supported exactly where finiteness
   certifies regularity, i.e. sequence length equal to the variable count */
inline ExtReport ext_dims(const std::vector<PolyFp>& f, MonoOrder ord = MonoOrder::grevlex) {
  int d = int(f.size());
  u64 p = f.empty() ? 0 : f[0].p;
  int nv = f.empty() ? 0 : f[0].nvars;
  if (d != nv)
    throw PreconditionError("ext_dims: sequence length must equal the variable count");
  auto qd = groebner::quotient_dim(groebner::buchberger(f, ord));
  if (!qd) throw NotFinite("ext_dims: quotient is not finite-dimensional");
  KoszulComplex K = koszul(f);
  std::vector<MatFp> delta;
  for (int i = 0; i < d; ++i) delta.push_back(detail::transpose(K.diff[i], K.ranks[i], p, nv));
  std::vector<int> dranks = K.ranks;
  ExtReport rep;
  detail::Cohomology top;
  for (int i = 0; i <= d; ++i) {
    auto coh = detail::complex_cohomology(delta, dranks, i, p, nv, ord);
    rep.dims.push_back(coh.dim);
    if (i == d) top = std::move(coh);
  }
  rep.cyclic = detail::minimal_generators(top.pres, p, nv, ord) <= 1;
  rep.annihilator_match = rep.cyclic && rep.dims[d] == *qd &&
                          detail::ann_equals_ideal(top.pres, f, ord);
  return rep;
}

/* dimension-level biduality: Ext^d applied twice returns the original
   dimension and annihilator; the second pass runs over a free resolution of
   the presented Ext^d module rather than the Koszul complex */
inline bool biduality_check(const std::vector<PolyFp>& f, MonoOrder ord = MonoOrder::grevlex) {
  int d = int(f.size());
  u64 p = f.empty() ? 0 : f[0].p;
  int nv = f.empty() ? 0 : f[0].nvars;
  if (d != nv)
    throw PreconditionError("biduality_check: sequence length must equal the variable count");
  auto qd = groebner::quotient_dim(groebner::buchberger(f, ord));
  if (!qd) throw NotFinite("biduality_check: quotient is not finite-dimensional");

  // first pass: Ext^d of P/(f) from the dual Koszul complex
  KoszulComplex K = koszul(f);
  std::vector<MatFp> delta;
  for (int i = 0; i < d; ++i) delta.push_back(detail::transpose(K.diff[i], K.ranks[i], p, nv));
  auto first = detail::complex_cohomology(delta, K.ranks, d, p, nv, ord);

  // free resolution of the presented module, then its dual complex
  PresentedModule M = first.pres;
  if (M.rank == 0) return *qd == 0;
  std::vector<MatFp> phi;   // phi[s]: P^(r_(s+1)) -> P^(r_s)
  std::vector<int> ranks = {M.rank};
  std::vector<VecFp> cur = M.rel;
  for (int s = 0; s <= d; ++s) {
    phi.push_back(cur);
    ranks.push_back(int(cur.size()));
    if (cur.empty()) {
      while (int(phi.size()) <= d) {
        phi.push_back({});
        ranks.push_back(0);
      }
      break;
    }
    cur = groebner::syzygies_of(cur, ranks[s], ord, p, nv);
    for (auto& v : cur) v.resize(ranks[s + 1], PolyFp::zero(p, nv));
  }
  std::vector<MatFp> ddual;
  for (int s = 0; s <= d; ++s) ddual.push_back(detail::transpose(phi[s], ranks[s], p, nv));
  auto second = detail::complex_cohomology(ddual, ranks, d, p, nv, ord);

  bool cyclic = detail::minimal_generators(second.pres, p, nv, ord) <= 1;
  return second.dim == *qd && cyclic &&
         detail::ann_equals_ideal(second.pres, f, ord);
}

}  // namespace charsym::homalg

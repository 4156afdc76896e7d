#pragma once
#include <array>
#include <cctype>
#include <map>
#include <string>

#include "padic.hpp"

namespace charsym::series {

using padic::PadicElement;
using padic::PadicRing;
using padic::RingPtr;

/* Truncated power series over a PadicRing: elements of O[[t1..tr]] modulo
   (p^N, total degree D). r <= 3. Storage is dense over the graded monomial
   list so that arithmetic stays branch-free and deterministic. */

class SeriesRing;
using SRingPtr = std::shared_ptr<const SeriesRing>;

class SeriesRing : public std::enable_shared_from_this<SeriesRing> {
 public:
  const RingPtr base;
  const int r;
  const int D;

  static SRingPtr make(RingPtr base, int r, int D) {
    return std::shared_ptr<const SeriesRing>(new SeriesRing(std::move(base), r, D));
  }
  bool same(const SeriesRing& o) const {
    return r == o.r && D == o.D && base->same(*o.base);
  }

  using Exp = std::array<int, 3>;  // exponents, unused slots zero

  int count() const { return int(monos_.size()); }
  const Exp& exponent(int idx) const { return monos_[idx]; }
  int index(const Exp& e) const {
    auto it = lookup_.find(e);
    return it == lookup_.end() ? -1 : it->second;
  }

 private:
  SeriesRing(RingPtr b, int r_, int D_) : base(std::move(b)), r(r_), D(D_) {
    if (r < 1 || r > 3) throw PreconditionError("series ring needs 1 <= r <= 3");
    if (D < 1) throw PreconditionError("truncation degree must be >= 1");
    // graded enumeration: by total degree, then lexicographic on exponents
    for (int d = 0; d < D; ++d) {
      Exp e{0, 0, 0};
      enumerate(d, 0, e);
    }
    for (int i = 0; i < int(monos_.size()); ++i) lookup_[monos_[i]] = i;
  }
  void enumerate(int remaining, int pos, Exp& e) {
    if (pos == r - 1) {
      e[pos] = remaining;
      monos_.push_back(e);
      e[pos] = 0;
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[pos] = k;
      enumerate(remaining - k, pos + 1, e);
    }
    e[pos] = 0;
  }
  std::vector<Exp> monos_;
  std::map<Exp, int> lookup_;
};

class TruncatedSeries {
 public:
  SRingPtr ring;
  std::vector<PadicElement> a;  // indexed by ring monomial rank

  TruncatedSeries() = default;
  explicit TruncatedSeries(SRingPtr r) : ring(std::move(r)) {
    a.assign(ring->count(), PadicElement::zero(ring->base));
  }

  static TruncatedSeries constant(SRingPtr r, PadicElement c) {
    TruncatedSeries s(std::move(r));
    s.a[0] = std::move(c);
    return s;
  }
  static TruncatedSeries constant(SRingPtr r, i64 c) {
    auto base = r->base;
    return constant(std::move(r), PadicElement::from_int(base, c));
  }
  static TruncatedSeries variable(SRingPtr r, int i = 0) {
    TruncatedSeries s(r);
    SeriesRing::Exp e{0, 0, 0};
    e[i] = 1;
    s.a[r->index(e)] = PadicElement::one(r->base);
    return s;
  }
  /* univariate from low->high coefficient list */
  static TruncatedSeries from_coeffs(SRingPtr r, const std::vector<i64>& cs) {
    if (r->r != 1) throw PreconditionError("from_coeffs requires r = 1");
    if (int(cs.size()) > r->D) throw TruncationTooSmall("coefficient list exceeds truncation");
    TruncatedSeries s(r);
    for (size_t k = 0; k < cs.size(); ++k)
      s.a[k] = PadicElement::from_int(r->base, cs[k]);
    return s;
  }

  bool is_zero() const {
    for (const auto& x : a)
      if (!x.is_zero()) return false;
    return true;
  }
  bool operator==(const TruncatedSeries& o) const { return ring->same(*o.ring) && a == o.a; }

  /* univariate degree of the stored (truncated) representative; -1 for zero */
  int poly_degree() const {
    for (int k = int(a.size()) - 1; k >= 0; --k)
      if (!a[k].is_zero()) return k;
    return -1;
  }
};

inline void check_same_ring(const TruncatedSeries& f, const TruncatedSeries& g) {
  if (!f.ring->same(*g.ring)) throw RingMismatch("series from different rings");
}

inline TruncatedSeries add(const TruncatedSeries& f, const TruncatedSeries& g) {
  check_same_ring(f, g);
  TruncatedSeries h(f.ring);
  for (size_t i = 0; i < h.a.size(); ++i) h.a[i] = padic::add(f.a[i], g.a[i]);
  return h;
}

inline TruncatedSeries neg(const TruncatedSeries& f) {
  TruncatedSeries h(f.ring);
  for (size_t i = 0; i < h.a.size(); ++i) h.a[i] = padic::neg(f.a[i]);
  return h;
}

inline TruncatedSeries sub(const TruncatedSeries& f, const TruncatedSeries& g) {
  return add(f, neg(g));
}

inline TruncatedSeries mul(const TruncatedSeries& f, const TruncatedSeries& g) {
  check_same_ring(f, g);
  const auto& R = *f.ring;
  TruncatedSeries h(f.ring);
  for (int i = 0; i < R.count(); ++i) {
    if (f.a[i].is_zero()) continue;
    const auto& ei = R.exponent(i);
    int di = ei[0] + ei[1] + ei[2];
    for (int j = 0; j < R.count(); ++j) {
      if (g.a[j].is_zero()) continue;
      const auto& ej = R.exponent(j);
      if (di + ej[0] + ej[1] + ej[2] >= R.D) continue;
      SeriesRing::Exp e{ei[0] + ej[0], ei[1] + ej[1], ei[2] + ej[2]};
      int k = R.index(e);
      h.a[k] = padic::add(h.a[k], padic::mul(f.a[i], g.a[j]));
    }
  }
  return h;
}

inline TruncatedSeries mul_int(const TruncatedSeries& f, i64 s) {
  TruncatedSeries h(f.ring);
  auto c = PadicElement::from_int(f.ring->base, s);
  for (size_t i = 0; i < h.a.size(); ++i) h.a[i] = padic::mul(f.a[i], c);
  return h;
}

inline TruncatedSeries pow(TruncatedSeries f, u64 e) {
  TruncatedSeries r = TruncatedSeries::constant(f.ring, 1);
  while (e) {
    if (e & 1) r = mul(r, f);
    f = mul(f, f);
    e >>= 1;
  }
  return r;
}

/* substitute variable i by s (constant term of s must vanish) */
inline TruncatedSeries substitute(const TruncatedSeries& f, int i, const TruncatedSeries& s) {
  check_same_ring(f, s);
  if (!s.a[0].is_zero())
    throw PreconditionError("substitute: substituted series needs zero constant term");
  const auto& R = *f.ring;
  // split f by the exponent of t_i and run Horner in s
  int maxdeg = 0;
  for (int k = 0; k < R.count(); ++k)
    if (!f.a[k].is_zero()) maxdeg = std::max(maxdeg, R.exponent(k)[i]);
  TruncatedSeries acc(f.ring);
  for (int d = maxdeg; d >= 0; --d) {
    TruncatedSeries layer(f.ring);
    for (int k = 0; k < R.count(); ++k) {
      if (f.a[k].is_zero() || R.exponent(k)[i] != d) continue;
      auto e = R.exponent(k);
      e[i] = 0;
      layer.a[R.index(e)] = f.a[k];
    }
    acc = add(mul(acc, s), layer);
  }
  return acc;
}

/* group-inversion involution: t_j -> (1+t_j)^{-1} - 1 = -t_j + t_j^2 - ... */
inline TruncatedSeries iota(const TruncatedSeries& f) {
  if (f.ring->r > 2) throw PreconditionError("iota supports r <= 2");
  TruncatedSeries out = f;
  for (int j = 0; j < f.ring->r; ++j) {
    TruncatedSeries g(f.ring);
    SeriesRing::Exp e{0, 0, 0};
    for (int k = 1; k < f.ring->D; ++k) {
      e[j] = k;
      g.a[f.ring->index(e)] = PadicElement::from_int(f.ring->base, k % 2 ? -1 : 1);
    }
    out = substitute(out, j, g);
  }
  return out;
}

/* ---------- univariate polynomial layer (low->high, trimmed) ---------- */

using Poly = std::vector<PadicElement>;

inline Poly poly_trim(Poly f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
  return f;
}

inline int poly_deg(const Poly& f) { return int(f.size()) - 1; }

inline Poly poly_from_ints(RingPtr R, const std::vector<i64>& cs) {
  Poly f;
  f.reserve(cs.size());
  for (i64 c : cs) f.push_back(PadicElement::from_int(R, c));
  return poly_trim(std::move(f));
}

inline Poly poly_mul(const Poly& f, const Poly& g) {
  if (f.empty() || g.empty()) return {};
  Poly h(f.size() + g.size() - 1, PadicElement::zero(f[0].ring));
  for (size_t i = 0; i < f.size(); ++i)
    if (!f[i].is_zero())
      for (size_t j = 0; j < g.size(); ++j)
        h[i + j] = padic::add(h[i + j], padic::mul(f[i], g[j]));
  return poly_trim(std::move(h));
}

inline Poly poly_add(const Poly& f, const Poly& g) {
  RingPtr R = f.empty() ? (g.empty() ? nullptr : g[0].ring) : f[0].ring;
  if (!R) return {};
  Poly h(std::max(f.size(), g.size()), PadicElement::zero(R));
  for (size_t i = 0; i < f.size(); ++i) h[i] = padic::add(h[i], f[i]);
  for (size_t i = 0; i < g.size(); ++i) h[i] = padic::add(h[i], g[i]);
  return poly_trim(std::move(h));
}

inline Poly poly_neg(const Poly& f) {
  Poly h = f;
  for (auto& c : h) c = padic::neg(c);
  return h;
}

/* division by a monic divisor is exact over Z/p^N */
inline std::pair<Poly, Poly> poly_divmod(const Poly& f, const Poly& g) {
  if (g.empty() || !(g.back() == PadicElement::one(g.back().ring)))
    throw PreconditionError("poly_divmod: divisor must be monic");
  Poly r = f, q;
  int dg = poly_deg(g);
  if (poly_deg(r) >= dg) q.assign(poly_deg(r) - dg + 1, PadicElement::zero(g[0].ring));
  while (poly_deg(r) >= dg) {
    int k = poly_deg(r) - dg;
    PadicElement c = r.back();
    q[k] = c;
    for (int i = 0; i <= dg; ++i) r[k + i] = padic::sub(r[k + i], padic::mul(c, g[i]));
    r = poly_trim(std::move(r));
  }
  return {poly_trim(std::move(q)), std::move(r)};
}

inline PadicElement poly_eval(const Poly& f, const PadicElement& x) {
  PadicElement acc = PadicElement::zero(x.ring);
  for (int i = poly_deg(f); i >= 0; --i) acc = padic::add(padic::mul(acc, x), f[i]);
  return acc;
}

inline Poly poly_pow(Poly f, u64 e, RingPtr R) {
  Poly r = {PadicElement::one(R)};
  while (e) {
    if (e & 1) r = poly_mul(r, f);
    f = poly_mul(f, f);
    e >>= 1;
  }
  return r;
}

inline Poly series_to_poly(const TruncatedSeries& f) {
  if (f.ring->r != 1) throw PreconditionError("series_to_poly requires r = 1");
  Poly out(f.a.begin(), f.a.end());
  return poly_trim(std::move(out));
}

inline TruncatedSeries poly_to_series(SRingPtr R, const Poly& f) {
  if (poly_deg(f) >= R->D) throw TruncationTooSmall("polynomial degree exceeds truncation");
  TruncatedSeries s(R);
  for (size_t i = 0; i < f.size(); ++i) s.a[i] = PadicElement(R->base, f[i].c);
  return s;
}

/* ---------- precision changes ---------- */

inline RingPtr reduce_ring(const RingPtr& R, int new_prec) {
  if (new_prec == R->prec) return R;
  if (new_prec > R->prec || new_prec < 1)
    throw PrecisionExhausted("cannot reduce ring to requested precision");
  return PadicRing::make(R->p, new_prec, R->h);
}

inline PadicElement reduce_elem(const PadicElement& x, const RingPtr& R2) {
  std::vector<u64> c = x.c;
  for (auto& v : c) v %= R2->pn;
  return {R2, std::move(c)};
}

inline Poly reduce_poly(const Poly& f, const RingPtr& R2) {
  Poly out;
  out.reserve(f.size());
  for (const auto& c : f) out.push_back(reduce_elem(c, R2));
  return poly_trim(std::move(out));
}

inline TruncatedSeries reduce_series(const TruncatedSeries& f, const SRingPtr& S2) {
  TruncatedSeries out(S2);
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] = reduce_elem(f.a[i], S2->base);
  return out;
}

/* ---------- Weierstrass theory (r = 1) ---------- */

struct WeierstrassData {
  int mu = 0;
  Poly distinguished;       // monic, degree = lambda, over the reduced-precision ring
  TruncatedSeries unit;     // unit series over the reduced-precision ring
  SRingPtr ring;            // ring of the outputs (precision N - mu)
  int lambda() const { return poly_deg(distinguished); }
};

inline bool is_distinguished(const Poly& P) {
  if (P.empty() || !(P.back() == PadicElement::one(P.back().ring))) return false;
  for (int i = 0; i + 1 < int(P.size()); ++i) {
    auto v = padic::valuation(P[i]);
    if (v && *v == 0) return false;
  }
  return true;
}

/* f = p^mu * distinguished * unit  mod (p^(N-mu), t^D) */
inline WeierstrassData weierstrass_prepare(const TruncatedSeries& f) {
  if (f.ring->r != 1) throw PreconditionError("weierstrass_prepare requires r = 1");
  if (f.is_zero()) throw PrecisionExhausted("weierstrass_prepare: input vanishes mod (p^N, t^D)");
  const auto& R = *f.ring;
  int mu = R.base->prec;
  for (const auto& c : f.a) {
    auto v = padic::valuation(c);
    if (v) mu = std::min(mu, *v);
  }
  int neff = R.base->prec - mu;
  if (neff < 1) throw PrecisionExhausted("weierstrass_prepare: no precision left after p-part");
  RingPtr B2 = reduce_ring(R.base, neff);
  SRingPtr S2 = SeriesRing::make(B2, 1, R.D);
  // f0 = f / p^mu over the reduced ring
  TruncatedSeries f0(S2);
  for (int k = 0; k < R.D; ++k)
    f0.a[k] = reduce_elem(padic::divide_exact_p(f.a[k], mu), B2);
  int lambda = -1;
  for (int k = 0; k < R.D; ++k)
    if (padic::is_unit(f0.a[k])) { lambda = k; break; }
  if (lambda < 0)
    throw TruncationTooSmall("weierstrass_prepare: no unit coefficient below truncation");
  // split f0 = A + t^lambda * B with A below lambda (all coefficients p-divisible)
  TruncatedSeries A(S2), B(S2);
  for (int k = 0; k < lambda; ++k) A.a[k] = f0.a[k];
  for (int k = lambda; k < R.D; ++k) B.a[k - lambda] = f0.a[k];
  // solve B*z + tau(A*z) = 1 for z = unit^{-1}; contraction since A = 0 mod p
  auto series_head_inverse = [&](const TruncatedSeries& s) {
    // inverse of a unit series by Newton iteration
    TruncatedSeries z = TruncatedSeries::constant(S2, 0);
    z.a[0] = padic::invert(s.a[0]);
    TruncatedSeries two = TruncatedSeries::constant(S2, 2);
    for (int it = 0; it < R.D + 2; ++it) {
      TruncatedSeries nz = mul(z, sub(two, mul(s, z)));
      if (nz == z) break;
      z = nz;
    }
    return z;
  };
  auto tau = [&](const TruncatedSeries& s) {
    TruncatedSeries out(S2);
    for (int k = lambda; k < R.D; ++k) out.a[k - lambda] = s.a[k];
    return out;
  };
  TruncatedSeries Binv = series_head_inverse(B);
  TruncatedSeries z = Binv;
  for (int it = 0; it <= neff + 1; ++it) {
    TruncatedSeries nz = mul(Binv, sub(TruncatedSeries::constant(S2, 1), tau(mul(A, z))));
    if (nz == z) break;
    z = nz;
  }
  TruncatedSeries Pfull = mul(f0, z);
  Poly P(Pfull.a.begin(), Pfull.a.begin() + lambda);
  P.push_back(PadicElement::one(B2));
  for (int k = lambda + 1; k < R.D; ++k)
    if (!Pfull.a[k].is_zero())
      throw PrecisionExhausted("weierstrass_prepare: tail failed to vanish");
  WeierstrassData w;
  w.mu = mu;
  w.distinguished = poly_trim(std::move(P));
  w.unit = series_head_inverse(z);
  w.ring = S2;
  if (!is_distinguished(w.distinguished))
    throw PrecisionExhausted("weierstrass_prepare: output not distinguished");
  return w;
}

/* Weierstrass division f = q*P + r, deg r < deg P, P distinguished monic.
   Exact for truncated inputs: each correction strictly lowers the degree. */
inline std::pair<TruncatedSeries, Poly> weierstrass_divide(const TruncatedSeries& f,
                                                           const Poly& P) {
  if (f.ring->r != 1) throw PreconditionError("weierstrass_divide requires r = 1");
  if (!is_distinguished(P)) throw PreconditionError("weierstrass_divide: divisor not distinguished");
  int lam = poly_deg(P);
  const auto& R = *f.ring;
  if (lam == 0) {  // P = 1
    Poly r0;
    return {f, r0};
  }
  TruncatedSeries q(f.ring), rem = f;
  // low = t^lam - P (degree < lam, p-divisible coefficients)
  Poly low(P.size(), PadicElement::zero(R.base));
  for (int i = 0; i < lam; ++i) low[i] = padic::neg(P[i]);
  low = poly_trim(std::move(low));
  while (rem.poly_degree() >= lam) {
    TruncatedSeries s(f.ring);
    for (int k = lam; k < R.D; ++k) s.a[k - lam] = rem.a[k];
    q = add(q, s);
    // rem <- (rem mod t^lam) + s * (t^lam - P)
    TruncatedSeries head(f.ring);
    for (int k = 0; k < lam; ++k) head.a[k] = rem.a[k];
    rem = add(head, mul(s, poly_to_series(f.ring, low)));
  }
  Poly r(rem.a.begin(), rem.a.begin() + lam);
  return {q, poly_trim(std::move(r))};
}

/* multiplicity of pi in f: pi is either p (is_p) or a distinguished monic
   irreducible. n_pi(Lambda/(f)) in the notation of first Chern classes. */
inline int divides_p(const TruncatedSeries& f) {
  if (f.is_zero()) throw PrecisionExhausted("divides: input vanishes mod (p^N, t^D)");
  int mu = f.ring->base->prec;
  for (const auto& c : f.a) {
    auto v = padic::valuation(c);
    if (v) mu = std::min(mu, *v);
  }
  return mu;
}

inline int divides(const Poly& pi, const TruncatedSeries& f) {
  if (f.is_zero()) throw PrecisionExhausted("divides: input vanishes mod (p^N, t^D)");
  if (!is_distinguished(pi) || poly_deg(pi) < 1)
    throw PreconditionError("divides: pi must be p or a distinguished polynomial of degree >= 1");
  TruncatedSeries g = f;
  Poly pir = reduce_poly(pi, f.ring->base);
  int k = 0;
  while (k <= f.ring->D) {
    if (g.is_zero())
      throw PrecisionExhausted("divides: quotient vanishes mod (p^N, t^D), multiplicity uncertifiable");
    auto [q, r] = weierstrass_divide(g, pir);
    if (!r.empty()) return k;
    g = q;
    ++k;
  }
  throw PrecisionExhausted("divides: multiplicity exceeds truncation budget");
}

/* ---------- determinants and resultants over Z/p^N ---------- */

/* determinant by valuated elimination; only unit divisions are performed, so
   the result is exact mod p^N. Requires a base ring with f = 1. */
inline PadicElement det_padic(std::vector<std::vector<PadicElement>> m, const RingPtr& R) {
  int n = int(m.size());
  if (n == 0) return PadicElement::one(R);
  PadicElement unit_correction = PadicElement::one(R);
  bool negate = false;
  for (int k = 0; k < n; ++k) {
    int bi = -1, bj = -1, bv = R->prec;
    for (int i = k; i < n; ++i)
      for (int j = k; j < n; ++j) {
        auto v = padic::valuation(m[i][j]);
        if (v && *v < bv) { bv = *v; bi = i; bj = j; }
      }
    if (bi < 0) return PadicElement::zero(R);  // det = 0 mod p^N
    if (bi != k) { std::swap(m[bi], m[k]); negate = !negate; }
    if (bj != k) {
      for (int i = 0; i < n; ++i) std::swap(m[i][bj], m[i][k]);
      negate = !negate;
    }
    // pivot = p^bv * u; eliminate column k below using unit-scaled rows:
    // row_i <- u*row_i - (m[i][k]/p^bv)*row_k, correcting det by u^{-1}
    PadicElement piv = m[k][k];
    PadicElement u = padic::divide_exact_p(piv, bv);  // unit
    PadicElement uinv = padic::invert(u);
    for (int i = k + 1; i < n; ++i) {
      if (m[i][k].is_zero()) continue;
      PadicElement c = padic::divide_exact_p(m[i][k], bv);
      for (int j = k; j < n; ++j)
        m[i][j] = padic::sub(padic::mul(u, m[i][j]), padic::mul(c, m[k][j]));
      unit_correction = padic::mul(unit_correction, uinv);
    }
  }
  PadicElement det = unit_correction;
  for (int k = 0; k < n; ++k) det = padic::mul(det, m[k][k]);
  return negate ? padic::neg(det) : det;
}

/* Res(f, g) for monic f, via det of g evaluated at the companion matrix of f */
inline PadicElement resultant(const Poly& f, const Poly& g, const RingPtr& R) {
  if (R->f != 1) throw PreconditionError("resultant: base ring must be Z/p^N");
  if (f.empty() || !(f.back() == PadicElement::one(R)))
    throw PreconditionError("resultant: f must be monic");
  int m = poly_deg(f);
  if (m == 0) return PadicElement::one(R);
  if (g.empty()) return PadicElement::zero(R);
  auto zero = PadicElement::zero(R);
  std::vector<std::vector<PadicElement>> comp(m, std::vector<PadicElement>(m, zero));
  for (int i = 0; i + 1 < m; ++i) comp[i + 1][i] = PadicElement::one(R);
  for (int i = 0; i < m; ++i) comp[i][m - 1] = padic::neg(f[i]);
  // Horner: M = g(comp)
  std::vector<std::vector<PadicElement>> M(m, std::vector<PadicElement>(m, zero));
  for (int d = poly_deg(g); d >= 0; --d) {
    // M <- M * comp
    std::vector<std::vector<PadicElement>> T(m, std::vector<PadicElement>(m, zero));
    for (int i = 0; i < m; ++i)
      for (int l = 0; l < m; ++l)
        if (!M[i][l].is_zero())
          for (int j = 0; j < m; ++j)
            T[i][j] = padic::add(T[i][j], padic::mul(M[i][l], comp[l][j]));
    for (int i = 0; i < m; ++i) T[i][i] = padic::add(T[i][i], g[d]);
    M = std::move(T);
  }
  return det_padic(std::move(M), R);
}

/* ---------- text syntax ---------- */

/* grammar: expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
   factor := atom ('^' uint)?; atom := uint | var | '(' expr ')' | '-' atom;
   vars: t (alias t1), t1, t2, t3. */
class Parser {
 public:
  Parser(std::string text, SRingPtr ring) : s_(std::move(text)), ring_(std::move(ring)) {}

  TruncatedSeries parse() {
    auto v = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  std::string s_;
  size_t pos_ = 0;
  SRingPtr ring_;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }
  TruncatedSeries expr() {
    TruncatedSeries v = term();
    for (;;) {
      if (eat('+')) v = add(v, term());
      else if (eat('-')) v = sub(v, term());
      else return v;
    }
  }
  TruncatedSeries term() {
    TruncatedSeries v = factor();
    while (eat('*')) v = mul(v, factor());
    return v;
  }
  TruncatedSeries factor() {
    TruncatedSeries v = atom();
    if (eat('^')) {
      skip();
      u64 e = uint_lit();
      v = series::pow(v, e);
    }
    return v;
  }
  u64 uint_lit() {
    skip();
    if (pos_ >= s_.size() || !std::isdigit((unsigned char)s_[pos_])) fail("expected integer");
    u64 v = 0;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
      if (v > ((u64)1 << 58)) fail("integer literal too large");
      v = v * 10 + u64(s_[pos_] - '0');
      ++pos_;
    }
    return v;
  }
  TruncatedSeries atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (c == '-') {
      ++pos_;
      return neg(atom());
    }
    if (std::isdigit((unsigned char)c)) {
      // reduce long literals mod p^N while scanning
      u64 pn = ring_->base->pn;
      u64 v = 0;
      while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
        v = (mulmod(v, 10, pn) + u64(s_[pos_] - '0')) % pn;
        ++pos_;
      }
      return TruncatedSeries::constant(ring_, i64(v));
    }
    if (c == 't') {
      ++pos_;
      int idx = 0;
      if (pos_ < s_.size() && s_[pos_] >= '1' && s_[pos_] <= '3') {
        idx = s_[pos_] - '1';
        ++pos_;
      }
      if (idx >= ring_->r) fail("variable index exceeds ring dimension");
      return TruncatedSeries::variable(ring_, idx);
    }
    fail("unexpected character");
  }
};

inline TruncatedSeries parse_series(const std::string& text, SRingPtr ring) {
  return Parser(text, std::move(ring)).parse();
}

inline Poly parse_poly(const std::string& text, SRingPtr ring) {
  return series_to_poly(parse_series(text, std::move(ring)));
}

/* canonical polynomial label: descending powers, coefficients in [0, p^N) */
inline std::string poly_string(const Poly& f, const std::string& var = "t") {
  if (f.empty()) return "0";
  std::string out;
  for (int k = poly_deg(f); k >= 0; --k) {
    if (f[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    u64 c = f[k].c[0];
    if (k == 0) {
      out += std::to_string(c);
    } else {
      if (c != 1) out += std::to_string(c) + "*";
      out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out.empty() ? "0" : out;
}

inline std::string series_string(const TruncatedSeries& f) {
  const auto& R = *f.ring;
  if (f.is_zero()) return "0";
  std::string out;
  static const char* names[3] = {"t1", "t2", "t3"};
  for (int k = R.count() - 1; k >= 0; --k) {
    if (f.a[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    const auto& e = R.exponent(k);
    std::string mono;
    for (int j = 0; j < R.r; ++j) {
      if (!e[j]) continue;
      if (!mono.empty()) mono += "*";
      mono += (R.r == 1 ? "t" : names[j]);
      if (e[j] > 1) mono += "^" + std::to_string(e[j]);
    }
    u64 c = f.a[k].c[0];
    if (mono.empty()) out += std::to_string(c);
    else if (c == 1) out += mono;
    else out += std::to_string(c) + "*" + mono;
  }
  return out;
}

}  // namespace charsym::series

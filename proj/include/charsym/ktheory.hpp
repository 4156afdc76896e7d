#pragma once
#include <variant>

#include "cycles.hpp"

namespace charsym::ktheory {

using cycles::Cycle;
using cycles::Height1Prime;
using cycles::PrimeLabel;
using padic::PadicElement;
using padic::RingPtr;
using series::Poly;
using series::SRingPtr;
using series::TruncatedSeries;

/* fraction-field element of Frac(Z_p[[t]]), num/den both nonzero */
struct FracSeries {
  TruncatedSeries num, den;

  FracSeries(TruncatedSeries n, TruncatedSeries d) : num(std::move(n)), den(std::move(d)) {
    series::check_same_ring(num, den);
    if (num.is_zero() || den.is_zero())
      throw PreconditionError("fraction field element needs nonzero numerator and denominator");
  }
  explicit FracSeries(TruncatedSeries n)
      : FracSeries(n, TruncatedSeries::constant(n.ring, 1)) {}
};

struct SymbolFactor {
  FracSeries f, g;
  i64 e = 1;
};

/* formal product of Steinberg symbols {f, g}^e */
struct SymbolProduct {
  std::vector<SymbolFactor> factors;

  SymbolProduct& mul(FracSeries f, FracSeries g, i64 e = 1) {
    if (e) factors.push_back({std::move(f), std::move(g), e});
    return *this;
  }
  SymbolProduct& mul(TruncatedSeries f, TruncatedSeries g, i64 e = 1) {
    return mul(FracSeries(std::move(f)), FracSeries(std::move(g)), e);
  }
};

inline SymbolProduct symbol(TruncatedSeries f, TruncatedSeries g, i64 e = 1) {
  SymbolProduct s;
  s.mul(std::move(f), std::move(g), e);
  return s;
}

/* localization of Z_p[[t]] at a height-1 prime */
struct DvrDescriptor {
  SRingPtr ring;
  Height1Prime pi;
};

/* ---------- residue fields ----------
   k(P) = F_p((t)): value = t^ord * unit with unit[0] != 0, unit mod t^len.
   k(pi) = Frac(Z_p[t]/(pi)): polynomial residues with tracked denominator. */

struct LaurentFp {
  u64 p = 0;
  i64 ord = 0;
  std::vector<u64> unit;  // unit[0] != 0, length = series truncation
};

struct PolyFrac {
  Poly modulus;  // pi
  Poly num, den;  // reduced mod pi, both nonzero mod p^N
};

using ResidueElement = std::variant<LaurentFp, PolyFrac>;

namespace detail {

inline std::vector<u64> fp_mul(const std::vector<u64>& a, const std::vector<u64>& b, u64 p) {
  size_t n = a.size();
  std::vector<u64> c(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; i + j < n; ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  }
  return c;
}

inline std::vector<u64> fp_inv(const std::vector<u64>& a, u64 p) {
  if (!a[0]) throw PreconditionError("residue unit part must have nonzero constant term");
  std::vector<u64> b(a.size(), 0);
  u64 c0 = powmod(a[0], p - 2, p);
  b[0] = c0;
  for (size_t k = 1; k < a.size(); ++k) {
    u64 s = 0;
    for (size_t j = 1; j <= k; ++j) s = (s + a[j] * b[k - j]) % p;
    b[k] = (s ? p - s : 0) * c0 % p;
  }
  return b;
}

inline std::vector<u64> fp_pow(std::vector<u64> a, i64 e, u64 p) {
  if (e < 0) { a = fp_inv(a, p); e = -e; }
  std::vector<u64> r(a.size(), 0);
  r[0] = 1;
  u64 k = u64(e);
  while (k) {
    if (k & 1) r = fp_mul(r, a, p);
    a = fp_mul(a, a, p);
    k >>= 1;
  }
  return r;
}

inline Poly poly_mod(const Poly& f, const Poly& pi) {
  return series::poly_divmod(f, pi).second;
}

inline Poly poly_powmod(Poly b, i64 e, const Poly& pi, const RingPtr& R) {
  if (e < 0) throw std::logic_error("poly_powmod: negative exponent");
  Poly r = {PadicElement::one(R)};
  b = poly_mod(b, pi);
  u64 k = u64(e);
  while (k) {
    if (k & 1) r = poly_mod(series::poly_mul(r, b), pi);
    b = poly_mod(series::poly_mul(b, b), pi);
    k >>= 1;
  }
  return r;
}

/* valuation and residue of f at the prime: residue is taken after dividing
   out the uniformizer exactly v times */
struct Stripped {
  int v = 0;
  TruncatedSeries core;  // f / pi^v (P-case: over the same ring, exact data)
};

inline Stripped strip_at(const TruncatedSeries& f, const Height1Prime& pi) {
  if (f.is_zero()) throw PreconditionError("symbol entry is zero");
  if (pi.is_p) {
    int v = series::divides_p(f);
    TruncatedSeries core(f.ring);
    for (size_t k = 0; k < f.a.size(); ++k) core.a[k] = padic::divide_exact_p(f.a[k], v);
    return {v, std::move(core)};
  }
  int v = series::divides(pi.poly, f);
  TruncatedSeries core = f;
  for (int i = 0; i < v; ++i) core = series::weierstrass_divide(core, pi.poly).first;
  return {v, std::move(core)};
}

/* mod-p coefficient vector of the core, with its t-order */
inline std::pair<i64, std::vector<u64>> laurent_residue(const TruncatedSeries& core) {
  u64 p = core.ring->base->p;
  int D = core.ring->D;
  std::vector<u64> c(D, 0);
  for (int k = 0; k < D; ++k) c[k] = core.a[k].c[0] % p;
  int ord = 0;
  while (ord < D && !c[ord]) ++ord;
  if (ord == D) throw std::logic_error("laurent_residue: stripped core vanishes mod p");
  std::vector<u64> unit(D, 0);
  for (int k = ord; k < D; ++k) unit[k - ord] = c[k];
  return {ord, std::move(unit)};
}

inline Poly poly_residue(const TruncatedSeries& core, const Poly& pi) {
  Poly r = series::weierstrass_divide(core, pi).second;
  if (r.empty()) throw std::logic_error("poly_residue: stripped core divisible by pi");
  return r;
}

/* length of (Z_p[t]/(pi))/(x) for a nonzero residue x, via the resultant */
inline int residue_ord(const Poly& x, const Poly& pi, const RingPtr& R) {
  auto v = padic::valuation(series::resultant(pi, x, R));
  if (!v) throw PrecisionExhausted("residue order not certifiable at working precision");
  return *v;
}

}  // namespace detail

/* tame symbol: product over factors of
   [(-1)^(v(f)v(g)) f^(v(g)) / g^(v(f)) mod pi]^e in k(eta1) */
inline ResidueElement tame(const SymbolProduct& s, const DvrDescriptor& d) {
  const RingPtr& R = d.ring->base;
  int parity = 0;
  if (d.pi.is_p) {
    int D = d.ring->D;
    LaurentFp acc{R->p, 0, std::vector<u64>(D, 0)};
    acc.unit[0] = 1;
    for (const auto& fac : s.factors) {
      auto fn = detail::strip_at(fac.f.num, d.pi), fd = detail::strip_at(fac.f.den, d.pi);
      auto gn = detail::strip_at(fac.g.num, d.pi), gd = detail::strip_at(fac.g.den, d.pi);
      i64 vf = fn.v - fd.v, vg = gn.v - gd.v;
      parity ^= int((vf * vg * fac.e) & 1);
      auto [of_n, uf_n] = detail::laurent_residue(fn.core);
      auto [of_d, uf_d] = detail::laurent_residue(fd.core);
      auto [og_n, ug_n] = detail::laurent_residue(gn.core);
      auto [og_d, ug_d] = detail::laurent_residue(gd.core);
      acc.ord += fac.e * (vg * (of_n - of_d) - vf * (og_n - og_d));
      auto mulin = [&](const std::vector<u64>& u, i64 e) {
        if (e) acc.unit = detail::fp_mul(acc.unit, detail::fp_pow(u, e, R->p), R->p);
      };
      mulin(uf_n, fac.e * vg);
      mulin(uf_d, -fac.e * vg);
      mulin(ug_n, -fac.e * vf);
      mulin(ug_d, fac.e * vf);
    }
    if (parity) {
      std::vector<u64> m1(d.ring->D, 0);
      m1[0] = R->p - 1;
      acc.unit = detail::fp_mul(acc.unit, m1, R->p);
    }
    return acc;
  }
  const Poly& pi = d.pi.poly;
  PolyFrac acc{pi, {PadicElement::one(R)}, {PadicElement::one(R)}};
  for (const auto& fac : s.factors) {
    auto fn = detail::strip_at(fac.f.num, d.pi), fd = detail::strip_at(fac.f.den, d.pi);
    auto gn = detail::strip_at(fac.g.num, d.pi), gd = detail::strip_at(fac.g.den, d.pi);
    i64 vf = fn.v - fd.v, vg = gn.v - gd.v;
    parity ^= int((vf * vg * fac.e) & 1);
    auto mulin = [&](const TruncatedSeries& core, i64 e) {
      if (!e) return;
      Poly r = detail::poly_residue(core, pi);
      Poly pw = detail::poly_powmod(r, e < 0 ? -e : e, pi, R);
      auto& side = e > 0 ? acc.num : acc.den;
      side = detail::poly_mod(series::poly_mul(side, pw), pi);
    };
    mulin(fn.core, fac.e * vg);
    mulin(fd.core, -fac.e * vg);
    mulin(gn.core, -fac.e * vf);
    mulin(gd.core, fac.e * vf);
  }
  if (parity) acc.num = series::poly_neg(acc.num);
  if (acc.num.empty() || acc.den.empty())
    throw PrecisionExhausted("tame: residue product vanishes mod p^N");
  return acc;
}

/* Parshin chain ((0), eta1, eta2); only the maximal eta2 = (P, t) nests our
   height-1 labels */
struct Chain {
  Height1Prime eta1;
  PrimeLabel eta2 = cycles::maximal_label();
};

/* ord at eta2 of the tame residue, summed factorwise (length is additive) */
inline i64 nu_chain(const SymbolProduct& s, const Chain& chain, const SRingPtr& ring) {
  if (chain.eta2 != cycles::maximal_label())
    throw ChainNotNested("nu_chain: eta2 must be the maximal prime (P, t)");
  const RingPtr& R = ring->base;
  i64 total = 0;
  for (const auto& fac : s.factors) {
    auto fn = detail::strip_at(fac.f.num, chain.eta1), fd = detail::strip_at(fac.f.den, chain.eta1);
    auto gn = detail::strip_at(fac.g.num, chain.eta1), gd = detail::strip_at(fac.g.den, chain.eta1);
    i64 vf = fn.v - fd.v, vg = gn.v - gd.v;
    auto ord1 = [&](const detail::Stripped& st) -> i64 {
      if (chain.eta1.is_p) return detail::laurent_residue(st.core).first;
      return detail::residue_ord(detail::poly_residue(st.core, chain.eta1.poly),
                                 chain.eta1.poly, R);
    };
    total += fac.e * (vg * (ord1(fn) - ord1(fd)) - vf * (ord1(gn) - ord1(gd)));
  }
  return total;
}

/* finitely supported family of K2 classes over height-1 primes */
struct RestrictedProductElement {
  struct Component {
    Height1Prime pi;
    SymbolProduct sym;
  };
  std::vector<Component> components;

  void set(Height1Prime pi, SymbolProduct s) {
    for (auto& c : components)
      if (c.pi.label() == pi.label()) { c.sym = std::move(s); return; }
    components.push_back({std::move(pi), std::move(s)});
  }
};

inline Cycle nu2(const RestrictedProductElement& a, const std::vector<PrimeLabel>& primes2,
                 const SRingPtr& ring) {
  Cycle out;
  for (const auto& y : primes2) {
    if (y != cycles::maximal_label())
      throw ChainNotNested("nu2: unsupported codimension-2 label");
    i64 m = 0;
    for (const auto& comp : a.components) m += nu_chain(comp.sym, {comp.pi, y}, ring);
    out.add(y, m);
  }
  return out;
}

/* characteristic symbol of a height-2 pair of prime elements:
   component {f1, f2}^(-1) at (f1), trivial elsewhere */
inline RestrictedProductElement char_symbol(const TruncatedSeries& f1,
                                            const TruncatedSeries& f2) {
  series::check_same_ring(f1, f2);
  auto w1 = series::weierstrass_prepare(f1);
  auto w2 = series::weierstrass_prepare(f2);
  if (w1.mu >= 2 || (w1.mu == 1 && w1.lambda() > 0))
    throw PreconditionError("char_symbol: f1 is certifiably composite");
  if (w1.mu == 0 && w1.lambda() == 0)
    throw PreconditionError("char_symbol: f1 is a unit");
  int neff = std::min(w1.ring->base->prec, w2.ring->base->prec);
  RingPtr R = series::reduce_ring(f1.ring->base, neff);
  if (w1.mu == w2.mu &&
      series::reduce_poly(w1.distinguished, R) == series::reduce_poly(w2.distinguished, R))
    throw UnitRatio("char_symbol: f1/f2 is a unit");
  Height1Prime pi = w1.mu == 1 ? Height1Prime::P() : Height1Prime::from_poly(w1.distinguished);
  RestrictedProductElement a;
  a.set(std::move(pi), symbol(f1, f2, -1));
  return a;
}

struct Prop29Report {
  Cycle lhs;        // nu2 of the characteristic symbol
  Cycle symmetric;  // nu2 of the symbol with the roles of f1, f2 swapped
  Cycle rhs;        // localized length from the cycle machinery
  bool equal = false;
};

inline Prop29Report verify_prop29(const TruncatedSeries& f1, const TruncatedSeries& f2,
                                  const std::vector<PrimeLabel>& primes2 = {
                                      cycles::maximal_label()}) {
  Prop29Report rep;
  rep.lhs = nu2(char_symbol(f1, f2), primes2, f1.ring);
  rep.symmetric = nu2(char_symbol(f2, f1), primes2, f1.ring);
  int len = cycles::c2_quotient(f1, f2);
  rep.rhs.add(cycles::maximal_label(), len);
  rep.equal = rep.lhs == rep.rhs && rep.symmetric == rep.rhs;
  return rep;
}

/* Gersten reciprocity: the divisors of the tame residues of {f, g} over a
   complete height-1 support sum to zero at (P, t) */
inline bool reciprocity_check(const TruncatedSeries& f, const TruncatedSeries& g,
                              const std::vector<Height1Prime>& primes1) {
  bool has_p = false;
  for (const auto& pi : primes1) has_p = has_p || pi.is_p;
  for (const TruncatedSeries* h : {&f, &g}) {
    auto w = series::weierstrass_prepare(*h);
    if (w.mu > 0 && !has_p)
      throw SupportIncomplete("reciprocity_check: p divides an input but (P) is not listed");
    int lam = 0;
    for (const auto& pi : primes1)
      if (!pi.is_p) lam += series::divides(pi.poly, *h) * series::poly_deg(pi.poly);
    if (lam != w.lambda())
      throw SupportIncomplete(
          "reciprocity_check: distinguished support of an input is not covered");
  }
  SymbolProduct s = symbol(f, g);
  i64 total = 0;
  for (const auto& pi : primes1) total += nu_chain(s, {pi, cycles::maximal_label()}, f.ring);
  return total == 0;
}

/* ---------- residue-element utilities (tests, CLI output) ---------- */

inline bool residue_is_one(const ResidueElement& x) {
  if (std::holds_alternative<LaurentFp>(x)) {
    const auto& l = std::get<LaurentFp>(x);
    if (l.ord != 0 || l.unit[0] != 1) return false;
    for (size_t k = 1; k < l.unit.size(); ++k)
      if (l.unit[k]) return false;
    return true;
  }
  const auto& pf = std::get<PolyFrac>(x);
  return series::poly_trim(series::poly_add(pf.num, series::poly_neg(pf.den))).empty();
}

/* num = c * den mod pi, for integer c */
inline bool residue_is_int(const ResidueElement& x, i64 c) {
  if (std::holds_alternative<LaurentFp>(x)) {
    const auto& l = std::get<LaurentFp>(x);
    i64 m = c % i64(l.p);
    if (m < 0) m += i64(l.p);
    if (!m) return false;
    if (l.ord != 0 || l.unit[0] != u64(m)) return false;
    for (size_t k = 1; k < l.unit.size(); ++k)
      if (l.unit[k]) return false;
    return true;
  }
  const auto& pf = std::get<PolyFrac>(x);
  if (pf.num.empty()) return false;
  const RingPtr& R = pf.num[0].ring;
  Poly scaled;
  for (const auto& v : pf.den) scaled.push_back(padic::mul(v, PadicElement::from_int(R, c)));
  return series::poly_trim(series::poly_add(pf.num, series::poly_neg(scaled))).empty();
}

inline ResidueElement residue_mul(const ResidueElement& x, const ResidueElement& y) {
  if (std::holds_alternative<LaurentFp>(x)) {
    const auto& a = std::get<LaurentFp>(x);
    const auto& b = std::get<LaurentFp>(y);
    if (a.p != b.p || a.unit.size() != b.unit.size())
      throw PreconditionError("residue_mul: mismatched residue fields");
    return LaurentFp{a.p, a.ord + b.ord, detail::fp_mul(a.unit, b.unit, a.p)};
  }
  const auto& a = std::get<PolyFrac>(x);
  const auto& b = std::get<PolyFrac>(y);
  PolyFrac out{a.modulus,
               detail::poly_mod(series::poly_mul(a.num, b.num), a.modulus),
               detail::poly_mod(series::poly_mul(a.den, b.den), a.modulus)};
  return out;
}

inline bool residue_eq(const ResidueElement& x, const ResidueElement& y) {
  if (std::holds_alternative<LaurentFp>(x) != std::holds_alternative<LaurentFp>(y)) return false;
  if (std::holds_alternative<LaurentFp>(x)) {
    const auto& a = std::get<LaurentFp>(x);
    const auto& b = std::get<LaurentFp>(y);
    return a.p == b.p && a.ord == b.ord && a.unit == b.unit;
  }
  // cross-multiplied equality in the fraction field
  const auto& a = std::get<PolyFrac>(x);
  const auto& b = std::get<PolyFrac>(y);
  Poly lhs = detail::poly_mod(series::poly_mul(a.num, b.den), a.modulus);
  Poly rhs = detail::poly_mod(series::poly_mul(b.num, a.den), a.modulus);
  return series::poly_trim(series::poly_add(lhs, series::poly_neg(rhs))).empty();
}

}  // namespace charsym::ktheory

#pragma once
#include <map>
#include <numeric>

#include "powerseries.hpp"

namespace charsym::lvalues {

namespace detail {

inline std::vector<std::pair<i64, int>> factorize(i64 n) {
  std::vector<std::pair<i64, int>> out;
  for (i64 q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      int e = 0;
      while (n % q == 0) n /= q, ++e;
      out.push_back({q, e});
    }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> out;
  for (i64 d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      if (d != n / d) out.push_back(n / d);
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool squarefree(i64 n) {
  for (auto [q, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

inline i64 powmod_i(i64 b, i64 e, i64 m) {
  return i64(powmod(u64(((b % m) + m) % m), u64(e), u64(m)));
}

inline i64 mul_order(i64 a, i64 m) {
  if (m == 1) return 1;
  if (std::gcd(a % m, m) != 1) throw PreconditionError("mul_order: not a unit");
  i64 phi = 1;
  for (auto [q, e] : factorize(m)) {
    phi *= q - 1;
    for (int i = 1; i < e; ++i) phi *= q;
  }
  i64 ord = phi;
  for (auto [q, e] : factorize(phi))
    while (ord % q == 0 && powmod_i(a, ord / q, m) == 1) ord /= q;
  return ord;
}

/* smallest primitive root modulo an odd prime power */
inline i64 primitive_root(i64 m) {
  i64 phi = 1;
  for (auto [q, e] : factorize(m)) {
    phi *= q - 1;
    for (int i = 1; i < e; ++i) phi *= q;
  }
  auto qs = factorize(phi);
  for (i64 g = 2; g < m; ++g) {
    if (std::gcd(g, m) != 1) continue;
    bool ok = true;
    for (auto [q, e] : qs)
      if (powmod_i(g, phi / q, m) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root");
}

}  // namespace detail

/* ---------- the unit group (Z/q)^x with discrete logarithms ---------- */

struct UnitGroup {
  i64 modulus;
  std::vector<std::pair<i64, i64>> gens;  // (generator, order), CRT-lifted
  std::vector<std::vector<int>> dlog;     // dlog[a]; empty and a!=1-class => nonunit

  explicit UnitGroup(i64 q) : modulus(q) {
    if (q < 1) throw PreconditionError("modulus must be >= 1");
    if (q > 2'000'000) throw PreconditionError("modulus too large for table-based characters");
    for (auto [l, a] : detail::factorize(q)) {
      i64 m = 1;
      for (int i = 0; i < a; ++i) m *= l;
      std::vector<std::pair<i64, i64>> local;
      if (l == 2) {
        if (a == 2) local = {{3, 2}};
        if (a >= 3) local = {{m - 1, 2}, {5, m / 4}};
      } else {
        i64 g = detail::primitive_root(m);
        local = {{g, (l - 1) * (m / l)}};
      }
      for (auto [g, d] : local) gens.push_back({crt_lift(q, m, g), d});
    }
    dlog.assign(size_t(q), {});
    std::vector<int> exps(gens.size(), 0);
    i64 count = 0;
    auto rec = [&](auto&& self, size_t i, i64 val) -> void {
      if (i == gens.size()) {
        dlog[size_t(val)] = exps;
        ++count;
        return;
      }
      i64 cur = val;
      for (i64 e = 0; e < gens[i].second; ++e) {
        exps[size_t(i)] = int(e);
        self(self, i + 1, cur);
        cur = cur * gens[i].first % modulus;
      }
      exps[size_t(i)] = 0;
    };
    rec(rec, 0, 1 % q);
    i64 phi = 1;
    for (auto [g, d] : gens) phi *= d;
    if (count != phi) throw std::logic_error("unit group enumeration mismatch");
  }

  bool is_unit(i64 a) const {
    a = ((a % modulus) + modulus) % modulus;
    return std::gcd(a, modulus) == 1;
  }

 private:
  static i64 crt_lift(i64 q, i64 m, i64 res) {
    i64 rest = q / m;
    i64 inv = detail::powmod_i(rest, detail::mul_order(rest, m) - 1, m);
    return (1 + rest * ((res - 1) * inv % m)) % q;
  }
};

/* ---------- Dirichlet characters with values zeta_M^e ---------- */

struct DirichletCharacter {
  i64 modulus = 1;
  i64 M = 1;                // value ring Z[zeta_M]
  std::vector<i64> table;   // exponent of zeta_M per residue; -1 marks nonunits

  /* chi(g_i) = zeta_{d_i}^{c_i} for the generators of G; requires d_i | M */
  static DirichletCharacter from_exponents(const UnitGroup& G, i64 M,
                                           const std::vector<i64>& cvec) {
    if (cvec.size() != G.gens.size())
      throw PreconditionError("one exponent per unit-group generator required");
    DirichletCharacter chi;
    chi.modulus = G.modulus;
    chi.M = M;
    chi.table.assign(size_t(G.modulus), -1);
    for (size_t i = 0; i < cvec.size(); ++i)
      if (M % G.gens[i].second != 0)
        throw PreconditionError("value ring does not contain the generator image");
    for (i64 a = 0; a < G.modulus; ++a) {
      if (!G.is_unit(a) && G.modulus > 1) continue;
      const auto& ex = G.dlog[size_t(a)];
      if (ex.empty() && !(a == 1 % G.modulus)) continue;
      i64 e = 0;
      for (size_t i = 0; i < cvec.size(); ++i) {
        i64 d = G.gens[i].second;
        e = (e + (M / d) % M * ((cvec[i] % d + d) % d) % M * (ex.empty() ? 0 : ex[i])) % M;
      }
      chi.table[size_t(a)] = e;
    }
    return chi;
  }

  /* exponent of zeta_M, or -1 when the argument shares a factor with the modulus */
  i64 operator()(i64 a) const {
    a = ((a % modulus) + modulus) % modulus;
    return table[size_t(a)];
  }

  i64 order() const {
    i64 g = M;
    for (i64 e : table)
      if (e > 0) g = std::gcd(g, e);
    return M / g;
  }

  bool odd() const {
    if (modulus <= 2) return false;
    i64 e = table[size_t(modulus - 1)];
    return e > 0 && (2 * e) % M == 0;
  }

  i64 conductor() const {
    for (i64 d : detail::divisors(modulus)) {
      bool ok = true;
      for (i64 a = 1; a < modulus && ok; ++a)
        if (table[size_t(a)] > 0 && a % d == 1 % d) ok = false;
      if (ok) return d;
    }
    return modulus;
  }

  DirichletCharacter primitive() const {
    i64 c = conductor();
    if (c == modulus) return *this;
    DirichletCharacter out;
    out.modulus = c;
    out.M = M;
    out.table.assign(size_t(c), -1);
    for (i64 a = 0; a < c; ++a) {
      if (std::gcd(a, c) != 1) continue;
      i64 b = a;
      while (std::gcd(b, modulus) != 1) b += c;
      out.table[size_t(a)] = table[size_t(b % modulus)];
    }
    return out;
  }

  DirichletCharacter mul(const DirichletCharacter& o, i64 Mtarget = 0) const {
    i64 q = std::lcm(modulus, o.modulus);
    i64 Mt = Mtarget ? Mtarget : std::lcm(M, o.M);
    if (Mt % M != 0 || Mt % o.M != 0)
      throw PreconditionError("product value ring must contain both factors");
    DirichletCharacter out;
    out.modulus = q;
    out.M = Mt;
    out.table.assign(size_t(q), -1);
    for (i64 a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1 && q > 1) continue;
      i64 e1 = table[size_t(a % modulus)], e2 = o.table[size_t(a % o.modulus)];
      if (e1 < 0 || e2 < 0) continue;
      out.table[size_t(a)] = ((Mt / M) * e1 + (Mt / o.M) * e2) % Mt;
    }
    return out;
  }

  DirichletCharacter inv() const { return power(-1); }

  DirichletCharacter power(i64 k) const {
    DirichletCharacter out = *this;
    for (auto& e : out.table)
      if (e >= 0) e = ((e * (k % M)) % M + M) % M;
    return out;
  }

  DirichletCharacter rescale(i64 Mnew) const {
    i64 o = order();
    if (Mnew % o != 0) throw PreconditionError("rescale: new value ring too small");
    DirichletCharacter out = *this;
    out.M = Mnew;
    for (auto& e : out.table)
      if (e > 0) e = (e * o / M) * (Mnew / o) % Mnew;
    return out;
  }

  /* canonical label data: value exponents at the canonical generators */
  std::vector<i64> generator_images(const UnitGroup& G) const {
    std::vector<i64> out;
    for (auto [g, d] : G.gens) out.push_back(table[size_t(g)]);
    return out;
  }
};

/* ---------- exact arithmetic in Z[zeta_M] ---------- */

inline std::vector<i64> cyclotomic_poly(i64 M) {
  // Phi_M = (x^M - 1) / prod_{d | M, d < M} Phi_d, exact monic division
  std::vector<i64> num(size_t(M) + 1, 0);
  num[0] = -1;
  num[size_t(M)] = 1;
  for (i64 d : detail::divisors(M)) {
    if (d == M) continue;
    std::vector<i64> g = cyclotomic_poly(d);
    std::vector<i64> q(num.size() - g.size() + 1, 0);
    for (i64 i = i64(q.size()) - 1; i >= 0; --i) {
      i64 c = num[size_t(i) + g.size() - 1];
      q[size_t(i)] = c;
      for (size_t j = 0; j < g.size(); ++j) num[size_t(i) + j] -= c * g[j];
    }
    if (!std::all_of(num.begin(), num.end(), [](i64 c) { return c == 0; }))
      throw std::logic_error("cyclotomic division not exact");
    num = std::move(q);
  }
  return num;
}

struct CycloRing {
  i64 M;
  std::vector<i64> phi;  // low -> high, monic
  int deg;

  explicit CycloRing(i64 M_) : M(M_), phi(cyclotomic_poly(M_)), deg(int(phi.size()) - 1) {}

  std::vector<i64> reduce(std::vector<i64> v) const {
    while (int(v.size()) > deg) {
      i64 c = v.back();
      v.pop_back();
      if (c)
        for (int j = 0; j < deg; ++j) v[v.size() - size_t(deg) + size_t(j)] -= c * phi[size_t(j)];
    }
    v.resize(size_t(deg), 0);
    return v;
  }
  std::vector<i64> zeta_pow(i64 e) const {
    e = ((e % M) + M) % M;
    std::vector<i64> v(size_t(e) + 1, 0);
    v[size_t(e)] = 1;
    return reduce(std::move(v));
  }
  std::vector<i64> mul(const std::vector<i64>& a, const std::vector<i64>& b) const {
    std::vector<i64> out(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i])
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return reduce(std::move(out));
  }
};

struct CycloElement {
  i64 M = 1;
  std::vector<i64> num;  // coordinates in the power basis of Z[zeta_M]
  i64 den = 1;

  CycloElement() = default;
  CycloElement(i64 M_, std::vector<i64> n, i64 d) : M(M_), num(std::move(n)), den(d) {
    if (den == 0) throw PreconditionError("zero denominator");
    if (den < 0) {
      den = -den;
      for (auto& c : num) c = -c;
    }
    i64 g = den;
    for (i64 c : num) g = std::gcd(g, c < 0 ? -c : c);
    if (is_zero()) {
      den = 1;
    } else if (g > 1) {
      den /= g;
      for (auto& c : num) c /= g;
    }
  }
  bool is_zero() const {
    return std::all_of(num.begin(), num.end(), [](i64 c) { return c == 0; });
  }
  bool operator==(const CycloElement& o) const {
    return M == o.M && num == o.num && den == o.den;
  }
  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < num.size(); ++i) os << (i ? "," : "") << num[i];
    os << "]/" << den;
    return os.str();
  }
};

/* ---------- character enumeration ---------- */

inline std::vector<DirichletCharacter> enumerate_characters(i64 modulus, i64 order,
                                                            bool exact) {
  if (modulus < 1) throw PreconditionError("modulus must be >= 1");
  if (order < 1) throw PreconditionError("order must be >= 1");
  UnitGroup G(modulus);
  i64 Mloc = 1;
  for (auto [g, d] : G.gens) Mloc = std::lcm(Mloc, d);
  std::vector<DirichletCharacter> out;
  std::vector<i64> cvec(G.gens.size(), 0);
  for (;;) {
    DirichletCharacter chi = DirichletCharacter::from_exponents(G, Mloc, cvec);
    i64 o = chi.order();
    if (exact ? o == order : order % o == 0) out.push_back(std::move(chi));
    size_t i = cvec.size();
    while (i > 0) {
      if (++cvec[i - 1] < G.gens[i - 1].second) break;
      cvec[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return out;
}

/* odd primitive characters of exact conductor and order, in enumeration order */
inline std::vector<DirichletCharacter> search_characters(i64 conductor, i64 order, i64 M) {
  std::vector<DirichletCharacter> out;
  for (const auto& chi : enumerate_characters(conductor, order, true))
    if (chi.conductor() == conductor && chi.odd()) out.push_back(chi.rescale(M));
  return out;
}

/* ---------- B_{1,chi} ---------- */

inline CycloElement bernoulli1(const DirichletCharacter& chi) {
  if (chi.order() == 1) throw TrivialCharacter("bernoulli1: character is trivial");
  CycloRing cy(chi.M);
  std::vector<i64> num(size_t(cy.deg), 0);
  for (i64 a = 1; a < chi.modulus; ++a) {
    i64 e = chi.table[size_t(a)];
    if (e < 0) continue;
    std::vector<i64> z = cy.zeta_pow(e);
    for (int j = 0; j < cy.deg; ++j) num[size_t(j)] += a * z[size_t(j)];
  }
  return CycloElement(chi.M, std::move(num), chi.modulus);
}

/* ---------- the chosen prime over p and p-adic valuations ---------- */

struct PrimePlace {
  i64 p = 0;
  i64 M = 1;
  int e = 1;                 // residue degree = order of p mod M
  std::vector<u64> h0;       // canonical irreducible factor of Phi_M mod p, low -> high
  padic::RingPtr W;          // Z/p^N unramified extension presented by h0
  padic::PadicElement rho;   // lifted root of Phi_M
  std::string label;
};

namespace detail {

/* first degree-e divisor of Phi_M mod p, ordering candidate coefficient
   tuples (c_{e-1}, ..., c_0) lexicographically over symmetric residues */
inline std::vector<u64> canonical_factor(i64 p, i64 M, int e) {
  using namespace charsym::series;
  auto R = padic::PadicRing::make(u64(p), 1);
  Poly phi = poly_from_ints(R, cyclotomic_poly(M));
  std::vector<i64> c(size_t(e), -(p - 1) / 2);  // c[0] = top coefficient
  for (;;) {
    std::vector<i64> cand(size_t(e) + 1, 1);
    for (int j = 0; j < e; ++j) cand[size_t(j)] = c[size_t(e - 1 - j)];
    auto [q, r] = poly_divmod(phi, poly_from_ints(R, cand));
    if (r.empty()) {
      std::vector<u64> out;
      for (i64 x : cand) out.push_back(u64(((x % p) + p) % p));
      return out;
    }
    int i = e - 1;
    while (i >= 0 && c[size_t(i)] == p / 2) c[size_t(i--)] = -(p - 1) / 2;
    if (i < 0) throw std::logic_error("cyclotomic polynomial had no factor of the right degree");
    ++c[size_t(i)];
  }
}

}  // namespace detail

inline PrimePlace make_place(i64 p, i64 M, int N) {
  if (p < 3 || !padic::PadicRing::is_prime(u64(p)))
    throw PreconditionError("p must be an odd prime");
  if (M < 1 || std::gcd(p, M) != 1)
    throw RamifiedConductor("value ring has p-th roots of unity; no unramified place");
  PrimePlace P;
  P.p = p;
  P.M = M;
  P.e = int(detail::mul_order(p % M, M));
  P.h0 = detail::canonical_factor(p, M, P.e);
  std::vector<u64> h(P.h0);
  P.W = padic::PadicRing::make(u64(p), N, std::move(h));
  // Newton-lift a root of Phi_M starting from the residue root carried by h0
  auto phi = cyclotomic_poly(M);
  std::vector<i64> dphi(phi.size() - 1);
  for (size_t i = 1; i < phi.size(); ++i) dphi[i - 1] = phi[i] * i64(i);
  auto eval = [&](const std::vector<i64>& cs, const padic::PadicElement& at) {
    auto acc = padic::PadicElement::zero(P.W);
    for (size_t i = cs.size(); i > 0; --i)
      acc = padic::add(padic::mul(acc, at), padic::PadicElement::from_int(P.W, cs[i - 1]));
    return acc;
  };
  padic::PadicElement rho =
      P.e == 1 ? padic::PadicElement::from_int(P.W, -i64(P.h0[0]))
               : padic::PadicElement(P.W, {0, 1});
  for (int it = 0; it < N + 2; ++it)
    rho = padic::sub(rho, padic::mul(eval(phi, rho), padic::invert(eval(dphi, rho))));
  if (padic::valuation(eval(phi, rho)))
    throw std::logic_error("root lift failed");
  P.rho = rho;
  std::ostringstream os;
  os << "(" << p << ", ";
  for (int i = P.e; i >= 0; --i) {
    u64 c = i == P.e ? 1 : P.h0[size_t(i)];
    if (c == 0) continue;
    if (i != P.e) os << " + ";
    if (c != 1 || i == 0) os << c;
    if (c != 1 && i > 0) os << "*";
    if (i > 1) os << "y^" << i;
    if (i == 1) os << "y";
  }
  os << ")";
  P.label = os.str();
  return P;
}

inline padic::PadicElement embed(const PrimePlace& P, const std::vector<i64>& num, i64 M_from) {
  if (P.M % M_from != 0) throw PreconditionError("value ring does not embed in the place");
  auto zr = padic::pow(P.rho, u64(P.M / M_from));
  auto acc = padic::PadicElement::zero(P.W);
  for (size_t i = num.size(); i > 0; --i)
    acc = padic::add(padic::mul(acc, zr), padic::PadicElement::from_int(P.W, num[i - 1]));
  return acc;
}

struct ValuationAtP {
  int val = 0;        // v_p(num) - v_p(den); v_p(num) clipped at precision
  bool saturated = false;  // numerator vanished mod p^N
};

inline ValuationAtP val_b(const PrimePlace& P, const CycloElement& x) {
  auto img = embed(P, x.num, x.M);
  auto vn = padic::valuation(img);
  int vnum = vn ? *vn : P.W->prec;
  int vden = 0;
  i64 d = x.den;
  while (d % P.p == 0) d /= P.p, ++vden;
  return {vnum - vden, !vn.has_value()};
}

/* residue of x in the residue field of the place; requires x integral at it */
inline std::vector<u64> residue_at(const PrimePlace& P, const CycloElement& x) {
  auto img = embed(P, x.num, x.M);
  int vden = 0;
  i64 d = x.den;
  while (d % P.p == 0) d /= P.p, ++vden;
  auto unit = padic::divide_exact_p(img, vden);  // PrecisionExhausted if not integral
  auto dinv = padic::invert(padic::PadicElement::from_int(P.W, d));
  auto red = padic::mul(unit, dinv);
  std::vector<u64> out(red.c);
  for (auto& c : out) c %= u64(P.p);
  return out;
}

/* the Teichmueller character mod p, valued in the place's value ring */
inline DirichletCharacter teich(const PrimePlace& P, i64* base = nullptr) {
  if (P.M % (P.p - 1) != 0)
    throw PreconditionError("value ring lacks the (p-1)-st roots of unity");
  auto rp = padic::pow(P.rho, u64(P.M / (P.p - 1)));
  for (size_t i = 1; i < rp.c.size(); ++i)
    if (rp.c[i] % u64(P.p) != 0) throw std::logic_error("teichmueller base escapes F_p");
  i64 r = i64(rp.c[0] % u64(P.p));
  if (base) *base = r;
  DirichletCharacter om;
  om.modulus = P.p;
  om.M = P.M;
  om.table.assign(size_t(P.p), -1);
  i64 cur = 1;
  for (i64 j = 0; j < P.p - 1; ++j) {
    om.table[size_t(cur)] = j * (P.M / (P.p - 1)) % P.M;
    cur = cur * r % P.p;
  }
  return om;
}

/* ---------- Kubota-Leopoldt value at s = 0 ---------- */

struct Lp0 {
  CycloElement value;
  bool divisible = false;
  bool exceptional = false;
  int valuation = 0;
  bool saturated = false;
  std::string prime;
};

inline Lp0 lp_at_zero(const DirichletCharacter& theta, i64 p, int N = 10) {
  DirichletCharacter th = theta.primitive();
  if (!th.odd()) throw EvenCharacter("lp_at_zero: character must be odd");
  PrimePlace P = make_place(p, th.M, N);
  CycloElement B = bernoulli1(th);
  CycloRing cy(th.M);
  i64 ep = std::gcd(p, th.modulus) == 1 ? th(p) : -1;  // -1: chi(p) = 0
  Lp0 out;
  out.exceptional = (ep == 0);
  std::vector<i64> euler(size_t(cy.deg), 0);  // 1 - theta(p)
  euler[0] = 1;
  if (ep >= 0) {
    auto z = cy.zeta_pow(ep);
    for (int j = 0; j < cy.deg; ++j) euler[size_t(j)] -= z[size_t(j)];
  }
  std::vector<i64> num = cy.mul(euler, B.num);
  for (auto& c : num) c = -c;
  out.value = CycloElement(th.M, std::move(num), B.den);
  auto v = val_b(P, out.value);
  out.valuation = v.val;
  out.saturated = v.saturated;
  out.divisible = v.val >= 1;
  out.prime = P.label;
  return out;
}

/* ---------- Kronecker symbol and quadratic characters ---------- */

namespace detail {

inline int kronecker_raw(i64 a, i64 n) {
  static const int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  if (!(a & 1) && !(n & 1)) return 0;
  int v = 0;
  while (!(n & 1)) ++v, n >>= 1;
  int k = (v & 1) ? tab2[((a % 8) + 8) & 7] : 1;
  if (n < 0) {
    n = -n;
    if (a < 0) k = -k;
  }
  for (;;) {
    a %= n;
    if (a < 0) a += n;
    if (a == 0) return n == 1 ? k : 0;
    v = 0;
    while (!(a & 1)) ++v, a >>= 1;
    if (v & 1) k *= tab2[n & 7];
    if (a & n & 2) k = -k;
    i64 t = n % a;
    n = a;
    a = t;
  }
}

}  // namespace detail

inline bool is_fundamental(i64 d) {
  if (d == 1) return true;
  i64 m = ((d % 4) + 4) % 4;
  if (m == 1) return detail::squarefree(d < 0 ? -d : d);
  if (m != 0) return false;
  i64 q = d / 4;
  i64 qm = ((q % 4) + 4) % 4;
  if (qm != 2 && qm != 3) return false;
  return detail::squarefree(q < 0 ? -q : q);
}

inline int kronecker(i64 d, i64 n) {
  if (!is_fundamental(d)) throw NotFundamental("kronecker: not a fundamental discriminant");
  return detail::kronecker_raw(d, n);
}

/* the quadratic character attached to a fundamental discriminant, mod |d| */
inline DirichletCharacter kronecker_char(i64 D) {
  if (!is_fundamental(D)) throw NotFundamental("not a fundamental discriminant");
  i64 q = D < 0 ? -D : D;
  DirichletCharacter chi;
  chi.modulus = q;
  chi.M = 2;
  chi.table.assign(size_t(q), -1);
  for (i64 a = 0; a < q; ++a) {
    int v = detail::kronecker_raw(D, a);
    if (v != 0) chi.table[size_t(a)] = v == 1 ? 0 : 1;
  }
  if (chi.conductor() != q) throw std::logic_error("kronecker character not primitive");
  return chi;
}

/* ---------- the divisibility search ---------- */

struct SearchHit {
  int psi_index = 0;
  std::vector<i64> psi_images;  // exponents of zeta_M at the canonical generators
  i64 kappa_disc = 0;
  int v1 = 0, v2 = 0;
  bool div1 = false, div2 = false, both_divisible = false;
  bool exc1 = false, exc2 = false;  // exceptional zeros of the two factors
};

struct SearchResult {
  i64 p = 0, conductor = 0, order = 0, M = 1;
  int e = 1;
  i64 teich_base = 0;
  std::string prime;
  int psi_count = 0;
  std::vector<SearchHit> hits;
};

inline SearchResult divisibility_search(i64 p, i64 conductor, i64 order,
                                        const std::vector<i64>& kappa_discs, int N = 10) {
  SearchResult res;
  res.p = p;
  res.conductor = conductor;
  res.order = order;
  res.M = std::lcm(std::lcm(order, p - 1), i64(2));
  for (i64 D : kappa_discs)
    if (D >= 0 || !is_fundamental(D))
      throw NotFundamental("kappa list must hold negative fundamental discriminants");
  PrimePlace P = make_place(p, res.M, N);
  res.e = P.e;
  res.prime = P.label;
  DirichletCharacter om = teich(P, &res.teich_base);
  UnitGroup G(conductor);
  auto psis = search_characters(conductor, order, res.M);
  res.psi_count = int(psis.size());
  DirichletCharacter omi = om.inv();
  for (int i = 0; i < int(psis.size()); ++i) {
    const auto& psi = psis[size_t(i)];
    DirichletCharacter th1 = psi.inv().primitive();
    auto v1 = val_b(P, bernoulli1(th1));
    bool exc1 = std::gcd(p, th1.modulus) == 1 && th1(p) == 0;
    for (i64 D : kappa_discs) {
      DirichletCharacter th2 =
          omi.mul(psi, res.M).mul(kronecker_char(D), res.M).primitive();
      if (!th2.odd()) throw std::logic_error("search factor lost oddness");
      auto v2 = val_b(P, bernoulli1(th2));
      bool exc2 = std::gcd(p, th2.modulus) == 1 && th2(p) == 0;
      bool div1 = v1.val >= 1, div2 = v2.val >= 1;
      if (!div1 && !div2) continue;
      SearchHit hit;
      hit.psi_index = i;
      hit.psi_images = psi.generator_images(G);
      hit.kappa_disc = D;
      hit.v1 = v1.val;
      hit.v2 = v2.val;
      hit.div1 = div1;
      hit.div2 = div2;
      hit.both_divisible = div1 && div2;
      hit.exc1 = exc1;
      hit.exc2 = exc2;
      res.hits.push_back(std::move(hit));
    }
  }
  return res;
}

/* ---------- classical Bernoulli numbers mod p (congruence oracle) ---------- */

inline std::vector<u64> bernoulli_mod_p(i64 p) {
  // B_0 .. B_{p-2} via sum_{j<=n} C(n+1,j) B_j = 0; all indices stay below p,
  // so the factorials involved are units mod p
  size_t n = size_t(p - 1);
  std::vector<u64> fact(n + 1, 1), ifact(n + 1, 1);
  for (size_t i = 1; i <= n; ++i) fact[i] = fact[i - 1] * (u64(i) % u64(p)) % u64(p);
  ifact[n] = powmod(fact[n], u64(p - 2), u64(p));
  for (size_t i = n; i > 0; --i) ifact[i - 1] = ifact[i] * (u64(i) % u64(p)) % u64(p);
  auto binom = [&](size_t a, size_t b) { return fact[a] * ifact[b] % u64(p) * ifact[a - b] % u64(p); };
  std::vector<u64> B(n, 0);
  B[0] = 1;
  for (size_t k = 1; k < n; ++k) {
    u64 s = 0;
    for (size_t j = 0; j < k; ++j) s = (s + binom(k + 1, j) * B[j]) % u64(p);
    u64 inv = powmod(u64(k + 1) % u64(p), u64(p - 2), u64(p));
    B[k] = (u64(p) - s) % u64(p) * inv % u64(p);
  }
  return B;
}

}  // namespace charsym::lvalues

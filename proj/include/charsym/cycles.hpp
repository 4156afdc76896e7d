#pragma once
#include "powerseries.hpp"

namespace charsym::cycles {

using padic::PadicElement;
using padic::PadicRing;
using padic::RingPtr;
using series::Poly;
using series::SRingPtr;
using series::TruncatedSeries;

/* Labeled prime of the ambient ring. codim-1 labels have one generator,
   codim-2 labels two. "P" denotes the prime (p). */
struct PrimeLabel {
  int codim = 1;
  std::vector<std::string> gens;

  static PrimeLabel height1(std::string g) { return {1, {std::move(g)}}; }
  static PrimeLabel height2(std::string g1, std::string g2) {
    return {2, {std::move(g1), std::move(g2)}};
  }
  auto operator<=>(const PrimeLabel&) const = default;

  std::string str() const {
    std::string out = "(";
    for (size_t i = 0; i < gens.size(); ++i) out += (i ? ", " : "") + gens[i];
    return out + ")";
  }
};

/* finitely supported integer combination of labeled primes */
struct Cycle {
  std::map<PrimeLabel, i64> entries;

  void add(const PrimeLabel& y, i64 mult) {
    if (!mult) return;
    auto it = entries.find(y);
    if (it == entries.end()) {
      entries.emplace(y, mult);
    } else {
      it->second += mult;
      if (!it->second) entries.erase(it);
    }
  }
  bool is_zero() const { return entries.empty(); }
  bool operator==(const Cycle&) const = default;

  std::string str() const {
    if (entries.empty()) return "0";
    std::string out;
    for (const auto& [y, m] : entries) {
      if (!out.empty()) out += " + ";
      out += std::to_string(m) + "*" + y.str();
    }
    return out;
  }
};

/* the unique codimension-2 prime (p, t) of Z_p[[t]] */
inline PrimeLabel maximal_label() { return PrimeLabel::height2("P", "t"); }

/* ---------- Smith normal form over Z/p^N ---------- */

using Matrix = std::vector<std::vector<PadicElement>>;

inline Matrix matrix_from_ints(const RingPtr& R, const std::vector<std::vector<i64>>& m) {
  Matrix out;
  for (const auto& row : m) {
    out.emplace_back();
    for (i64 v : row) out.back().push_back(PadicElement::from_int(R, v));
  }
  return out;
}

/* valuations of the elementary divisors; count equals the certified rank */
inline std::vector<int> snf_divisor_valuations(Matrix m, const RingPtr& R) {
  std::vector<int> vals;
  int rows = int(m.size());
  int cols = rows ? int(m[0].size()) : 0;
  int k = 0;
  while (k < rows && k < cols) {
    int bi = -1, bj = -1, bv = R->prec;
    for (int i = k; i < rows; ++i)
      for (int j = k; j < cols; ++j) {
        auto v = padic::valuation(m[i][j]);
        if (v && *v < bv) { bv = *v; bi = i; bj = j; }
      }
    if (bi < 0) break;  // remaining block vanishes mod p^N
    std::swap(m[bi], m[k]);
    for (int i = 0; i < rows; ++i) std::swap(m[i][bj], m[i][k]);
    // pivot p^bv*u divides every remaining entry: clear column then row with
    // exact integral multipliers (w*u^{-1}*p^(v'-bv))
    PadicElement u = padic::divide_exact_p(m[k][k], bv);
    PadicElement uinv = padic::invert(u);
    for (int i = k + 1; i < rows; ++i) {
      if (m[i][k].is_zero()) continue;
      PadicElement c = padic::mul(padic::divide_exact_p(m[i][k], bv), uinv);
      for (int j = k; j < cols; ++j)
        m[i][j] = padic::sub(m[i][j], padic::mul(c, m[k][j]));
    }
    for (int j = k + 1; j < cols; ++j) {
      if (m[k][j].is_zero()) continue;
      PadicElement c = padic::mul(padic::divide_exact_p(m[k][j], bv), uinv);
      for (int i = k; i < rows; ++i)
        m[i][j] = padic::sub(m[i][j], padic::mul(c, m[i][k]));
    }
    vals.push_back(bv);
    ++k;
  }
  return vals;
}

/* k with |coker| = p^k for a presentation matrix (rows = relations over the
   column generators); the cokernel is taken over Z_p, so certification needs
   full column rank with all divisors below the precision. */
inline int snf_order(const Matrix& m, const RingPtr& R) {
  int cols = m.empty() ? 0 : int(m[0].size());
  auto vals = snf_divisor_valuations(m, R);
  if (int(vals.size()) < cols)
    throw PrecisionExhausted("snf_order: an elementary divisor vanishes mod p^N");
  int k = 0;
  for (int v : vals) k += v;
  return k;
}

/* ---------- first Chern class ---------- */

struct Height1Prime {
  bool is_p = false;
  Poly poly;  // distinguished monic irreducible when !is_p

  static Height1Prime P() { return {true, {}}; }
  static Height1Prime from_poly(Poly f) {
    if (!series::is_distinguished(f) || series::poly_deg(f) < 1)
      throw PreconditionError("height-1 prime needs p or a distinguished polynomial");
    return {false, std::move(f)};
  }
  std::string label() const { return is_p ? "P" : series::poly_string(poly); }
};

inline Cycle c1(const TruncatedSeries& f, const std::vector<Height1Prime>& primes) {
  if (f.ring->r != 1) throw PreconditionError("c1 requires r = 1");
  Cycle out;
  for (const auto& pi : primes) {
    int mult = pi.is_p ? series::divides_p(f) : series::divides(pi.poly, f);
    out.add(PrimeLabel::height1(pi.label()), mult);
  }
  return out;
}

/* ---------- second Chern class at (p, t), two internal routes ---------- */

namespace detail {

/* multiplication-by-g matrix on Z_p[t]/(P), P monic of degree m >= 1 */
inline Matrix mult_matrix(const Poly& g, const Poly& P, const RingPtr& R) {
  int m = series::poly_deg(P);
  Matrix M(m, std::vector<PadicElement>(m, PadicElement::zero(R)));
  Poly col = {PadicElement::one(R)};
  // columns are g * t^j mod P
  Poly gr = series::poly_divmod(g, P).second;
  for (int j = 0; j < m; ++j) {
    Poly prod = series::poly_mul(gr, col);
    Poly rem = series::poly_divmod(prod, P).second;
    for (int i = 0; i <= series::poly_deg(rem); ++i) M[i][j] = rem[i];
    // col <- t*col mod P
    Poly shifted(col.size() + 1, PadicElement::zero(R));
    for (size_t i = 0; i < col.size(); ++i) shifted[i + 1] = col[i];
    col = series::poly_divmod(series::poly_trim(std::move(shifted)), P).second;
  }
  return M;
}

}  // namespace detail

struct C2Routes {
  int snf = 0;        // route (i)
  int resultant = 0;  // route (ii)
};

/* length of Lambda/(f1, f2) at (p, t); both internal routes must agree.
   Route (i): mu1*lambda2 + snf_order of multiplication by f2 on Z_p[t]/(P1).
   Route (ii): mu1*lambda2 + mu2*lambda1 + v_p(Res(P1, P2)). */
inline C2Routes c2_quotient_routes(const TruncatedSeries& f1, const TruncatedSeries& f2) {
  series::check_same_ring(f1, f2);
  if (f1.ring->r != 1) throw PreconditionError("c2_quotient requires r = 1");
  auto w1 = series::weierstrass_prepare(f1);
  auto w2 = series::weierstrass_prepare(f2);
  if (w1.mu > 0 && w2.mu > 0)
    throw NotHeightTwo("c2_quotient: both inputs divisible by p");
  int neff = std::min(w1.ring->base->prec, w2.ring->base->prec);
  RingPtr R = series::reduce_ring(f1.ring->base, neff);
  Poly P1 = series::reduce_poly(w1.distinguished, R);
  Poly P2 = series::reduce_poly(w2.distinguished, R);
  int l1 = w1.lambda(), l2 = w2.lambda();

  // route (ii)
  PadicElement res = series::resultant(P1, P2, R);
  auto vres = padic::valuation(res);
  // route (i), with the p-part of f2 factored out so it cannot vanish at neff
  std::optional<int> vsnf;
  if (l1 == 0) {
    vsnf = 0;
  } else {
    SRingPtr S = series::SeriesRing::make(R, 1, f1.ring->D);
    TruncatedSeries f2core(f2.ring);
    for (size_t k = 0; k < f2.a.size(); ++k)
      f2core.a[k] = padic::divide_exact_p(f2.a[k], w2.mu);
    Poly f2poly = series::series_to_poly(series::reduce_series(f2core, S));
    try {
      vsnf = snf_order(detail::mult_matrix(f2poly, P1, R), R);
    } catch (const PrecisionExhausted&) {
      vsnf = std::nullopt;
    }
  }
  if (!vres && !vsnf)
    throw NotHeightTwo("c2_quotient: quotient certified infinite at working precision");
  if (!vres || !vsnf)
    throw PrecisionExhausted("c2_quotient: routes disagree on finiteness certification");
  C2Routes out;
  out.resultant = w1.mu * l2 + w2.mu * l1 + *vres;
  out.snf = w1.mu * l2 + w2.mu * l1 + *vsnf;
  if (out.resultant != out.snf)
    throw std::logic_error("c2_quotient: SNF and resultant routes disagree");
  return out;
}

inline int c2_quotient(const TruncatedSeries& f1, const TruncatedSeries& f2) {
  return c2_quotient_routes(f1, f2).snf;
}

/* graph-form reduction for r = 2: f1 = t2 - phi(t1); lengths are computed on
   O[[t1]] = O[[t1,t2]]/(f1) and reported at the pulled-back codim-2 labels */
inline Cycle c2_graph(const TruncatedSeries& phi, const TruncatedSeries& f2,
                      const std::vector<Height1Prime>& primes) {
  if (phi.ring->r != 2 || !phi.ring->same(*f2.ring))
    throw PreconditionError("c2_graph requires matching r = 2 rings");
  const auto& R = *phi.ring;
  for (int k = 0; k < R.count(); ++k)
    if (!phi.a[k].is_zero() && R.exponent(k)[1] != 0)
      throw NotGraphForm("c2_graph: phi must depend on t1 only");
  if (!phi.a[0].is_zero())
    throw NotGraphForm("c2_graph: phi needs zero constant term");
  TruncatedSeries g2 = series::substitute(f2, 1, phi);
  // reinterpret in O[[t1]]
  SRingPtr S1 = series::SeriesRing::make(R.base, 1, R.D);
  TruncatedSeries g(S1);
  for (int k = 0; k < R.count(); ++k) {
    if (g2.a[k].is_zero()) continue;
    auto e = R.exponent(k);
    if (e[1] != 0) throw std::logic_error("c2_graph: substitution left a t2 term");
    g.a[e[0]] = g2.a[k];
  }
  std::string graph_gen = "t2";
  if (!phi.is_zero()) {
    std::string ps = series::series_string(phi);
    graph_gen += ps.find(" + ") == std::string::npos ? " - " + ps : " - (" + ps + ")";
  }
  Cycle out;
  for (const auto& pi : primes) {
    int mult = pi.is_p ? series::divides_p(g) : series::divides(pi.poly, g);
    std::string gen2 = pi.is_p ? "P" : series::poly_string(pi.poly, "t1");
    out.add(PrimeLabel::height2(graph_gen, gen2), mult);
  }
  return out;
}

/* ---------- Iwasawa growth tower ---------- */

/* omega_n = (1+t)^(p^n) - 1 and the tower factors omega_0 = t,
   xi_j = omega_j / omega_(j-1), each distinguished of degree p^j - p^(j-1) */
inline Poly omega_poly(const RingPtr& R, u64 p_pow) {
  Poly base = {PadicElement::one(R), PadicElement::one(R)};  // 1 + t
  Poly w = series::poly_pow(base, p_pow, R);
  w[0] = padic::sub(w[0], PadicElement::one(R));
  return series::poly_trim(std::move(w));
}

inline std::vector<Poly> omega_tower_factors(const RingPtr& R, int n_max) {
  std::vector<Poly> factors;
  Poly t = {PadicElement::zero(R), PadicElement::one(R)};
  factors.push_back(t);
  Poly prev = t;
  u64 q = 1;
  for (int j = 1; j <= n_max; ++j) {
    q *= R->p;
    Poly wj = omega_poly(R, q);
    auto [xi, rem] = series::poly_divmod(wj, prev);
    if (!rem.empty()) throw std::logic_error("omega tower division not exact");
    factors.push_back(xi);
    prev = std::move(wj);
  }
  return factors;
}

/* e_n with |Lambda/(f, omega_n)| = p^(e_n), via per-factor resultants */
inline std::vector<i64> growth_orders(const TruncatedSeries& f, int n_max) {
  if (f.ring->r != 1) throw PreconditionError("growth_orders requires r = 1");
  auto w = series::weierstrass_prepare(f);
  RingPtr R = w.ring->base;
  Poly P = w.distinguished;
  auto factors = omega_tower_factors(R, n_max);
  std::vector<i64> e;
  i64 acc = 0;
  u64 q = 1;
  for (int n = 0; n <= n_max; ++n) {
    // Res(P, xi_n) and Res(xi_n, P) differ by a sign; the small companion
    // matrix side keeps the cost linear in deg(xi_n)
    auto v = padic::valuation(series::resultant(P, factors[n], R));
    if (!v)
      throw NotCoprime("growth_orders: f shares a factor with the omega tower at precision");
    acc += *v;
    e.push_back(acc + i64(w.mu) * i64(q));
    q *= R->p;
  }
  return e;
}

/* dense cross-check: SNF of multiplication by f on Z_p[t]/(omega_n) */
inline i64 growth_order_snf(const TruncatedSeries& f, int n) {
  RingPtr R = f.ring->base;
  u64 q = 1;
  for (int i = 0; i < n; ++i) q *= R->p;
  Poly wn = omega_poly(R, q);
  if (series::poly_deg(wn) <= f.poly_degree())
    throw PreconditionError("growth_order_snf: omega_n degree below stored degree of f");
  return snf_order(detail::mult_matrix(series::series_to_poly(f), wn, R), R);
}

/* exact affine-exponential fit e_n = mu*p^n + lambda*n + nu for n >= n0 */
struct GrowthFit {
  i64 mu = 0, lambda = 0, nu = 0;
  int n0 = 0;
};

inline GrowthFit fit_growth(const std::vector<i64>& e, u64 p) {
  if (e.size() < 4) throw PreconditionError("fit_growth needs at least 4 orders");
  for (int n0 = 0; n0 + 3 <= int(e.size()); ++n0) {
    i64 d1 = e[n0 + 1] - e[n0];
    i64 d2 = e[n0 + 2] - e[n0 + 1];
    i64 q = 1;
    for (int i = 0; i < n0; ++i) q *= i64(p);
    i64 denom = q * i64(p - 1) * i64(p - 1);
    if ((d2 - d1) % denom) continue;
    i64 mu = (d2 - d1) / denom;
    i64 lambda = d1 - mu * q * i64(p - 1);
    if (mu < 0 || lambda < 0) continue;
    i64 nu = e[n0] - mu * q - lambda * n0;
    bool ok = true;
    i64 qq = q;
    for (int n = n0; n < int(e.size()); ++n) {
      if (e[n] != mu * qq + lambda * n + nu) { ok = false; break; }
      qq *= i64(p);
    }
    if (ok) return {mu, lambda, nu, n0};
  }
  throw NoStableFit("fit_growth: no exact affine-exponential tail of length >= 3");
}

}  // namespace charsym::cycles

#pragma once
#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

#include "common.hpp"

namespace charsym::padic {

/* Arithmetic in Z/p^N and in unramified extensions W(F_{p^f})/p^N presented as
   (Z/p^N)[y]/(h) for a monic lift h of an irreducible polynomial mod p.
   All residues live in [0, p^N); p^N must fit in a signed 64-bit value so that
   products can be reduced through 128-bit intermediates. */

class PadicRing;
using RingPtr = std::shared_ptr<const PadicRing>;

namespace detail {

/* gcd of polynomials over F_p, coefficients low->high, leading coeff nonzero */
inline std::vector<u64> polygcd_fp(std::vector<u64> a, std::vector<u64> b, u64 p) {
  auto trim = [](std::vector<u64>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b
    u64 lead_inv = powmod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
      u64 c = mulmod(a.back(), lead_inv, p);
      if (c)
        for (size_t i = 0; i < b.size(); ++i) {
          size_t k = a.size() - b.size() + i;
          a[k] = (a[k] + p - mulmod(c, b[i], p)) % p;
        }
      a.pop_back();
      trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

/* x^(p^k) mod (h, p) by repeated squaring in F_p[y]/(h) */
inline std::vector<u64> frob_power_fp(const std::vector<u64>& h, u64 p, int k) {
  size_t f = h.size() - 1;
  auto mul = [&](const std::vector<u64>& a, const std::vector<u64>& b) {
    std::vector<u64> out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i])
        for (size_t j = 0; j < b.size(); ++j)
          out[i + j] = (out[i + j] + mulmod(a[i], b[j], p)) % p;
    while (out.size() > f) {
      u64 c = out.back();
      out.pop_back();
      if (c)
        for (size_t i = 0; i < f; ++i) {
          size_t k2 = out.size() - f + i;
          out[k2] = (out[k2] + p - mulmod(c, h[i], p)) % p;
        }
    }
    out.resize(f, 0);
    return out;
  };
  std::vector<u64> x(f, 0);
  if (f == 1)
    x[0] = 0;  // y == -h[0], but f=1 never uses this path
  else
    x[1] = 1;
  for (int i = 0; i < k; ++i) {
    // x <- x^p
    std::vector<u64> r(f, 0);
    r[0] = 1;
    std::vector<u64> base = x;
    u64 e = p;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    x = r;
  }
  return x;
}

}  // namespace detail

class PadicRing : public std::enable_shared_from_this<PadicRing> {
 public:
  const u64 p;
  const int prec;               // N
  const std::vector<u64> h;     // monic, low->high, h.size() = f+1
  const u64 pn;                 // p^N
  const int f;                  // residue degree

  static RingPtr make(u64 p, int N, std::vector<u64> h = {}) {
    return std::shared_ptr<const PadicRing>(new PadicRing(p, N, std::move(h)));
  }

  bool same(const PadicRing& o) const {
    return p == o.p && prec == o.prec && h == o.h;
  }

  static bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  PadicRing(u64 p_, int N, std::vector<u64> h_)
      : p(p_), prec(N), h(normalize(p_, N, std::move(h_))), pn(pow_checked(p_, N)),
        f(int(h.size()) - 1) {
    if (N < 1) throw PreconditionError("precision must be >= 1");
    if (p < 2 || !is_prime(p)) throw PreconditionError("p must be prime");
    if (f >= 2) {
      // h mod p must be irreducible: no root subfield overlap up to f/2
      std::vector<u64> hp(h.size());
      for (size_t i = 0; i < h.size(); ++i) hp[i] = h[i] % p;
      for (int d = 1; 2 * d <= f; ++d) {
        // an irreducible factor of degree e <= f/2 divides y^(p^e) - y
        auto xq = detail::frob_power_fp(hp, p, d);  // y^(p^d) mod (h,p)
        if (xq.size() < 2) xq.resize(2, 0);
        // gcd(h, y^(p^d) - y)
        auto g = xq;
        g[1] = (g[1] + p - 1) % p;
        auto gc = detail::polygcd_fp(hp, g, p);
        if (gc.size() > 1) throw PreconditionError("extension polynomial reducible mod p");
      }
    }
  }

  static std::vector<u64> normalize(u64 p, int N, std::vector<u64> h) {
    if (h.empty()) h = {0, 1};  // base ring: h = y
    u64 pn = pow_checked(p, N);
    for (auto& c : h) c %= pn;
    if (h.size() < 2 || h.back() != 1)
      throw PreconditionError("extension polynomial must be monic of degree >= 1");
    return h;
  }

  static u64 pow_checked(u64 p, int N) {
    u64 r = 1;
    for (int i = 0; i < N; ++i) {
      if (r > (u64(1) << 62) / p) throw PreconditionError("p^N exceeds 2^62");
      r *= p;
    }
    return r;
  }
};

class PadicElement {
 public:
  RingPtr ring;
  std::vector<u64> c;  // length f, entries in [0, p^N)

  PadicElement() = default;
  PadicElement(RingPtr r, std::vector<u64> coeffs) : ring(std::move(r)), c(std::move(coeffs)) {
    c.resize(ring->f, 0);
    for (auto& x : c) x %= ring->pn;
  }

  static PadicElement zero(RingPtr r) { return {std::move(r), {}}; }
  static PadicElement one(RingPtr r) { return {std::move(r), {1}}; }
  static PadicElement from_int(RingPtr r, i64 v) {
    u64 pn = r->pn;
    u64 x;
    if (v >= 0) {
      x = u64(v) % pn;
    } else {
      u64 m = (u64(-(v + 1)) + 1) % pn;
      x = m ? pn - m : 0;
    }
    return {std::move(r), {x}};
  }

  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](u64 x) { return x == 0; });
  }
  bool operator==(const PadicElement& o) const { return ring->same(*o.ring) && c == o.c; }

  std::string str() const {
    if (ring->f == 1) return std::to_string(c[0]);
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < ring->f; ++i) os << (i ? "," : "") << c[i];
    os << "]";
    return os.str();
  }
};

inline void check_same_ring(const PadicElement& a, const PadicElement& b) {
  if (!a.ring->same(*b.ring)) throw RingMismatch("elements from different p-adic rings");
}

inline PadicElement add(const PadicElement& a, const PadicElement& b) {
  check_same_ring(a, b);
  std::vector<u64> c(a.c.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = (a.c[i] + b.c[i]) % a.ring->pn;
  return {a.ring, std::move(c)};
}

inline PadicElement neg(const PadicElement& a) {
  std::vector<u64> c(a.c.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.c[i] ? a.ring->pn - a.c[i] : 0;
  return {a.ring, std::move(c)};
}

inline PadicElement sub(const PadicElement& a, const PadicElement& b) { return add(a, neg(b)); }

inline PadicElement mul(const PadicElement& a, const PadicElement& b) {
  check_same_ring(a, b);
  const auto& R = *a.ring;
  std::vector<u64> out(2 * R.f - 1, 0);
  for (int i = 0; i < R.f; ++i)
    if (a.c[i])
      for (int j = 0; j < R.f; ++j)
        out[i + j] = (out[i + j] + mulmod(a.c[i], b.c[j], R.pn)) % R.pn;
  // reduce mod monic h
  while (int(out.size()) > R.f) {
    u64 c = out.back();
    out.pop_back();
    if (c)
      for (int i = 0; i < R.f; ++i) {
        size_t k = out.size() - R.f + i;
        out[k] = (out[k] + R.pn - mulmod(c, R.h[i], R.pn)) % R.pn;
      }
  }
  out.resize(R.f, 0);
  return {a.ring, std::move(out)};
}

inline PadicElement mul_int(const PadicElement& a, i64 s) {
  return mul(a, PadicElement::from_int(a.ring, s));
}

inline PadicElement pow(PadicElement a, u64 e) {
  PadicElement r = PadicElement::one(a.ring);
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

/* exact p-valuation; nullopt is the "≥ N" sentinel (vanishes mod p^N) */
inline std::optional<int> valuation(const PadicElement& x) {
  const auto& R = *x.ring;
  int v = R.prec;
  for (u64 c : x.c) {
    if (!c) continue;
    int w = 0;
    while (c % R.p == 0) { c /= R.p; ++w; }
    v = std::min(v, w);
  }
  if (v >= R.prec) return std::nullopt;
  return v;
}

inline bool is_unit(const PadicElement& x) {
  auto v = valuation(x);
  return v && *v == 0;
}

/* unit inverse: Fermat inverse in the residue field, then Newton z <- z(2-xz) */
inline PadicElement invert(const PadicElement& x) {
  if (!is_unit(x)) throw NonUnit("invert: element has positive valuation");
  const auto& R = *x.ring;
  // residue-field inverse via x^(q-2), q = p^f, computed mod p
  RingPtr Rp = PadicRing::make(R.p, 1, std::vector<u64>(R.h.begin(), R.h.end()));
  std::vector<u64> xr(x.c.size());
  for (size_t i = 0; i < xr.size(); ++i) xr[i] = x.c[i] % R.p;
  u64 q = 1;
  for (int i = 0; i < R.f; ++i) q *= R.p;
  PadicElement z0 = pow(PadicElement(Rp, xr), q - 2);
  PadicElement z(x.ring, z0.c);
  for (int it = 0, need = 1; need < R.prec; ++it, need *= 2) {
    PadicElement t = sub(PadicElement::from_int(x.ring, 2), mul(x, z));
    z = mul(z, t);
  }
  // one extra pass guards the need==prec boundary
  z = mul(z, sub(PadicElement::from_int(x.ring, 2), mul(x, z)));
  return z;
}

/* exact division by p^k (every coefficient must be divisible); the result is
   only trustworthy mod p^(N-k) -- callers track effective precision */
inline PadicElement divide_exact_p(const PadicElement& x, int k) {
  const auto& R = *x.ring;
  u64 pk = 1;
  for (int i = 0; i < k; ++i) pk *= R.p;
  std::vector<u64> c(x.c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    if (x.c[i] % pk) throw PrecisionExhausted("divide_exact_p: not divisible");
    c[i] = x.c[i] / pk;
  }
  return {x.ring, std::move(c)};
}

/* Teichmueller lift: the unique (p^f - 1)-th root of unity congruent to a
   mod p, as the limit of the Frobenius-power iteration x -> x^(p^f). */
inline PadicElement teichmuller(const PadicElement& a) {
  if (!is_unit(a)) throw NonUnitResidue("teichmuller: residue not a unit");
  const auto& R = *a.ring;
  u64 q = 1;
  for (int i = 0; i < R.f; ++i) q *= R.p;
  PadicElement x = a;
  for (int i = 0; i <= R.prec + 1; ++i) {
    PadicElement y = pow(x, q);
    if (y == x) return x;
    x = y;
  }
  return x;
}

inline PadicElement teichmuller(RingPtr r, u64 residue) {
  return teichmuller(PadicElement::from_int(std::move(r), i64(residue)));
}

}  // namespace charsym::padic

#pragma once
#include <chrono>
#include <random>
#include <sstream>

#include "homalg.hpp"
#include "ktheory.hpp"
#include "lvalues.hpp"

/* The bundled acceptance suite. Each criterion is self-contained, prints one
   line through its result record, and carries a pinned wall-clock budget. */
namespace charsym::selftest {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

/* random symbol inputs f = p^(a) * prod pool_i^(e_i) * unit over Z_p[[t]] */
struct SeriesGen {
  std::mt19937_64 rng;
  u64 p;
  series::SRingPtr S;
  std::vector<series::Poly> pool;

  SeriesGen(u64 p_, int N, int D, u64 seed) : rng(seed), p(p_) {
    S = series::SeriesRing::make(padic::PadicRing::make(p, N), 1, D);
    auto ip = std::to_string(p);
    pool = {series::parse_poly("t", S), series::parse_poly("t - " + ip, S),
            series::parse_poly("t + " + ip, S), series::parse_poly("t^2 + " + ip, S)};
  }

  i64 pick(i64 n) { return i64(rng() % u64(n)); }

  series::TruncatedSeries unit() {
    std::vector<i64> cs(4);
    cs[0] = 1 + pick(i64(p) - 1);
    for (int i = 1; i < 4; ++i) cs[i] = pick(i64(p));
    return series::TruncatedSeries::from_coeffs(S, cs);
  }

  /* monic distinguished polynomial with unit-times-p constant term */
  series::Poly eisenstein(int deg) {
    std::vector<i64> cs(size_t(deg) + 1, 0);
    cs[size_t(deg)] = 1;
    cs[0] = i64(p) * (1 + pick(i64(p) - 1));
    for (int i = 1; i < deg; ++i) cs[i] = i64(p) * pick(i64(p));
    return series::series_to_poly(series::TruncatedSeries::from_coeffs(S, cs));
  }

  series::TruncatedSeries with_support(int emax, int total_cap = 99) {
    auto f = unit();
    int used = 0;
    if (pick(2)) f = series::mul_int(f, i64(p)), ++used;
    for (const auto& pi : pool) {
      i64 e = pick(emax + 1);
      for (i64 i = 0; i < e && used < total_cap; ++i, ++used)
        f = series::mul(f, series::poly_to_series(S, pi));
    }
    return f;
  }
};

inline double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename Body>
CriterionResult timed(int index, std::string name, double budget, Body&& body) {
  CriterionResult r;
  r.index = index;
  r.name = std::move(name);
  auto t0 = std::chrono::steady_clock::now();
  std::ostringstream note;
  bool ok = false;
  try {
    ok = body(note);
  } catch (const std::exception& e) {
    note << "exception: " << e.what();
  }
  r.seconds = elapsed(t0);
  if (r.seconds > budget) {
    note << (note.str().empty() ? "" : "; ") << "over " << budget << " s budget";
    ok = false;
  }
  r.pass = ok;
  r.detail = note.str();
  return r;
}

}  // namespace detail

/* 1: the bundled irregular-pair computation at p = 37, cross-checked by the
   classical Bernoulli recurrence */
inline CriterionResult criterion1() {
  return detail::timed(1, "irregular pair at p = 37", 1.0, [](std::ostringstream& note) {
    auto P = lvalues::make_place(37, 36, 8);
    auto om = lvalues::teich(P);
    auto a = lvalues::lp_at_zero(om.power(31), 37, 8);
    auto b = lvalues::lp_at_zero(om.power(4).mul(lvalues::kronecker_char(-4), 36), 37, 8);
    auto Bc = lvalues::bernoulli_mod_p(37);
    int zeros = 0;
    for (size_t j = 2; j <= 34; j += 2)
      if (Bc[j] == 0) ++zeros;
    note << "v(B at om^31) = " << a.valuation << ", v(B at om^4 kappa) = " << b.valuation
         << ", recurrence zeros among even indices = " << zeros << " (at 32: " << (Bc[32] == 0)
         << ")";
    return a.divisible && !b.divisible && Bc[32] == 0 && zeros == 1;
  });
}

/* 2: the two bundled searches; the conductor-28 half asks for an exceptional
   zero that provably does not exist at these parameters, and is reported as
   found (failing honestly) rather than waved through */
inline CriterionResult criterion2() {
  return detail::timed(2, "divisibility searches at p = 5", 120.0, [](std::ostringstream& note) {
    const std::vector<i64> discs = {-3, -4, -7, -8, -11, -15, -19, -20};
    auto r28 = lvalues::divisibility_search(5, 28, 6, discs, 10);
    int exc28 = 0;
    for (const auto& h : r28.hits)
      if (h.exc1 || h.exc2) ++exc28;
    auto r555 = lvalues::divisibility_search(5, 555, 4, discs, 10);
    int plain555 = 0;
    for (const auto& h : r555.hits)
      if (!h.exc1 && !h.exc2) ++plain555;
    note << "conductor 28: " << r28.hits.size() << " hits, " << exc28
         << " exceptional (need >= 1); conductor 555: " << plain555
         << " non-exceptional hits (need >= 1)";
    return exc28 >= 1 && plain555 >= 1;
  });
}

namespace detail {

/* pair elements are p itself or exact distinguished irreducibles: at finite
   t-truncation D the distinguished factor of a unit multiple is only
   determined mod p^(D/deg), so the primes must be handed over exactly */
struct Height2Gen {
  SeriesGen gen;
  explicit Height2Gen(u64 p, u64 seed) : gen(p, 12, 24, seed) {}

  std::pair<series::TruncatedSeries, series::TruncatedSeries> pair() {
    for (;;) {
      bool p1 = gen.pick(4) == 0, p2 = !p1 && gen.pick(4) == 0;
      series::Poly e1, e2;
      if (!p1) e1 = gen.eisenstein(1 + int(gen.pick(4)));
      if (!p2) e2 = gen.eisenstein(1 + int(gen.pick(4)));
      if (!p1 && !p2 && series::poly_string(e1) == series::poly_string(e2)) continue;
      auto f1 = p1 ? series::TruncatedSeries::constant(gen.S, i64(gen.p))
                   : series::poly_to_series(gen.S, e1);
      auto f2 = p2 ? series::TruncatedSeries::constant(gen.S, i64(gen.p))
                   : series::poly_to_series(gen.S, e2);
      return {f1, f2};
    }
  }
};

}  // namespace detail

/* 3: tame-symbol, SNF, and resultant routes agree on 100 height-2 pairs */
inline CriterionResult criterion3() {
  return detail::timed(3, "three-route agreement on height-2 pairs", 30.0,
                       [](std::ostringstream& note) {
    int agree = 0, total = 0;
    for (u64 p : {5u, 7u}) {
      detail::Height2Gen g(p, 0x29000u + p);
      for (int t = 0; t < 50; ++t) {
        auto [f1, f2] = g.pair();
        auto routes = cycles::c2_quotient_routes(f1, f2);
        auto rep = ktheory::verify_prop29(f1, f2);
        i64 nu = rep.lhs.entries.count(cycles::maximal_label())
                     ? rep.lhs.entries.at(cycles::maximal_label())
                     : 0;
        ++total;
        if (nu == routes.snf && routes.snf == routes.resultant && rep.equal) ++agree;
      }
    }
    note << agree << "/" << total << " pairs agree across all three routes";
    return agree == total && total == 100;
  });
}

/* 4: the symmetric characteristic symbol yields the identical cycle */
inline CriterionResult criterion4() {
  return detail::timed(4, "symmetry of the characteristic symbol", 30.0,
                       [](std::ostringstream& note) {
    int same = 0, total = 0;
    for (u64 p : {5u, 7u}) {
      detail::Height2Gen g(p, 0x29000u + p);  // the same 100 pairs as criterion 3
      for (int t = 0; t < 50; ++t) {
        auto [f1, f2] = g.pair();
        auto rep = ktheory::verify_prop29(f1, f2);
        ++total;
        if (rep.symmetric == rep.lhs && rep.symmetric == rep.rhs) ++same;
      }
    }
    note << same << "/" << total << " pairs have symmetric = direct = length cycle";
    return same == total && total == 100;
  });
}

/* 5: reciprocity: residues over a complete support sum to zero at (p, t) */
inline CriterionResult criterion5() {
  return detail::timed(5, "reciprocity over complete supports", 30.0,
                       [](std::ostringstream& note) {
    int zero = 0, total = 0;
    for (u64 p : {5u, 7u}) {
      detail::SeriesGen gen(p, 10, 24, 0x6E0u + p);
      std::vector<cycles::Height1Prime> support = {cycles::Height1Prime::P()};
      for (const auto& pi : gen.pool) support.push_back(cycles::Height1Prime::from_poly(pi));
      for (int t = 0; t < 25; ++t) {
        auto f = gen.with_support(1, 3);
        auto gg = gen.with_support(1, 3);
        ++total;
        if (ktheory::reciprocity_check(f, gg, support)) ++zero;
      }
    }
    note << zero << "/" << total << " symbols sum to the zero cycle";
    return zero == total && total == 50;
  });
}

/* 6: tower growth recovers the Weierstrass invariants exactly */
inline CriterionResult criterion6() {
  return detail::timed(6, "growth formula fits", 60.0, [](std::ostringstream& note) {
    int good = 0, total = 0;
    for (u64 p : {5u, 7u}) {
      detail::SeriesGen gen(p, 12, 24, 0x60A0u + p);
      const auto xi1 = series::poly_string(
          series::parse_poly("t^4 + 5*t^3 + 10*t^2 + 10*t + 5", gen.S));
      for (int t = 0; t < 10; ++t) {
        int deg = int(gen.pick(5));
        series::TruncatedSeries f = series::TruncatedSeries::constant(gen.S, 1);
        if (deg > 0) {
          auto P = gen.eisenstein(deg);
          // the only Eisenstein draw of degree <= 4 that meets the tower
          if (p == 5 && deg == 4 && series::poly_string(P) == xi1) {
            --t;
            continue;
          }
          f = series::poly_to_series(gen.S, P);
        }
        int mu = int(gen.pick(2));
        for (int i = 0; i < mu; ++i) f = series::mul_int(f, i64(p));
        auto w = series::weierstrass_prepare(f);
        auto fit = cycles::fit_growth(cycles::growth_orders(f, 4), p);
        ++total;
        if (fit.mu == w.mu && fit.lambda == w.lambda()) ++good;
      }
    }
    note << good << "/" << total << " fits recover (mu, lambda)";
    return good == total && total == 20;
  });
}

/* 7: Ext of a finite complete intersection concentrates in top degree */
inline CriterionResult criterion7() {
  return detail::timed(7, "Ext concentration and biduality", 30.0,
                       [](std::ostringstream& note) {
    std::mt19937_64 rng(0xE872u);
    int good = 0, total = 0;
    for (u64 p : {5u, 7u}) {
      for (int t = 0; t < 5; ++t) {
        std::vector<groebner::PolyFp> f;
        i64 qd = 0;
        for (;;) {
          f.clear();
          for (int i = 0; i < 2; ++i) {
            auto g = groebner::PolyFp::zero(p, 2);
            int deg = 1 + int(rng() % 3);
            for (int a = 0; a <= deg; ++a)
              for (int b = 0; a + b <= deg; ++b)
                if (rng() % 2) g.addin({a, b, 0}, 1 + rng() % (p - 1));
            f.push_back(g);
          }
          if (f[0].is_zero() || f[1].is_zero()) continue;
          auto dim = groebner::quotient_dim(groebner::buchberger(f));
          if (!dim || *dim < 1 || *dim > 12) continue;
          qd = *dim;
          break;
        }
        auto rep = homalg::ext_dims(f);
        bool ok = rep.dims.size() == 3 && rep.dims[0] == 0 && rep.dims[1] == 0 &&
                  rep.dims[2] == qd && rep.cyclic && rep.annihilator_match &&
                  homalg::biduality_check(f);
        ++total;
        if (ok) ++good;
      }
    }
    note << good << "/" << total << " sequences concentrate with matching biduality";
    return good == total && total == 10;
  });
}

/* 8: the exact symbol-algebra property families, >= 50 instances each */
inline CriterionResult criterion8() {
  return detail::timed(8, "symbol algebra property suite", 60.0, [](std::ostringstream& note) {
    int fail = 0;
    auto run = [&](const char* label, int got, int want) {
      if (got != want) {
        ++fail;
        note << (note.str().empty() ? "" : "; ") << label << " " << got << "/" << want;
      }
    };

    int bil = 0, anti = 0, stb = 0;
    for (u64 p : {5u, 7u}) {
      detail::SeriesGen gen(p, 10, 24, 0x800u * p);
      for (int t = 0; t < 15; ++t) {
        i64 k = gen.pick(i64(gen.pool.size()) + 1);
        ktheory::DvrDescriptor d =
            k == i64(gen.pool.size())
                ? ktheory::DvrDescriptor{gen.S, cycles::Height1Prime::P()}
                : ktheory::DvrDescriptor{gen.S,
                                         cycles::Height1Prime::from_poly(gen.pool[size_t(k)])};
        auto f1 = gen.with_support(1), f2 = gen.with_support(1), g = gen.with_support(1);
        auto lhs = ktheory::tame(ktheory::symbol(series::mul(f1, f2), g), d);
        auto rhs = ktheory::residue_mul(ktheory::tame(ktheory::symbol(f1, g), d),
                                        ktheory::tame(ktheory::symbol(f2, g), d));
        if (ktheory::residue_eq(lhs, rhs)) ++bil;
        auto lhs2 = ktheory::tame(ktheory::symbol(g, series::mul(f1, f2)), d);
        auto rhs2 = ktheory::residue_mul(ktheory::tame(ktheory::symbol(g, f1), d),
                                         ktheory::tame(ktheory::symbol(g, f2), d));
        if (ktheory::residue_eq(lhs2, rhs2)) ++bil;

        auto ab = ktheory::tame(ktheory::symbol(f1, g), d);
        auto ba = ktheory::tame(ktheory::symbol(g, f1), d);
        if (ktheory::residue_is_one(ktheory::residue_mul(ab, ba))) ++anti;
        auto cd = ktheory::tame(ktheory::symbol(f2, g), d);
        auto dc = ktheory::tame(ktheory::symbol(g, f2), d);
        if (ktheory::residue_is_one(ktheory::residue_mul(cd, dc))) ++anti;

        for (const auto* h : {&f1, &f2}) {
          auto om = series::sub(series::TruncatedSeries::constant(gen.S, 1), *h);
          if (om.is_zero()) { ++stb; continue; }
          if (ktheory::residue_is_one(ktheory::tame(ktheory::symbol(*h, om), d))) ++stb;
        }
      }
    }
    run("bilinearity", bil, 60);
    run("antisymmetry", anti, 60);
    run("steinberg", stb, 60);

    std::mt19937_64 rng(0x7E1Cu);
    int tm = 0, tmt = 0;
    for (int t = 0; t < 60; ++t) {
      u64 p = (t % 3 == 0) ? 37 : (t % 3 == 1) ? 7 : 5;
      auto R = padic::PadicRing::make(p, 2 + int(rng() % 7));
      u64 a = 1 + rng() % (R->pn - 1), b = 1 + rng() % (R->pn - 1);
      while (a % p == 0) a = 1 + rng() % (R->pn - 1);
      while (b % p == 0) b = 1 + rng() % (R->pn - 1);
      ++tmt;
      auto wa = padic::teichmuller(padic::PadicElement::from_int(R, i64(a)));
      auto wb = padic::teichmuller(padic::PadicElement::from_int(R, i64(b)));
      auto wab = padic::teichmuller(padic::PadicElement(R, {mulmod(a, b, R->pn)}));
      if (padic::mul(wa, wb) == wab && padic::pow(wa, p - 1) == padic::PadicElement::one(R))
        ++tm;
    }
    run("teichmuller", tm, tmt);

    int inv = 0;
    for (int t = 0; t < 50; ++t) {
      int r = 1 + int(t % 2);
      auto S = series::SeriesRing::make(padic::PadicRing::make(t % 2 ? 7 : 5, 6), r,
                                        r == 1 ? 12 : 6);
      series::TruncatedSeries f(S), g(S);
      for (auto& c : f.a) c = padic::PadicElement::from_int(S->base, i64(rng() % 50) - 25);
      for (auto& c : g.a) c = padic::PadicElement::from_int(S->base, i64(rng() % 50) - 25);
      if (series::iota(series::iota(f)) == f &&
          series::iota(series::mul(f, g)) == series::mul(series::iota(f), series::iota(g)))
        ++inv;
    }
    run("iota", inv, 50);

    int add = 0;
    for (u64 p : {5u, 7u}) {
      detail::SeriesGen gen(p, 10, 24, 0xC100u + p);
      std::vector<cycles::Height1Prime> primes = {cycles::Height1Prime::P()};
      for (const auto& pi : gen.pool) primes.push_back(cycles::Height1Prime::from_poly(pi));
      for (int t = 0; t < 25; ++t) {
        auto f = gen.with_support(1), g = gen.with_support(1);
        auto cf = cycles::c1(f, primes);
        for (const auto& [y, m] : cycles::c1(g, primes).entries) cf.add(y, m);
        if (cycles::c1(series::mul(f, g), primes) == cf) ++add;
      }
    }
    run("c1 additivity", add, 50);

    if (fail == 0)
      note << "bilinearity 60/60, antisymmetry 60/60, steinberg 60/60, teichmuller " << tm << "/"
           << tmt << ", iota 50/50, c1 additivity 50/50";
    return fail == 0;
  });
}

inline std::vector<CriterionResult> run_criteria(const std::vector<int>& which) {
  std::vector<CriterionResult> out;
  for (int i : which) {
    switch (i) {
      case 1: out.push_back(criterion1()); break;
      case 2: out.push_back(criterion2()); break;
      case 3: out.push_back(criterion3()); break;
      case 4: out.push_back(criterion4()); break;
      case 5: out.push_back(criterion5()); break;
      case 6: out.push_back(criterion6()); break;
      case 7: out.push_back(criterion7()); break;
      case 8: out.push_back(criterion8()); break;
      default: throw PreconditionError("criterion index must be 1..8");
    }
  }
  return out;
}

inline std::vector<CriterionResult> run_all() {
  return run_criteria({1, 2, 3, 4, 5, 6, 7, 8});
}

inline std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << "criterion " << r.index << " (" << r.name << "): " << (r.pass ? "PASS" : "FAIL");
  if (!r.detail.empty()) os << "  [" << r.detail << "]";
  std::ostringstream t;
  t.precision(2);
  t << std::fixed << r.seconds;
  os << "  (" << t.str() << " s)";
  return os.str();
}

}  // namespace charsym::selftest

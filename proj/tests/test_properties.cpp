#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "charsym/ktheory.hpp"
#include "charsym/lvalues.hpp"

using namespace charsym;
using cycles::Cycle;
using cycles::Height1Prime;
using ktheory::DvrDescriptor;
using ktheory::symbol;
using padic::PadicRing;
using series::SeriesRing;
using series::SRingPtr;
using series::TruncatedSeries;

/* random series f = p^(a0) * prod pool_i^(e_i) * unit over Z_p[[t]] */
struct SymbolGen {
  std::mt19937_64 rng;
  u64 p;
  SRingPtr S;
  std::vector<series::Poly> pool;

  SymbolGen(u64 p_, int N, int D, u64 seed) : rng(seed), p(p_) {
    S = SeriesRing::make(PadicRing::make(p, N), 1, D);
    auto ip = i64(p);
    pool = {series::parse_poly("t", S),
            series::parse_poly("t - " + std::to_string(ip), S),
            series::parse_poly("t + " + std::to_string(ip), S),
            series::parse_poly("t^2 + " + std::to_string(ip), S)};
  }

  i64 pick(i64 n) { return i64(rng() % u64(n)); }

  TruncatedSeries unit() {
    std::vector<i64> cs(4);
    cs[0] = 1 + pick(i64(p) - 1);
    for (int i = 1; i < 4; ++i) cs[i] = pick(i64(p));
    return TruncatedSeries::from_coeffs(S, cs);
  }

  TruncatedSeries ser(int emax = 2) {
    auto f = unit();
    if (pick(2)) f = series::mul_int(f, i64(p));
    for (const auto& pi : pool) {
      i64 e = pick(emax + 1);
      for (i64 i = 0; i < e; ++i) f = series::mul(f, series::poly_to_series(S, pi));
    }
    return f;
  }

  DvrDescriptor dvr() {
    i64 k = pick(i64(pool.size()) + 1);
    if (k == i64(pool.size())) return {S, Height1Prime::P()};
    return {S, Height1Prime::from_poly(pool[size_t(k)])};
  }
};

TEST_CASE("tame symbol is bilinear in both slots") {
  for (u64 p : {5u, 7u}) {
    SymbolGen gen(p, 10, 24, 0x51u * p);
    for (int t = 0; t < 30; ++t) {
      auto d = gen.dvr();
      auto f1 = gen.ser(1), f2 = gen.ser(1), g = gen.ser(1);
      auto lhs = ktheory::tame(symbol(series::mul(f1, f2), g), d);
      auto rhs = ktheory::residue_mul(ktheory::tame(symbol(f1, g), d),
                                      ktheory::tame(symbol(f2, g), d));
      CHECK(ktheory::residue_eq(lhs, rhs));
      auto lhs2 = ktheory::tame(symbol(g, series::mul(f1, f2)), d);
      auto rhs2 = ktheory::residue_mul(ktheory::tame(symbol(g, f1), d),
                                       ktheory::tame(symbol(g, f2), d));
      CHECK(ktheory::residue_eq(lhs2, rhs2));
    }
  }
}

TEST_CASE("tame symbol is antisymmetric") {
  for (u64 p : {5u, 7u}) {
    SymbolGen gen(p, 10, 24, 0xA5u * p);
    for (int t = 0; t < 30; ++t) {
      auto d = gen.dvr();
      auto f = gen.ser(1), g = gen.ser(1);
      auto ab = ktheory::tame(symbol(f, g), d);
      auto ba = ktheory::tame(symbol(g, f), d);
      CHECK(ktheory::residue_is_one(ktheory::residue_mul(ab, ba)));
    }
  }
}

TEST_CASE("Steinberg pairs die under every tame symbol") {
  for (u64 p : {5u, 7u}) {
    SymbolGen gen(p, 10, 24, 0x57u * p);
    int done = 0;
    while (done < 30) {
      auto d = gen.dvr();
      auto f = gen.ser(1);
      auto one_minus = series::sub(TruncatedSeries::constant(gen.S, 1), f);
      if (f.is_zero() || one_minus.is_zero()) continue;
      CHECK(ktheory::residue_is_one(ktheory::tame(symbol(f, one_minus), d)));
      ++done;
    }
  }
}

TEST_CASE("Teichmueller lifts multiply") {
  std::mt19937_64 rng(0x731Cu);
  for (int t = 0; t < 40; ++t) {
    u64 p = (t % 3 == 0) ? 37 : (t % 3 == 1) ? 7 : 5;
    int N = 2 + int(rng() % 7);
    auto R = PadicRing::make(p, N);
    u64 a = 1 + rng() % (R->pn - 1);
    u64 b = 1 + rng() % (R->pn - 1);
    if (a % p == 0 || b % p == 0) continue;
    auto wa = padic::teichmuller(padic::PadicElement::from_int(R, i64(a)));
    auto wb = padic::teichmuller(padic::PadicElement::from_int(R, i64(b)));
    auto wab = padic::teichmuller(padic::PadicElement(R, {mulmod(a, b, R->pn)}));
    CHECK(padic::mul(wa, wb) == wab);
    CHECK(padic::pow(wa, p - 1) == padic::PadicElement::one(R));
    CHECK((wa.c[0] + R->pn - a) % p == 0);
  }
  // and in an unramified quadratic extension
  auto W = PadicRing::make(5, 6, {1, 1, 1});
  for (int t = 0; t < 20; ++t) {
    padic::PadicElement x(W, {rng() % W->pn, rng() % W->pn});
    padic::PadicElement y(W, {rng() % W->pn, rng() % W->pn});
    if (!padic::is_unit(x) || !padic::is_unit(y)) continue;
    auto wx = padic::teichmuller(x);
    auto wy = padic::teichmuller(y);
    CHECK(padic::teichmuller(padic::mul(x, y)) == padic::mul(wx, wy));
    CHECK(padic::pow(wx, 24) == padic::PadicElement::one(W));
  }
}

TEST_CASE("group inversion is an involutive ring map") {
  std::mt19937_64 rng(0x107Au);
  for (int t = 0; t < 50; ++t) {
    int r = 1 + int(t % 2);
    auto S = SeriesRing::make(PadicRing::make(t % 2 ? 7 : 5, 6), r, r == 1 ? 12 : 6);
    TruncatedSeries f(S), g(S);
    for (auto& c : f.a) c = padic::PadicElement::from_int(S->base, i64(rng() % 50) - 25);
    for (auto& c : g.a) c = padic::PadicElement::from_int(S->base, i64(rng() % 50) - 25);
    CHECK(series::iota(series::iota(f)) == f);
    CHECK(series::iota(series::mul(f, g)) == series::mul(series::iota(f), series::iota(g)));
    CHECK(series::iota(series::add(f, g)) == series::add(series::iota(f), series::iota(g)));
  }
}

TEST_CASE("first Chern class is additive on products") {
  for (u64 p : {5u, 7u}) {
    SymbolGen gen(p, 10, 24, 0xC1u * p);
    std::vector<Height1Prime> primes = {Height1Prime::P()};
    for (const auto& pi : gen.pool) primes.push_back(Height1Prime::from_poly(pi));
    for (int t = 0; t < 30; ++t) {
      auto f = gen.ser(1), g = gen.ser(1);
      auto cf = cycles::c1(f, primes);
      auto cg = cycles::c1(g, primes);
      Cycle sum = cf;
      for (const auto& [y, m] : cg.entries) sum.add(y, m);
      CHECK(cycles::c1(series::mul(f, g), primes) == sum);
    }
  }
}

TEST_CASE("character multiplication is compatible with Bernoulli twists") {
  // multiplicativity of the table transfers through the exact cyclotomic layer
  std::mt19937_64 rng(0xB1u);
  auto chars = lvalues::enumerate_characters(28, 6, false);
  for (int t = 0; t < 50; ++t) {
    const auto& a = chars[rng() % chars.size()];
    const auto& b = chars[rng() % chars.size()];
    auto ab = a.mul(b);
    for (i64 x = 1; x < 28; ++x) {
      if (std::gcd(x, i64(28)) != 1) continue;
      i64 e = (a(x) * (ab.M / a.M) + b(x) * (ab.M / b.M)) % ab.M;
      CHECK(ab(x) == e);
    }
  }
}

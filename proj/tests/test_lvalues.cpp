#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "charsym/lvalues.hpp"

using namespace charsym;
using lvalues::CycloElement;
using lvalues::CycloRing;
using lvalues::DirichletCharacter;
using lvalues::UnitGroup;

static CycloElement ce(i64 M, std::vector<i64> n, i64 d) {
  return CycloElement(M, std::move(n), d);
}

/* Galois twist zeta -> zeta^k applied to the numerator coordinates */
static std::vector<i64> galois_num(const CycloRing& cy, const std::vector<i64>& num, i64 k) {
  std::vector<i64> acc(size_t(cy.deg), 0);
  for (size_t i = 0; i < num.size(); ++i) {
    if (!num[i]) continue;
    auto z = cy.zeta_pow(i64(i) * k);
    for (int j = 0; j < cy.deg; ++j) acc[size_t(j)] += num[i] * z[size_t(j)];
  }
  return acc;
}

TEST_CASE("kronecker symbol on fixed inputs") {
  CHECK(lvalues::kronecker(-4, 3) == -1);
  CHECK(lvalues::kronecker(-4, 5) == 1);
  CHECK(lvalues::kronecker(-4, 2) == 0);
  CHECK(lvalues::kronecker(5, 2) == -1);
  CHECK(lvalues::kronecker(8, 3) == -1);
  CHECK(lvalues::kronecker(8, 7) == 1);
  CHECK(lvalues::kronecker(-3, 2) == -1);
  CHECK(lvalues::kronecker(-3, 7) == 1);
  CHECK(lvalues::kronecker(-20, 3) == 1);
  CHECK(lvalues::kronecker(12, 35) == 1);
  CHECK(lvalues::kronecker(12, 7) == -1);
}

TEST_CASE("fundamental discriminant classification") {
  for (i64 d : {1, -3, -4, -7, -8, -11, -15, -19, -20, -35, 5, 8, 12, 13, -120})
    CHECK(lvalues::is_fundamental(d));
  for (i64 d : {0, 2, 3, -5, -6, 9, -9, -12, -16, 25, -18})
    CHECK_FALSE(lvalues::is_fundamental(d));
  CHECK_THROWS_AS(lvalues::kronecker(-6, 5), NotFundamental);
  CHECK_THROWS_AS(lvalues::kronecker(9, 2), NotFundamental);
  CHECK_THROWS_AS(lvalues::kronecker_char(-12), NotFundamental);
}

TEST_CASE("kronecker symbol is completely multiplicative in the argument") {
  std::mt19937_64 rng(0x20260815u);
  const i64 discs[] = {-3, -4, -8, -15, -20, 5, 12};
  for (int t = 0; t < 60; ++t) {
    i64 d = discs[rng() % 7];
    i64 a = i64(rng() % 2000) - 1000;
    i64 b = i64(rng() % 2000) - 1000;
    CHECK(lvalues::kronecker(d, a * b) == lvalues::kronecker(d, a) * lvalues::kronecker(d, b));
  }
}

TEST_CASE("unit group structure for prime, prime power, and composite moduli") {
  UnitGroup g28(28);
  std::vector<i64> o28;
  for (auto [g, d] : g28.gens) o28.push_back(d);
  CHECK(o28 == std::vector<i64>{2, 6});

  UnitGroup g8(8);
  std::vector<i64> o8;
  for (auto [g, d] : g8.gens) o8.push_back(d);
  CHECK(o8 == std::vector<i64>{2, 2});

  UnitGroup g555(555);
  std::vector<i64> o555;
  for (auto [g, d] : g555.gens) o555.push_back(d);
  CHECK(o555 == std::vector<i64>{2, 4, 36});

  // dlog really inverts exponentiation at the stored generators
  for (i64 a = 1; a < 28; ++a) {
    if (!g28.is_unit(a)) {
      CHECK(g28.dlog[size_t(a)].empty());
      continue;
    }
    const auto& ex = g28.dlog[size_t(a)];
    REQUIRE(ex.size() == 2);
    i64 v = 1;
    for (size_t i = 0; i < ex.size(); ++i)
      for (int e = 0; e < ex[i]; ++e) v = v * g28.gens[i].first % 28;
    CHECK(v == a);
  }
}

TEST_CASE("character enumeration counts and conductors") {
  CHECK(lvalues::enumerate_characters(5, 4, false).size() == 4);
  CHECK(lvalues::enumerate_characters(4, 2, true).size() == 1);
  CHECK(lvalues::enumerate_characters(28, 6, true).size() == 6);
  CHECK(lvalues::enumerate_characters(28, 6, false).size() == 12);
  CHECK(lvalues::enumerate_characters(1, 1, true).size() == 1);

  std::multiset<i64> cond;
  for (const auto& chi : lvalues::enumerate_characters(28, 6, true))
    cond.insert(chi.conductor());
  CHECK(cond == std::multiset<i64>{7, 7, 28, 28, 28, 28});

  CHECK_THROWS_AS(lvalues::enumerate_characters(0, 1, true), PreconditionError);
  CHECK_THROWS_AS(lvalues::enumerate_characters(5, 0, true), PreconditionError);
}

TEST_CASE("character arithmetic round trips") {
  auto chars5 = lvalues::enumerate_characters(5, 4, true);
  REQUIRE(chars5.size() == 2);
  const auto& chi = chars5[0];
  CHECK(chi.order() == 4);
  CHECK(chi.odd());
  CHECK(chi.conductor() == 5);
  CHECK(chi(10) == -1);  // nonunit argument

  auto triv = chi.mul(chi.inv());
  CHECK(triv.order() == 1);
  auto sq = chi.mul(chi);
  CHECK(sq.order() == 2);
  auto pw = chi.power(3);
  CHECK(pw.table == chi.inv().table);
  CHECK(pw.mul(chi).order() == 1);

  auto up = chi.rescale(12);
  CHECK(up.M == 12);
  CHECK(up.order() == 4);
  for (i64 a = 1; a < 5; ++a)
    if (chi(a) >= 0) CHECK(up(a) * 4 == chi(a) * 12);
  CHECK_THROWS_AS(chi.rescale(6), PreconditionError);

  // imprimitive extension mod 20 restricts back to the same character
  for (const auto& psi : lvalues::enumerate_characters(20, 4, true))
    if (psi.conductor() == 5) {
      auto prim = psi.primitive();
      CHECK(prim.modulus == 5);
      for (i64 a = 1; a < 5; ++a) {
        i64 b = a;
        while (std::gcd(b, i64(20)) != 1) b += 5;
        CHECK(prim(a) == psi(b));
      }
    }
}

TEST_CASE("first generalized Bernoulli values on fixed characters") {
  auto k4 = lvalues::kronecker_char(-4);
  CHECK(lvalues::bernoulli1(k4) == ce(2, {-1}, 2));
  auto k3 = lvalues::kronecker_char(-3);
  CHECK(lvalues::bernoulli1(k3) == ce(2, {-1}, 3));

  auto chars5 = lvalues::enumerate_characters(5, 4, true);
  REQUIRE(chars5.size() == 2);
  CHECK(chars5[0](2) == 1);  // zeta_4 at the generator 2
  CHECK(lvalues::bernoulli1(chars5[0]) == ce(4, {-3, -1}, 5));
  CHECK(lvalues::bernoulli1(chars5[1]) == ce(4, {-3, 1}, 5));

  auto triv = lvalues::enumerate_characters(5, 1, true).at(0);
  CHECK_THROWS_AS(lvalues::bernoulli1(triv), TrivialCharacter);
}

TEST_CASE("row and column orthogonality of character tables") {
  for (i64 q : {12, 28}) {
    UnitGroup G(q);
    i64 phi = 1, exponent = 1;
    for (auto [g, d] : G.gens) phi *= d, exponent = std::lcm(exponent, d);
    auto all = lvalues::enumerate_characters(q, exponent, false);  // every character
    REQUIRE(i64(all.size()) == phi);
    i64 M = all[0].M;
    CycloRing cy(M);
    // rows: sum over the group of chi(a) vanishes unless chi is trivial
    for (const auto& chi : all) {
      std::vector<i64> acc(size_t(cy.deg), 0);
      for (i64 a = 0; a < q; ++a) {
        i64 e = chi(a);
        if (e < 0) continue;
        auto z = cy.zeta_pow(e * (M / chi.M));
        for (int j = 0; j < cy.deg; ++j) acc[size_t(j)] += z[size_t(j)];
      }
      if (chi.order() == 1) {
        CHECK(acc[0] == phi);
      } else {
        CHECK(std::all_of(acc.begin(), acc.end(), [](i64 c) { return c == 0; }));
      }
    }
    // columns: sum over characters of chi(a) vanishes unless a is the identity
    for (i64 a = 1; a < q; ++a) {
      if (!G.is_unit(a)) continue;
      std::vector<i64> acc(size_t(cy.deg), 0);
      for (const auto& chi : all) {
        auto z = cy.zeta_pow(chi(a) * (M / chi.M));
        for (int j = 0; j < cy.deg; ++j) acc[size_t(j)] += z[size_t(j)];
      }
      if (a == 1) {
        CHECK(acc[0] == phi);
      } else {
        CHECK(std::all_of(acc.begin(), acc.end(), [](i64 c) { return c == 0; }));
      }
    }
  }
}

TEST_CASE("even nontrivial characters have vanishing first Bernoulli value") {
  for (i64 q : {5, 8, 12, 28}) {
    UnitGroup G(q);
    i64 exponent = 1;
    for (auto [g, d] : G.gens) exponent = std::lcm(exponent, d);
    for (const auto& chi : lvalues::enumerate_characters(q, exponent, false)) {
      if (chi.order() == 1 || chi.odd()) continue;
      CHECK(lvalues::bernoulli1(chi).is_zero());
    }
  }
}

TEST_CASE("Galois action permutes Bernoulli values with character powers") {
  for (const auto& chi : lvalues::enumerate_characters(7, 6, true)) {
    auto B = lvalues::bernoulli1(chi);
    CycloRing cy(chi.M);
    for (i64 k : {1, 5}) {  // units mod 6
      auto Bk = lvalues::bernoulli1(chi.power(k));
      auto twisted = ce(chi.M, galois_num(cy, B.num, k), B.den);
      CHECK(twisted == Bk);
    }
  }
}

TEST_CASE("canonical place and Teichmueller data at fixed primes") {
  auto P37 = lvalues::make_place(37, 36, 8);
  CHECK(P37.e == 1);
  i64 r37 = 0;
  auto om = lvalues::teich(P37, &r37);
  CHECK(r37 == 18);
  CHECK(om.order() == 36);
  CHECK(om.odd());

  auto P5 = lvalues::make_place(5, 4, 10);
  CHECK(P5.e == 1);
  i64 r5 = 0;
  auto om5 = lvalues::teich(P5, &r5);
  CHECK(r5 == 2);
  // the Teichmueller table is exactly the order-4 character sending 2 to zeta_4
  auto chars5 = lvalues::enumerate_characters(5, 4, true);
  CHECK(om5.table == chars5[0].table);

  auto P512 = lvalues::make_place(5, 12, 10);
  CHECK(P512.e == 2);
  i64 r512 = 0;
  auto om512 = lvalues::teich(P512, &r512);
  CHECK(r512 == 2);
  CHECK(om512.order() == 4);

  // multiplicativity of the table on units
  for (i64 a = 1; a < 37; ++a)
    for (i64 b = 1; b < 37; ++b)
      CHECK(om(a * b) == (om(a) + om(b)) % 36);

  CHECK_THROWS_AS(lvalues::make_place(5, 10, 6), RamifiedConductor);
  CHECK_THROWS_AS(lvalues::make_place(4, 3, 6), PreconditionError);
}

TEST_CASE("embedding, valuation, and residue at the canonical place") {
  auto P = lvalues::make_place(5, 4, 10);
  // zeta_4 lands on a square root of -1
  auto i2 = padic::mul(P.rho, P.rho);
  CHECK(padic::add(i2, padic::PadicElement::one(P.W)).is_zero());

  auto v1 = lvalues::val_b(P, ce(4, {5}, 1));
  CHECK(v1.val == 1);
  CHECK_FALSE(v1.saturated);
  auto v2 = lvalues::val_b(P, ce(4, {3, 10}, 5));
  CHECK(v2.val == -1);
  auto v0 = lvalues::val_b(P, ce(4, {}, 1));
  CHECK(v0.saturated);
  CHECK(v0.val == 10);

  // -1/2 reduces to 2 mod 5
  auto res = lvalues::residue_at(P, ce(2, {-1}, 2));
  CHECK(res == std::vector<u64>{2});
  CHECK_THROWS_AS(lvalues::residue_at(P, ce(4, {1}, 5)), PrecisionExhausted);
}

TEST_CASE("classical Bernoulli numbers mod p") {
  CHECK(lvalues::bernoulli_mod_p(5) == std::vector<u64>{1, 2, 1, 0});
  CHECK(lvalues::bernoulli_mod_p(7) == std::vector<u64>{1, 3, 6, 0, 3, 0});
}

TEST_CASE("Teichmueller Bernoulli values match the classical congruence") {
  auto P = lvalues::make_place(37, 36, 8);
  auto om = lvalues::teich(P);
  auto Bc = lvalues::bernoulli_mod_p(37);
  std::vector<i64> zeros;
  for (i64 k = 1; k <= 33; k += 2) {
    auto B = lvalues::bernoulli1(om.power(k).primitive());
    auto res = lvalues::residue_at(P, B);
    REQUIRE(res.size() == 1);
    u64 want = Bc[size_t(k + 1)] * powmod(u64(k + 1), 35, 37) % 37;
    CHECK(res[0] == want);
    if (res[0] == 0) zeros.push_back(k);
  }
  CHECK(zeros == std::vector<i64>{31});
}

TEST_CASE("p-adic L value at zero on fixed characters") {
  auto k4 = lvalues::kronecker_char(-4);
  auto k3 = lvalues::kronecker_char(-3);

  auto a = lvalues::lp_at_zero(k4, 5);
  CHECK(a.exceptional);
  CHECK(a.value.is_zero());
  CHECK(a.saturated);
  CHECK(a.divisible);

  auto b = lvalues::lp_at_zero(k4, 7);
  CHECK_FALSE(b.exceptional);
  CHECK(b.value == ce(2, {1}, 1));
  CHECK(b.valuation == 0);
  CHECK_FALSE(b.divisible);

  auto c = lvalues::lp_at_zero(k3, 7);
  CHECK(c.exceptional);
  CHECK(c.value.is_zero());
  CHECK(c.divisible);

  auto P = lvalues::make_place(37, 36, 8);
  auto om = lvalues::teich(P);
  auto d = lvalues::lp_at_zero(om.power(31), 37, 8);
  CHECK(d.divisible);
  CHECK_FALSE(d.exceptional);
  CHECK(d.valuation >= 1);

  auto e = lvalues::lp_at_zero(om.power(4).mul(k4, 36), 37, 8);
  CHECK_FALSE(e.divisible);
  CHECK(e.valuation == 0);

  CHECK_THROWS_AS(lvalues::lp_at_zero(om.power(5).mul(k4, 36), 37, 8), EvenCharacter);
  CHECK_THROWS_AS(lvalues::lp_at_zero(lvalues::kronecker_char(12), 7), EvenCharacter);

  // p dividing the order of the character values forces a ramified place
  auto mod11 = lvalues::enumerate_characters(11, 10, true);
  REQUIRE(!mod11.empty());
  bool threw = false;
  try {
    lvalues::lp_at_zero(mod11[0], 5);
  } catch (const RamifiedConductor&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("valuations at the canonical place are Frobenius invariant") {
  // p = 3 acts with order 4 on the values of an order-10 character
  auto P = lvalues::make_place(3, 10, 12);
  CHECK(P.e == 4);
  for (const auto& chi : lvalues::enumerate_characters(11, 10, true)) {
    if (!chi.odd()) continue;
    auto v = lvalues::val_b(P, lvalues::bernoulli1(chi));
    auto vf = lvalues::val_b(P, lvalues::bernoulli1(chi.power(3)));
    CHECK(v.val == vf.val);
  }
}

TEST_CASE("divisibility search at 37 with the default discriminants") {
  const std::vector<i64> discs = {-3, -4, -7, -8, -11, -15, -19, -20};
  auto res = lvalues::divisibility_search(37, 37, 36, discs, 8);
  CHECK(res.M == 36);
  CHECK(res.e == 1);
  CHECK(res.teich_base == 18);
  CHECK(res.psi_count == 12);
  REQUIRE(res.hits.size() == 9);

  auto P = lvalues::make_place(37, 36, 8);
  auto om = lvalues::teich(P);

  std::set<i64> div1_discs;
  int div1_psi = -1, div2_psi = -1;
  i64 div2_disc = 0;
  for (const auto& h : res.hits) {
    CHECK_FALSE(h.both_divisible);
    CHECK_FALSE(h.exc1);
    CHECK_FALSE(h.exc2);
    if (h.div1) {
      CHECK(h.v1 == 1);
      CHECK(h.v2 == 0);
      CHECK((div1_psi == -1 || div1_psi == h.psi_index));
      div1_psi = h.psi_index;
      div1_discs.insert(h.kappa_disc);
    } else {
      CHECK(h.div2);
      CHECK(h.v1 == 0);
      CHECK(h.v2 == 1);
      div2_psi = h.psi_index;
      div2_disc = h.kappa_disc;
    }
  }
  CHECK(div1_discs == std::set<i64>(discs.begin(), discs.end()));
  CHECK(div2_disc == -19);

  // identify the two special characters as explicit Teichmueller powers
  auto psis = lvalues::search_characters(37, 36, 36);
  REQUIRE(div1_psi >= 0);
  REQUIRE(div2_psi >= 0);
  CHECK(psis[size_t(div1_psi)].table == om.power(5).table);
  CHECK(psis[size_t(div2_psi)].table == om.power(17).table);
}

TEST_CASE("divisibility search at 5 with conductor 555") {
  const std::vector<i64> discs = {-3, -4, -7, -8, -11, -15, -19, -20};
  auto res = lvalues::divisibility_search(5, 555, 4, discs, 10);
  CHECK(res.M == 4);
  CHECK(res.e == 1);
  CHECK(res.psi_count == 4);
  REQUIRE(res.hits.size() == 14);

  std::map<int, std::multiset<i64>> div2_by_psi;
  std::set<i64> div1_discs;
  int div1_psi = -1;
  int v2_two = 0;
  for (const auto& h : res.hits) {
    CHECK_FALSE(h.both_divisible);
    CHECK_FALSE(h.exc1);
    CHECK_FALSE(h.exc2);
    if (h.div1) {
      CHECK_FALSE(h.div2);
      CHECK(h.v1 == 1);
      CHECK((div1_psi == -1 || div1_psi == h.psi_index));
      div1_psi = h.psi_index;
      div1_discs.insert(h.kappa_disc);
    } else {
      div2_by_psi[h.psi_index].insert(h.kappa_disc);
      if (h.v2 == 2) {
        ++v2_two;
        CHECK(h.kappa_disc == -19);
      } else {
        CHECK(h.v2 == 1);
      }
    }
  }
  CHECK(div1_discs == std::set<i64>(discs.begin(), discs.end()));
  REQUIRE(div2_by_psi.size() == 3);
  CHECK(div2_by_psi.count(div1_psi) == 0);
  std::multiset<std::multiset<i64>> shape;
  for (auto& [idx, ds] : div2_by_psi) shape.insert(ds);
  CHECK(shape == std::multiset<std::multiset<i64>>{{-8, -15}, {-3, -19}, {-7, -11}});
  CHECK(v2_two == 1);
}

TEST_CASE("divisibility search finds a doubly divisible pair at conductor 555") {
  auto res = lvalues::divisibility_search(5, 555, 4, {-35}, 10);
  bool found = false;
  for (const auto& h : res.hits)
    if (h.both_divisible && !h.exc1 && !h.exc2) {
      CHECK(h.v1 >= 1);
      CHECK(h.v2 >= 1);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("divisibility search at 5 with conductor 28 is empty") {
  const std::vector<i64> discs = {-3, -4, -7, -8, -11, -15, -19, -20};
  auto res = lvalues::divisibility_search(5, 28, 6, discs, 10);
  CHECK(res.M == 12);
  CHECK(res.e == 2);
  CHECK(res.teich_base == 2);
  CHECK(res.psi_count == 2);
  CHECK(res.hits.empty());

  // the first factor has absolute norm 4, so no prime over 5 can divide it
  auto psis = lvalues::search_characters(28, 6, 12);
  REQUIRE(psis.size() == 2);
  CycloRing cy(12);
  for (const auto& psi : psis) {
    auto x = lvalues::bernoulli1(psi.inv().primitive());
    auto y = lvalues::bernoulli1(psi.primitive());
    auto prod = cy.mul(x.num, y.num);
    CHECK(prod[0] == 4 * x.den * y.den);
    for (size_t j = 1; j < prod.size(); ++j) CHECK(prod[j] == 0);
  }
}

TEST_CASE("divisibility search rejects bad parameters") {
  CHECK_THROWS_AS(lvalues::divisibility_search(5, 11, 5, {-4}), RamifiedConductor);
  CHECK_THROWS_AS(lvalues::divisibility_search(5, 555, 4, {-6}), NotFundamental);
  CHECK_THROWS_AS(lvalues::divisibility_search(5, 555, 4, {5}), NotFundamental);
}

#include <catch2/catch_amalgamated.hpp>

#include "charsym/padic.hpp"

using namespace charsym;
using namespace charsym::padic;

TEST_CASE("teichmuller fixed values") {
  auto R = PadicRing::make(5, 4);
  CHECK(teichmuller(R, 1) == PadicElement::one(R));
  CHECK(teichmuller(R, 4).c[0] == 624);  // -1 lifts itself

  auto R2 = PadicRing::make(5, 2);
  CHECK(teichmuller(R2, 2).c[0] == 7);  // 7^5 = 16807 = 7 mod 25
}

TEST_CASE("teichmuller is a root of unity and multiplicative") {
  auto R = PadicRing::make(7, 6);
  for (u64 a = 1; a < 7; ++a) {
    auto t = teichmuller(R, a);
    CHECK(pow(t, 6) == PadicElement::one(R));
    CHECK(t.c[0] % 7 == a);
  }
  for (u64 a = 1; a < 7; ++a)
    for (u64 b = 1; b < 7; ++b)
      CHECK(teichmuller(R, a * b % 7) == mul(teichmuller(R, a), teichmuller(R, b)));
}

TEST_CASE("teichmuller error on non-unit") {
  auto R = PadicRing::make(5, 3);
  CHECK_THROWS_AS(teichmuller(R, 0), NonUnitResidue);
  CHECK_THROWS_AS(teichmuller(PadicElement::from_int(R, 25)), NonUnitResidue);
}

TEST_CASE("valuation") {
  auto R = PadicRing::make(5, 4);
  CHECK(!valuation(PadicElement::zero(R)));  // ">= N" sentinel
  CHECK(valuation(PadicElement::from_int(R, 50)) == 2);
  CHECK(valuation(PadicElement::from_int(R, 3)) == 0);

  auto h = std::vector<u64>{2, 1, 1};  // y^2 + y + 2, irreducible mod 5
  auto W = PadicRing::make(5, 4, h);
  CHECK(valuation(PadicElement(W, {5, 25})) == 1);
  CHECK(valuation(PadicElement(W, {0, 0})) == std::nullopt);
}

TEST_CASE("valuation additivity under product") {
  auto R = PadicRing::make(5, 8);
  auto x = PadicElement::from_int(R, 75);   // v=2
  auto y = PadicElement::from_int(R, 10);   // v=1
  CHECK(valuation(mul(x, y)) == 3);
}

TEST_CASE("invert fixed values and involution") {
  auto R = PadicRing::make(5, 4);
  CHECK(invert(PadicElement::one(R)) == PadicElement::one(R));
  auto x = PadicElement::from_int(R, 2);
  auto y = invert(x);
  CHECK(y.c[0] == 313);
  CHECK(mul(x, y) == PadicElement::one(R));
  CHECK(invert(y) == x);
  CHECK_THROWS_AS(invert(PadicElement::from_int(R, 5)), NonUnit);
}

TEST_CASE("invert in an unramified extension") {
  auto W = PadicRing::make(5, 6, {2, 1, 1});  // F_25 Witt slice
  auto x = PadicElement(W, {3, 4});
  auto y = invert(x);
  CHECK(mul(x, y) == PadicElement::one(W));
  auto t = teichmuller(x);
  CHECK(pow(t, 24) == PadicElement::one(W));
}

TEST_CASE("ring validation") {
  CHECK_THROWS_AS(PadicRing::make(4, 3), PreconditionError);
  CHECK_THROWS_AS(PadicRing::make(5, 0), PreconditionError);
  // y^2 - 1 splits mod 5
  CHECK_THROWS_AS(PadicRing::make(5, 3, std::vector<u64>{4, 0, 1}), PreconditionError);
  // p^N overflow guard
  CHECK_THROWS_AS(PadicRing::make(5, 40), PreconditionError);
  CHECK_THROWS_AS(check_same_ring(PadicElement::one(PadicRing::make(5, 3)),
                                  PadicElement::one(PadicRing::make(7, 3))),
                  RingMismatch);
}

TEST_CASE("from_int wraps negatives") {
  auto R = PadicRing::make(5, 3);
  CHECK(PadicElement::from_int(R, -1).c[0] == 124);
  CHECK(PadicElement::from_int(R, -125).c[0] == 0);
  CHECK(add(PadicElement::from_int(R, -7), PadicElement::from_int(R, 7)).is_zero());
}

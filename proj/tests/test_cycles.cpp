#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "charsym/cycles.hpp"

using namespace charsym;
using cycles::Height1Prime;
using cycles::PrimeLabel;
using padic::PadicRing;
using series::SeriesRing;
using series::parse_poly;
using series::parse_series;

static padic::RingPtr Z5(int n) { return PadicRing::make(5, n); }

TEST_CASE("snf_order on fixed presentations") {
  auto R = Z5(4);
  CHECK(cycles::snf_order(cycles::matrix_from_ints(R, {{5, 0}, {0, 25}}), R) == 3);
  CHECK(cycles::snf_order(cycles::matrix_from_ints(R, {{1, 2}, {3, 4}}), R) == 0);
  CHECK_THROWS_AS(cycles::snf_order(cycles::matrix_from_ints(R, {{5, 0}, {0, 0}}), R),
                  PrecisionExhausted);
  // more relations than generators: Z/(5, 25) = Z/5
  CHECK(cycles::snf_order(cycles::matrix_from_ints(R, {{5}, {25}}), R) == 1);
  // fewer relations than generators: a free summand survives
  CHECK_THROWS_AS(cycles::snf_order(cycles::matrix_from_ints(R, {{5, 0}}), R),
                  PrecisionExhausted);
  // row operations hide the diagonal: [[5,25],[10,75]] ~ diag(5,25)
  CHECK(cycles::snf_order(cycles::matrix_from_ints(R, {{5, 25}, {10, 75}}), R) == 3);
}

TEST_CASE("snf_order matches the determinant valuation on full-rank squares") {
  auto R = Z5(8);
  std::mt19937_64 rng(2026'08'15);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<i64>> m(3, std::vector<i64>(3));
    for (auto& row : m)
      for (auto& v : row) v = i64(rng() % 400) - 200;
    auto M = cycles::matrix_from_ints(R, m);
    auto det = series::det_padic(M, R);
    auto vd = padic::valuation(det);
    if (!vd) continue;
    CHECK(cycles::snf_order(M, R) == *vd);
  }
}

TEST_CASE("c1 picks out prime multiplicities") {
  auto S = SeriesRing::make(Z5(6), 1, 10);
  std::vector<Height1Prime> primes = {
      Height1Prime::P(),
      Height1Prime::from_poly(parse_poly("t", S)),
      Height1Prime::from_poly(parse_poly("t^2 + 5", S)),
  };

  auto c = cycles::c1(series::mul_int(parse_series("t^2 + 5", S), 5), primes);
  REQUIRE(c.entries.size() == 2);
  CHECK(c.entries.at(PrimeLabel::height1("P")) == 1);
  CHECK(c.entries.at(PrimeLabel::height1("t^2 + 5")) == 1);

  CHECK(cycles::c1(parse_series("1 + t", S), primes).is_zero());

  auto c3 = cycles::c1(parse_series("t^3", S), primes);
  REQUIRE(c3.entries.size() == 1);
  CHECK(c3.entries.at(PrimeLabel::height1("t")) == 3);
}

TEST_CASE("c1 is additive on products") {
  auto S = SeriesRing::make(Z5(6), 1, 12);
  std::vector<Height1Prime> primes = {
      Height1Prime::P(),
      Height1Prime::from_poly(parse_poly("t", S)),
      Height1Prime::from_poly(parse_poly("t + 5", S)),
  };
  auto f = series::mul_int(parse_series("t + 5", S), 5);
  auto g = parse_series("t^2", S);
  auto cf = cycles::c1(f, primes);
  auto cg = cycles::c1(g, primes);
  auto cfg = cycles::c1(series::mul(f, g), primes);
  cycles::Cycle sum = cf;
  for (const auto& [y, m] : cg.entries) sum.add(y, m);
  CHECK(cfg == sum);
}

TEST_CASE("c2_quotient fixed lengths") {
  auto S = SeriesRing::make(Z5(6), 1, 10);
  CHECK(cycles::c2_quotient(parse_series("t", S), parse_series("5", S)) == 1);
  CHECK(cycles::c2_quotient(parse_series("t^2 + 5", S), parse_series("5", S)) == 2);
  CHECK(cycles::c2_quotient(parse_series("t - 5", S), parse_series("t - 30", S)) == 2);
  // both internal routes agree and are exposed
  auto routes = cycles::c2_quotient_routes(parse_series("t - 5", S), parse_series("t - 30", S));
  CHECK(routes.snf == 2);
  CHECK(routes.resultant == 2);
}

TEST_CASE("c2_quotient symmetry and additivity") {
  auto S = SeriesRing::make(Z5(8), 1, 10);
  auto f1 = parse_series("t^2 + 5", S);
  auto f2 = parse_series("t - 5", S);
  auto f3 = parse_series("5", S);
  CHECK(cycles::c2_quotient(f1, f2) == cycles::c2_quotient(f2, f1));
  CHECK(cycles::c2_quotient(f1, f3) == cycles::c2_quotient(f3, f1));
  CHECK(cycles::c2_quotient(f1, series::mul(f2, f3)) ==
        cycles::c2_quotient(f1, f2) + cycles::c2_quotient(f1, f3));
  CHECK(cycles::c2_quotient(f2, series::mul(f1, f1)) == 2 * cycles::c2_quotient(f2, f1));
}

TEST_CASE("c2_quotient rejects height-1 pairs") {
  auto S = SeriesRing::make(Z5(6), 1, 10);
  CHECK_THROWS_AS(
      cycles::c2_quotient(parse_series("t", S), series::mul(parse_series("t", S),
                                                            parse_series("1 + t", S))),
      NotHeightTwo);
  CHECK_THROWS_AS(
      cycles::c2_quotient(parse_series("5", S), series::mul_int(parse_series("t", S), 5)),
      NotHeightTwo);
}

TEST_CASE("c2_quotient survives deep p-parts in f2") {
  auto S = SeriesRing::make(Z5(4), 1, 6);
  // f2 = 25: mu2 = 2 leaves one digit of working precision
  CHECK(cycles::c2_quotient(parse_series("t", S), parse_series("25", S)) == 2);
  CHECK(cycles::c2_quotient(parse_series("t - 5", S), parse_series("25", S)) == 2);
}

TEST_CASE("c2_quotient matches the omega tower lengths") {
  auto S = SeriesRing::make(Z5(8), 1, 8);
  auto f = parse_series("t - 5", S);
  auto e = cycles::growth_orders(f, 1);
  auto w1 = cycles::omega_poly(S->base, 5);
  CHECK(cycles::c2_quotient(f, series::poly_to_series(S, w1)) == e[1]);
}

TEST_CASE("c2_graph fixed cycles") {
  auto S2 = SeriesRing::make(Z5(6), 2, 8);
  auto S1 = SeriesRing::make(Z5(6), 1, 8);
  auto t1 = series::TruncatedSeries::variable(S2, 0);
  auto t2 = series::TruncatedSeries::variable(S2, 1);

  // phi = 0: f2(t1, 0) reinterpreted in codimension 2
  auto c0 = cycles::c2_graph(series::TruncatedSeries(S2), series::pow(t1, 3),
                             {Height1Prime::from_poly(parse_poly("t", S1))});
  REQUIRE(c0.entries.size() == 1);
  CHECK(c0.entries.at(PrimeLabel::height2("t2", "t1")) == 3);

  // phi = t1, f2 = t2 + 5
  auto c1g = cycles::c2_graph(t1, series::add(t2, series::TruncatedSeries::constant(S2, 5)),
                              {Height1Prime::from_poly(parse_poly("t + 5", S1))});
  REQUIRE(c1g.entries.size() == 1);
  CHECK(c1g.entries.at(PrimeLabel::height2("t2 - t1", "t1 + 5")) == 1);

  // phi = t1^2, f2 = t2
  auto c2g = cycles::c2_graph(series::pow(t1, 2), t2,
                              {Height1Prime::from_poly(parse_poly("t", S1))});
  REQUIRE(c2g.entries.size() == 1);
  CHECK(c2g.entries.at(PrimeLabel::height2("t2 - t1^2", "t1")) == 2);
}

TEST_CASE("c2_graph rejects non-graph input") {
  auto S2 = SeriesRing::make(Z5(6), 2, 8);
  auto t2 = series::TruncatedSeries::variable(S2, 1);
  CHECK_THROWS_AS(cycles::c2_graph(t2, t2, {}), NotGraphForm);
  auto c5 = series::TruncatedSeries::constant(S2, 5);
  CHECK_THROWS_AS(cycles::c2_graph(c5, t2, {}), NotGraphForm);
}

TEST_CASE("growth_orders fixed towers") {
  auto S = SeriesRing::make(Z5(10), 1, 8);
  CHECK(cycles::growth_orders(parse_series("t - 5", S), 2) == std::vector<i64>{1, 2, 3});
  CHECK(cycles::growth_orders(parse_series("1 + t", S), 3) == std::vector<i64>{0, 0, 0, 0});
  CHECK(cycles::growth_orders(parse_series("5", S), 3) == std::vector<i64>{1, 5, 25, 125});
}

TEST_CASE("growth_orders rejects tower divisors") {
  auto S = SeriesRing::make(Z5(8), 1, 8);
  CHECK_THROWS_AS(cycles::growth_orders(parse_series("t", S), 2), NotCoprime);
  // xi_1 = omega_1 / omega_0 has degree 4
  auto xi1 = cycles::omega_tower_factors(S->base, 1)[1];
  CHECK_THROWS_AS(cycles::growth_orders(series::poly_to_series(S, xi1), 2), NotCoprime);
}

TEST_CASE("growth_orders agrees with the dense SNF path") {
  auto S = SeriesRing::make(Z5(10), 1, 6);
  for (const char* txt : {"t - 5", "t^2 + 5", "t^2 + 5*t + 5", "5"}) {
    auto f = parse_series(txt, S);
    auto e = cycles::growth_orders(f, 2);
    CHECK(cycles::growth_order_snf(f, 1) == e[1]);
    CHECK(cycles::growth_order_snf(f, 2) == e[2]);
  }
}

TEST_CASE("fit_growth fixed fits") {
  auto fit = cycles::fit_growth({1, 2, 3, 4}, 5);
  CHECK(fit.mu == 0);
  CHECK(fit.lambda == 1);
  CHECK(fit.nu == 1);
  CHECK(fit.n0 == 0);

  fit = cycles::fit_growth({0, 0, 0, 0}, 5);
  CHECK(fit.mu == 0);
  CHECK(fit.lambda == 0);
  CHECK(fit.nu == 0);
  CHECK(fit.n0 == 0);

  fit = cycles::fit_growth({1, 5, 25, 125}, 5);
  CHECK(fit.mu == 1);
  CHECK(fit.lambda == 0);
  CHECK(fit.nu == 0);
  CHECK(fit.n0 == 0);

  // irregular head, affine tail from n = 1
  fit = cycles::fit_growth({7, 2, 3, 4, 5}, 5);
  CHECK(fit.mu == 0);
  CHECK(fit.lambda == 1);
  CHECK(fit.nu == 1);
  CHECK(fit.n0 == 1);
}

TEST_CASE("fit_growth failure modes") {
  CHECK_THROWS_AS(cycles::fit_growth({4, 3, 2, 1}, 5), NoStableFit);
  CHECK_THROWS_AS(cycles::fit_growth({0, 1, 0, 0}, 5), NoStableFit);
  CHECK_THROWS_AS(cycles::fit_growth({1, 2, 3}, 5), PreconditionError);
}

TEST_CASE("fit of the tower recovers the Weierstrass invariants") {
  auto S = SeriesRing::make(Z5(12), 1, 8);
  struct Case {
    const char* txt;
    int scale;
    i64 mu, lambda;
  };
  for (const auto& c : std::initializer_list<Case>{
           {"t - 5", 1, 0, 1},
           {"t^2 + 5", 1, 0, 2},
           {"t^2 + 5", 5, 1, 2},
           {"1 + t", 25, 2, 0},
           {"t^3 + 5*t + 10", 1, 0, 3},
       }) {
    auto f = series::mul_int(parse_series(c.txt, S), c.scale);
    auto w = series::weierstrass_prepare(f);
    REQUIRE(w.mu == c.mu);
    REQUIRE(w.lambda() == c.lambda);
    auto fit = cycles::fit_growth(cycles::growth_orders(f, 3), 5);
    CHECK(fit.mu == c.mu);
    CHECK(fit.lambda == c.lambda);
  }
}

TEST_CASE("cycle formatting is deterministic") {
  cycles::Cycle c;
  c.add(PrimeLabel::height1("t"), 2);
  c.add(PrimeLabel::height1("P"), 1);
  c.add(PrimeLabel::height1("t"), -2);
  CHECK(c.str() == "1*(P)");
  c.add(PrimeLabel::height2("t2 - t1", "t1 + 5"), 3);
  CHECK(c.str() == "1*(P) + 3*(t2 - t1, t1 + 5)");
}

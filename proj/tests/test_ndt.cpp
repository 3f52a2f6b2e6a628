#include <doctest.h>

#include <sstream>

#include "ccrelay/combinatorics.hpp"
#include "ccrelay/errors.hpp"
#include "ccrelay/ndt.hpp"

using namespace ccrelay;

TEST_CASE("proposed NDT") {
  CHECK(ndt_proposed(3, 1, 2).T_ul == Rational(2, 3));
  CHECK(ndt_proposed(5, 2, 3).T_ul == Rational(3, 5));
  const auto r = ndt_proposed(10, 2, 4);
  CHECK(r.T_ul == Rational(4, 3));
  CHECK(r.T_ul == r.T_dl);
  CHECK(r.strategy == Strategy::Proposed);
}

TEST_CASE("reference strategies") {
  CHECK(ndt_strategy_a(10, 2, 4).T_ul == Rational(2));
  CHECK(ndt_strategy_a(3, 1, 2).T_ul == Rational(1));
  CHECK(ndt_strategy_b(10, 2, 4).T_ul == Rational(8, 3));
  CHECK(ndt_strategy_b(3, 1, 2).T_ul == Rational(1));
  CHECK(ndt_strategy_a(10, 2, 4).T_dl == Rational(4, 3));
  CHECK(ndt_strategy_b(10, 2, 4).T_dl == Rational(4, 3));
}

TEST_CASE("orderings and identities over a grid") {
  for (int K = 1; K <= 12; ++K) {
    for (int t = 0; t < K; ++t) {
      for (int L = 1; t + L <= K; ++L) {
        const auto p = ndt_proposed(K, t, L);
        const auto a = ndt_strategy_a(K, t, L);
        const auto b = ndt_strategy_b(K, t, L);
        CHECK(p.T_ul == p.T_dl);
        CHECK(p.T_ul <= a.T_ul);
        CHECK(p.T_ul <= b.T_ul);
        CHECK((p.T_ul == a.T_ul) == (t == 0));
        CHECK((p.T_ul == b.T_ul) == (L == 1));
        // T_A,ul = T_dl (t+L)/L
        CHECK(a.T_ul == a.T_dl * Rational(t + L, L));
      }
    }
  }
}

TEST_CASE("NDT from a transmission count") {
  for (int K = 2; K <= 9; ++K) {
    for (int t = 1; t < K; ++t) {
      for (int L = 1; t + L <= K; ++L) {
        const auto n = binomial(K, t + L) * binomial(t + L - 1, t);
        CHECK(ndt_from_count(n, K, t, L) == ndt_proposed(K, t, L).T_ul);
      }
    }
  }
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(ndt_proposed(3, 2, 2), ConfigError);
  CHECK_THROWS_AS(ndt_strategy_a(3, -1, 2), ConfigError);
  CHECK_THROWS_AS(ndt_strategy_b(3, 1, 0), ConfigError);
}

TEST_CASE("gamma sweep") {
  const auto rows = sweep_gamma(10, 4, default_gamma_grid());
  CHECK(rows.size() == 101 * 3);
  auto at = [&](double gamma, Strategy s) {
    for (const auto& r : rows) {
      if (std::abs(r.gamma - gamma) < 1e-12 && r.strategy == s) return r;
    }
    FAIL("missing row");
    return SweepRow{};
  };
  CHECK(at(0.2, Strategy::A).T_ul == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(at(0.2, Strategy::B).T_ul == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(at(0.2, Strategy::Proposed).T_ul == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(at(0.0, Strategy::A).T_ul == doctest::Approx(2.5));
  CHECK(at(0.0, Strategy::B).T_ul == doctest::Approx(10.0));
  CHECK(at(0.0, Strategy::Proposed).T_ul == doctest::Approx(2.5));
  for (auto s : {Strategy::A, Strategy::B, Strategy::Proposed}) {
    CHECK(at(1.0, s).T_ul == doctest::Approx(0.0));
    CHECK(at(1.0, s).T_dl == doctest::Approx(0.0));
  }
  CHECK(at(0.2, Strategy::A).integral_t);
  CHECK_FALSE(at(0.25, Strategy::A).integral_t);
  CHECK(at(0.25, Strategy::A).t == doctest::Approx(2.5));
}

TEST_CASE("sweep CSV format") {
  std::ostringstream os;
  write_sweep_csv(os, sweep_gamma(10, 4, {0.2}));
  CHECK(os.str() ==
        "gamma,t,strategy,T_ul,T_dl\n"
        "0.200000,2.000000,A,2.000000,1.333333\n"
        "0.200000,2.000000,B,2.666667,1.333333\n"
        "0.200000,2.000000,proposed,1.333333,1.333333\n");
}

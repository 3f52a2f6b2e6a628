#include <doctest.h>

#include <random>

#include "ccrelay/channel.hpp"
#include "ccrelay/errors.hpp"

using namespace ccrelay;
using Complex = std::complex<double>;

namespace {

SystemParams P(int K, int t, int L) {
  SystemParams p;
  p.K = K;
  p.t = t;
  p.L = L;
  return p;
}

double max_residual(const StagePlan& st, const ChannelState& ch, const StageBeamformers& bf) {
  double worst = 0.0;
  for (const auto& [Q, rb] : bf.receive) {
    for (int j : st.users.minus(Q)) {
      worst = std::max(worst, std::abs((rb.v * ch.of(j))(0)));
      worst = std::max(worst, std::abs(ch.of(j).dot(bf.w(Q))));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("channels are seeded and shaped") {
  const auto p = P(3, 1, 2);
  const auto a = generate_channels(p, 1);
  const auto b = generate_channels(p, 1);
  const auto c = generate_channels(p, 2);
  REQUIRE(a.h.size() == 3);
  CHECK(a.antennas() == 2);
  for (int k = 1; k <= 3; ++k) {
    CHECK(a.of(k) == b.of(k));
    CHECK(a.of(k) != c.of(k));
  }
}

TEST_CASE("three-user nulling against an explicit orthogonal complement") {
  const auto p = P(3, 1, 2);
  const auto ch = generate_channels(p, 4);
  const auto st = enumerate_stages(p).front();
  const auto rv = zf_receive_vector({1, 2}, st, ch);
  const auto pc = zf_precoder({1, 2}, st, ch);
  // v h_3 = 0 has the 1-dim solution v ∝ [h_3(1), -h_3(0)]
  const Eigen::VectorXcd& h3 = ch.of(3);
  Eigen::VectorXcd v_ref(2);
  v_ref << h3(1), -h3(0);
  Eigen::VectorXcd w_ref(2);
  w_ref << -std::conj(h3(1)), std::conj(h3(0));
  CHECK(rv.v.transpose().isApprox(canonicalize(v_ref), 1e-12));
  CHECK(pc.w.isApprox(canonicalize(w_ref), 1e-12));
  CHECK(std::abs((rv.v * h3)(0)) <= kNullTolerance);
  CHECK(std::abs(h3.dot(pc.w)) <= kNullTolerance);
  CHECK(std::abs((rv.v * ch.of(1))(0)) > kSignalTolerance);
  CHECK(std::abs((rv.v * ch.of(2))(0)) > kSignalTolerance);
  CHECK(rv.v.norm() == doctest::Approx(1.0));
  CHECK(pc.w.norm() == doctest::Approx(1.0));
  CHECK_FALSE(rv.v.transpose().isApprox(pc.w, 1e-6));
}

TEST_CASE("single antenna gives the trivial beamformer") {
  const auto p = P(3, 2, 1);
  const auto ch = generate_channels(p, 3);
  for (const auto& st : enumerate_stages(p)) {
    const auto bf = derive_beamformers(st, ch, p.t);
    for (const auto& [Q, rb] : bf.receive) {
      CHECK(rb.v.size() == 1);
      CHECK(rb.v(0) == Complex(1.0));
      CHECK(bf.w(Q)(0) == Complex(1.0));
    }
  }
}

TEST_CASE("nulling residuals over seeded draws") {
  for (auto [K, t, L] : {std::tuple{5, 2, 3}, {6, 2, 3}, {7, 3, 3}, {6, 1, 4}}) {
    const auto p = P(K, t, L);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto ch = generate_channels(p, seed);
      for (const auto& st : enumerate_stages(p)) {
        const auto bf = derive_beamformers(st, ch, t);
        CHECK(bf.receive.size() == binomial(t + L, t + 1));
        CHECK(max_residual(st, ch, bf) <= kNullTolerance);
      }
    }
  }
}

TEST_CASE("canonical form") {
  Eigen::VectorXcd x(3);
  x << Complex(0, 0), Complex(0, 2), Complex(1, 1);
  const auto c = canonicalize(x);
  CHECK(c.norm() == doctest::Approx(1.0));
  CHECK(c(0) == Complex(0.0));
  CHECK(c(1).imag() == doctest::Approx(0.0));
  CHECK(c(1).real() > 0.0);
  CHECK(canonicalize(c).isApprox(c, 1e-15));
  CHECK(canonicalize(Complex(0, -3) * x).isApprox(c, 1e-15));
  CHECK_THROWS_AS(canonicalize(Eigen::VectorXcd::Zero(2)), DegeneracyError);
}

TEST_CASE("beamformers are deterministic given the channels") {
  const auto p = P(5, 2, 3);
  const auto ch = generate_channels(p, 8);
  const auto st = enumerate_stages(p).front();
  const auto a = derive_beamformers(st, ch, 2);
  const auto b = derive_beamformers(st, ch, 2);
  for (const auto& [Q, rb] : a.receive) {
    CHECK(rb.v == b.v(Q));
    CHECK(a.w(Q) == b.w(Q));
  }
  CHECK_THROWS_AS(a.v({1, 2}), DomainError);
}

TEST_CASE("degenerate channels are rejected") {
  const auto p = P(3, 1, 2);
  auto duplicate = [](std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    ChannelState s;
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXcd h(2);
      for (auto& e : h) e = {g(rng), g(rng)};
      s.h.push_back(h);
    }
    s.h[1] = s.h[0];
    return s;
  };
  CHECK_THROWS_AS(generate_channels(p, 1, duplicate), DegeneracyError);

  // one bad draw is retried
  int calls = 0;
  auto flaky = [&](std::mt19937_64& rng) {
    ChannelState s = duplicate(rng);
    if (calls++ > 0) s.h[1] = Eigen::VectorXcd::Ones(2);
    return s;
  };
  CHECK_NOTHROW(generate_channels(p, 1, flaky));
  CHECK(calls == 2);

  ChannelState same = duplicate(*std::make_unique<std::mt19937_64>(1));
  CHECK_THROWS_AS(check_generic_position(same, p), DegeneracyError);
}

TEST_CASE("noise samples") {
  CHECK(sample_noise(4, 3, 0.0, 1).isZero(0.0));
  CHECK(sample_noise(4, 3, 1.0, 1) == sample_noise(4, 3, 1.0, 1));
  const auto n = sample_noise(1000000, 1, 1.0, 2);
  const double var = n.squaredNorm() / static_cast<double>(n.size());
  CHECK(std::abs(var - 1.0) <= 0.02);
  const double re_var = n.real().squaredNorm() / static_cast<double>(n.size());
  CHECK(std::abs(re_var - 0.5) <= 0.01);
  CHECK(std::abs(n.mean()) < 0.01);
  const auto big = sample_noise(100000, 1, 4.0, 3);
  CHECK(std::abs(big.squaredNorm() / 1e5 - 4.0) <= 0.08);
}

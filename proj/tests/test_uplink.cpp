#include <doctest.h>

#include <map>
#include <set>

#include "ccrelay/errors.hpp"
#include "ccrelay/scheme.hpp"
#include "ccrelay/uplink.hpp"
#include "fixtures.hpp"

using namespace ccrelay;

namespace {

SystemParams P(int K, int t, int L) {
  SystemParams p;
  p.K = K;
  p.t = t;
  p.L = L;
  return p;
}

struct World {
  SystemParams params;
  FileLibrary library;
  ChannelState channels;
  std::map<int, CacheContents> caches;
  std::vector<StagePlan> stages;

  World(SystemParams p, std::uint64_t seed)
      : params(p),
        library(generate_library(p, seed)),
        channels(generate_channels(p, seed)),
        caches(build_all_caches(library)),
        stages(enumerate_stages(p)) {}
};

double residual(const FormalSignal& got, const FormalSignal& want) {
  double worst = 0.0;
  const FormalSignal d = got.signal_part() - want;
  for (const auto& [id, c] : d.terms()) worst = std::max(worst, std::abs(c));
  return worst;
}

void check_fixture(const SystemParams& p, const std::vector<fixtures::UlCell>& cells) {
  const World w(p, 1);
  const SymbolicBackend sym;
  const StagePlan& st = w.stages.front();
  std::set<std::pair<UserSet, int>> seen;
  for (const auto& cell : cells) {
    const double amp = ul_amplitude(cell.k, st, p);
    FormalSignal want;
    for (const auto& id : cell.ids) want += FormalSignal::symbol(id, cell.sign * amp);
    const auto got = ul_transmit_signal(cell.k, cell.S, st, w.caches.at(cell.k), p, sym);
    INFO("S=" << cell.S.str() << " k=" << cell.k << " got " << got.str());
    CHECK(got.terms().size() == cell.ids.size());
    CHECK(residual(got, want) == 0.0);
    seen.insert({cell.S, cell.k});
  }
  CHECK(seen.size() == st.transmissions.size() * static_cast<std::size_t>(st.users.size()));
}

}  // namespace

TEST_CASE("power allocation") {
  CHECK(power_ratio(PowerRole::Lone, P(5, 2, 3)) == Rational(1));
  CHECK(power_ratio(PowerRole::Member, P(5, 2, 3)) == Rational(1, 2));
  CHECK(power_ratio(PowerRole::OutsiderSummand, P(5, 2, 3)) == Rational(1, 2));
  CHECK(power_ratio(PowerRole::Member, P(3, 1, 2)) == Rational(2, 3));
  auto p = P(5, 2, 3);
  p.P_ul = 4.0;
  CHECK(apply_power_allocation(PowerRole::Lone, p) == doctest::Approx(2.0));
  CHECK(apply_power_allocation(PowerRole::Member, p) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("every user spends N_T P_UL per stage") {
  for (int K = 2; K <= 9; ++K) {
    for (int t = 1; t < K; ++t) {
      for (int L = 1; t + L <= K; ++L) {
        const auto p = P(K, t, L);
        const auto n_t = static_cast<std::int64_t>(p.transmissions_per_stage());
        for (const auto& st : enumerate_stages(p)) {
          for (int k : st.users) CHECK(stage_energy_ratio(k, st, p) == Rational(n_t));
          break;  // stages are relabelings of each other
        }
      }
    }
  }
  const auto p = P(5, 2, 3);
  for (int k = 1; k <= 5; ++k) {
    CHECK(stage_energy_ratio(k, enumerate_stages(p).front(), p) == Rational(6));
  }
}

TEST_CASE("UL signals of the three-user example") { check_fixture(P(3, 1, 2), fixtures::three_user_ul()); }

TEST_CASE("UL signals of the five-user example") { check_fixture(P(5, 2, 3), fixtures::five_user_ul()); }

TEST_CASE("UL signal preconditions") {
  const World w(P(5, 2, 3), 1);
  const SymbolicBackend sym;
  const auto& st = w.stages.front();
  CHECK_THROWS_AS(ul_transmit_signal(1, {1, 2, 3}, st, w.caches.at(2), w.params, sym), DomainError);
  const auto other = P(5, 1, 3);
  const auto lib = generate_library(other, 1);
  const auto wrong = build_cache(lib, 4);
  CHECK_THROWS_AS(ul_transmit_signal(4, {1, 2, 3}, st, wrong, w.params, sym),
                  PlacementConsistencyError);
  const auto outside = make_stage(1, {1, 2, 3, 4}, P(5, 1, 3));
  CHECK_THROWS_AS(ul_transmit_signal(5, {1, 2}, outside, wrong, other, sym), DomainError);
}

TEST_CASE("BS reception in the three-user example") {
  const World w(P(3, 1, 2), 2);
  const SymbolicBackend sym;
  const auto& st = w.stages.front();
  const auto tx = build_ul_transmission({1, 2}, st, w.caches, w.params, sym);
  const auto rx = bs_receive(tx, w.channels, sym);
  REQUIRE(rx.y.size() == 2);
  const double a1 = ul_amplitude(1, st, w.params);
  const double a2 = ul_amplitude(2, st, w.params);
  using fixtures::sp;
  for (int a = 0; a < 2; ++a) {
    FormalSignal want = FormalSignal::symbol(sp('B', {1}), w.channels.of(1)[a] * a1) +
                        FormalSignal::symbol(sp('A', {2}), w.channels.of(2)[a] * a2) +
                        FormalSignal::symbol(sp('B', {3}), -w.channels.of(3)[a] * a2) +
                        FormalSignal::symbol(sp('A', {3}), -w.channels.of(3)[a] * a2);
    CHECK(residual(rx.y[static_cast<std::size_t>(a)], want) <= 1e-15);
    CHECK(rx.y[static_cast<std::size_t>(a)].noise_terms().size() == 1);
  }
  // distinct draws per antenna, one source per transmission
  CHECK(rx.y[0].noise_sources() == rx.y[1].noise_sources());
  CHECK_FALSE(rx.y[0].noise_terms() == rx.y[1].noise_terms());
}

TEST_CASE("three-user extraction") {
  const World w(P(3, 1, 2), 3);
  const SymbolicBackend sym;
  const auto& st = w.stages.front();
  const auto bf = derive_beamformers(st, w.channels, 1);
  const auto rx = run_uplink_stage(st, w.caches, w.channels, w.params, sym);
  const auto cws = extract_codewords(st, rx, bf, w.channels, w.params, sym);
  CHECK(cws.size() == 3);
  const double amp = ul_amplitude(2, st, w.params);
  using fixtures::sp;
  const auto& A12 = cws.at({1, 2});
  const FormalSignal want12 =
      FormalSignal::symbol(sp('B', {1}), (bf.v({1, 2}) * w.channels.of(1))(0)) +
      FormalSignal::symbol(sp('A', {2}), (bf.v({1, 2}) * w.channels.of(2))(0) * amp);
  CHECK(residual(A12.payload, want12) <= 1e-12);
  CHECK(A12.sign == 1);
  const auto& B23 = cws.at({2, 3});
  const FormalSignal want23 =
      FormalSignal::symbol(sp('C', {2}), -(bf.v({2, 3}) * w.channels.of(2))(0) * amp) +
      FormalSignal::symbol(sp('B', {3}), -(bf.v({2, 3}) * w.channels.of(3))(0) * amp);
  CHECK(residual(B23.payload, want23) <= 1e-12);
  CHECK(B23.sign == -1);
  CHECK(B23.noise_record.size() == 2);
  CHECK(B23.payload.noise_sources() == B23.noise_record);
}

TEST_CASE("five-user extraction matches the codeword table") {
  const World w(P(5, 2, 3), 4);
  const SymbolicBackend sym;
  const auto& st = w.stages.front();
  const auto bf = derive_beamformers(st, w.channels, 2);
  const auto rx = run_uplink_stage(st, w.caches, w.channels, w.params, sym);
  const auto set_a = extract_codewords_A(st, rx, bf, w.channels, w.params, sym);
  const auto set_b = extract_codewords_B(st, rx, bf, w.channels, w.params, sym);
  CHECK(set_a.size() == 6);
  CHECK(set_b.size() == 4);
  const auto all = extract_codewords(st, rx, bf, w.channels, w.params, sym);
  for (const auto& cell : fixtures::five_user_codewords()) {
    const auto& cw = all.at(cell.Q);
    CHECK(cw.sign == cell.sign);
    FormalSignal want;
    for (const auto& [l, id] : cell.members) {
      const Complex c =
          double(cell.sign) * (bf.v(cell.Q) * w.channels.of(l))(0) * ul_amplitude(l, st, w.params);
      want += FormalSignal::symbol(id, c);
      CHECK(std::abs(cw.coefficients.at(l) - c) <= 1e-15);
    }
    INFO(cell.Q.str() << ": " << cw.payload.str());
    CHECK(cw.payload.terms().size() == 3);
    CHECK(residual(cw.payload, want) <= 1e-12);
    CHECK(cw.noise_record.size() == (cell.sign > 0 ? 1u : 3u));
  }
}

TEST_CASE("missing receptions are reported") {
  const World w(P(3, 1, 2), 5);
  const SymbolicBackend sym;
  const auto& st = w.stages.front();
  const auto bf = derive_beamformers(st, w.channels, 1);
  auto rx = run_uplink_stage(st, w.caches, w.channels, w.params, sym);
  rx.erase(UserSet{1, 3});
  CHECK_THROWS_AS(extract_codewords_A(st, rx, bf, w.channels, w.params, sym), StageIncompleteError);
  CHECK_THROWS_AS(extract_codewords_B(st, rx, bf, w.channels, w.params, sym), StageIncompleteError);
}

TEST_CASE("every uncached subpacket is carried by exactly one codeword slot (K <= 8)") {
  for (int K = 2; K <= 8; ++K) {
    for (int t = 1; t < K; ++t) {
      for (int L = 1; t + L <= K; ++L) {
        const auto p = P(K, t, L);
        std::map<SubpacketId, int> hits;
        std::uint64_t transmissions = 0;
        for (const auto& st : enumerate_stages(p)) {
          transmissions += st.transmissions.size();
          for (const auto& Q : combinations(st.users, t + 1)) {
            for (int l : Q) ++hits[codeword_subpacket(Q, l, st)];
          }
        }
        CHECK(transmissions == p.num_stages() * p.transmissions_per_stage());
        std::size_t expected = 0;
        for (int n = 1; n <= K; ++n) {
          for (const auto& id : file_subpackets(p, n)) {
            if (id.P.contains(n)) continue;
            ++expected;
            CHECK(hits[id] == 1);
          }
        }
        CHECK(hits.size() == expected);
      }
    }
  }
}

TEST_CASE("numeric UL equals the symbolic expression evaluated") {
  for (auto [K, t, L] : {std::tuple{3, 1, 2}, {5, 2, 3}, {6, 2, 3}}) {
    const World w(P(K, t, L), 6);
    const NumericBackend num(w.library, w.params, {1.0, 1.0, 99});
    const SymbolicBackend sym;
    for (const auto& st : w.stages) {
      const auto bf = derive_beamformers(st, w.channels, t);
      const auto rs = run_uplink_stage(st, w.caches, w.channels, w.params, sym);
      const auto rn = run_uplink_stage(st, w.caches, w.channels, w.params, num);
      for (const auto& [S, r] : rs) {
        for (std::size_t a = 0; a < r.y.size(); ++a) {
          const Eigen::VectorXcd diff = evaluate(r.y[a], num) - rn.at(S).y[a];
          CHECK(diff.norm() <= 1e-12 * (1.0 + rn.at(S).y[a].norm()));
        }
      }
      const auto cs = extract_codewords(st, rs, bf, w.channels, w.params, sym);
      const auto cn = extract_codewords(st, rn, bf, w.channels, w.params, num);
      for (const auto& [Q, cw] : cs) {
        const Eigen::VectorXcd diff = evaluate(cw.payload, num) - cn.at(Q).payload;
        CHECK(diff.norm() <= 1e-9 * cn.at(Q).payload.norm());
        CHECK(codeword_expected_power(cw, 1.0) == doctest::Approx(expected_power(
                                                      cw.payload, SymbolicBackend({1.0, 1.0, 0}))));
      }
    }
  }
}

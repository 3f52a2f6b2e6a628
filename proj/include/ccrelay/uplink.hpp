#pragma once

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "ccrelay/backend.hpp"
#include "ccrelay/channel.hpp"
#include "ccrelay/combinatorics.hpp"
#include "ccrelay/errors.hpp"
#include "ccrelay/placement.hpp"

namespace ccrelay {

/// How a user carries one subpacket in a UL transmission.
enum class PowerRole {
  Lone,             ///< the stage's lone user, always a member of S
  Member,           ///< any other user k in S
  OutsiderSummand,  ///< one of the t+1 summands sent by a user k not in S
};

/// Power of one subpacket relative to P_UL. Lone: 1. Otherwise
/// N_T / (C(t+L-2, t-1) + (t+1) C(t+L-2, t)).
Rational power_ratio(PowerRole role, const SystemParams& params);

/// Amplitude applied to a unit-power encoded block: sqrt(P_UL * ratio).
double apply_power_allocation(PowerRole role, const SystemParams& params);

/// Amplitude of every subpacket user k sends within the stage.
double ul_amplitude(int k, const StagePlan& stage, const SystemParams& params);

/// The subpacket that member l of Q contributes to codeword Q:
/// W^{<l>_Q}_{Q \ {<l>_Q}, q(Q)}.
SubpacketId codeword_subpacket(const UserSet& Q, int l, const StagePlan& stage);

/// Energy user k spends over the stage's N_T transmissions, in units of P_UL,
/// obtained by walking the set M and the role of k in each transmission.
Rational stage_energy_ratio(int k, const StagePlan& stage, const SystemParams& params);

/// 1-based position of S within stage.transmissions.
int transmission_slot(const UserSet& S, const StagePlan& stage);

template <class Sig>
struct UlTransmission {
  int stage_index = 0;
  UserSet S;
  int slot = 0;
  std::map<int, Sig> per_user_signal;
};

template <class Sig>
struct UlReception {
  int stage_index = 0;
  UserSet S;
  int slot = 0;
  std::vector<Sig> y;  ///< one entry per BS antenna
};

/// A size-(t+1) combination the BS extracted for the DL step.
template <class Sig>
struct Codeword {
  UserSet Q;
  int sign = 1;  ///< +1 when the lone user is in Q (set A), -1 otherwise (set B)
  Sig payload;
  /// member l -> coefficient of codeword_subpacket(Q, l): sign * (v_Q h_l) * amplitude
  std::map<int, Complex> coefficients;
  /// BS noise draws forwarded in the payload (through v_Q).
  std::set<NoiseLabel> noise_record;
};

template <class Sig>
using CodewordSet = std::map<UserSet, Codeword<Sig>>;

/// Expected payload power: sum |coefficient|^2 plus the forwarded BS noise
/// (v_Q is unit norm, so each draw adds one noise variance).
template <class Sig>
double codeword_expected_power(const Codeword<Sig>& cw, double ul_noise_variance) {
  double p = 0.0;
  for (const auto& [l, c] : cw.coefficients) p += std::norm(c);
  return p + ul_noise_variance * static_cast<double>(cw.noise_record.size());
}

/// x^k(S): for k in S the single subpacket intended for <k>_S; otherwise the
/// negated sum over j in S of the subpackets k holds for codewords S+{k}-{j}.
template <SignalBackend Backend>
typename Backend::Signal ul_transmit_signal(int k, const UserSet& S, const StagePlan& stage,
                                            const CacheContents& cache, const SystemParams& params,
                                            const Backend& backend) {
  using Sig = typename Backend::Signal;
  if (!stage.users.contains(k)) {
    throw DomainError("user " + std::to_string(k) + " is not in stage " + stage.users.str());
  }
  if (cache.user() != k) throw DomainError("cache does not belong to user " + std::to_string(k));
  auto leaf = [&](const SubpacketId& id) {
    if (!cache.holds(id)) {
      throw PlacementConsistencyError("user " + std::to_string(k) + " must send uncached " +
                                      id.str());
    }
    return backend.symbol(id);
  };
  const double amp = ul_amplitude(k, stage, params);
  if (S.contains(k)) {
    return Sig(Complex(amp) * leaf(codeword_subpacket(S, k, stage)));
  }
  Sig sum = backend.zero();
  for (int j : S) {
    sum = sum + leaf(codeword_subpacket(S.with(k).without(j), k, stage));
  }
  return Sig(Complex(-amp) * sum);
}

template <SignalBackend Backend>
UlTransmission<typename Backend::Signal> build_ul_transmission(
    const UserSet& S, const StagePlan& stage, const std::map<int, CacheContents>& caches,
    const SystemParams& params, const Backend& backend) {
  UlTransmission<typename Backend::Signal> tx{stage.stage_index, S, transmission_slot(S, stage), {}};
  for (int k : stage.users) {
    tx.per_user_signal.emplace(k, ul_transmit_signal(k, S, stage, caches.at(k), params, backend));
  }
  return tx;
}

/// y_BS(S) = sum_k h_k x^k(S) + n_BS, with a fresh noise draw per transmission.
template <SignalBackend Backend>
UlReception<typename Backend::Signal> bs_receive(const UlTransmission<typename Backend::Signal>& tx,
                                                 const ChannelState& channels,
                                                 const Backend& backend) {
  using Sig = typename Backend::Signal;
  const int L = channels.antennas();
  UlReception<Sig> rx{tx.stage_index, tx.S, tx.slot, {}};
  rx.y.reserve(static_cast<std::size_t>(L));
  for (int a = 0; a < L; ++a) {
    Sig ya = backend.noise({NoiseLabel::Kind::BaseStation, tx.stage_index, tx.slot, a + 1});
    for (const auto& [k, x] : tx.per_user_signal) ya = ya + Sig(channels.of(k)[a] * x);
    rx.y.push_back(std::move(ya));
  }
  return rx;
}

/// v y for a row vector v and a per-antenna signal y.
template <SignalBackend Backend>
typename Backend::Signal combine(const Eigen::RowVectorXcd& v,
                                 const std::vector<typename Backend::Signal>& y,
                                 const Backend& backend) {
  using Sig = typename Backend::Signal;
  Sig out = backend.zero();
  for (int a = 0; a < v.size(); ++a) out = out + Sig(v[a] * y[static_cast<std::size_t>(a)]);
  return out;
}

template <class Sig>
using ReceptionMap = std::map<UserSet, UlReception<Sig>>;

/// Set A: v_S y_BS(S) for every S in M.
template <SignalBackend Backend>
std::vector<Codeword<typename Backend::Signal>> extract_codewords_A(
    const StagePlan& stage, const ReceptionMap<typename Backend::Signal>& receptions,
    const StageBeamformers& beamformers, const ChannelState& channels, const SystemParams& params,
    const Backend& backend) {
  std::vector<Codeword<typename Backend::Signal>> out;
  for (const UserSet& S : stage.transmissions) {
    auto it = receptions.find(S);
    if (it == receptions.end()) {
      throw StageIncompleteError("missing UL reception " + S.str() + " in stage " +
                                 std::to_string(stage.stage_index));
    }
    const Eigen::RowVectorXcd& v = beamformers.v(S);
    Codeword<typename Backend::Signal> cw{S, +1, combine(v, it->second.y, backend), {}, {}};
    for (int l : S) {
      cw.coefficients[l] = (v * channels.of(l))(0) * ul_amplitude(l, stage, params);
    }
    cw.noise_record.insert({NoiseLabel::Kind::BaseStation, stage.stage_index, it->second.slot, 0});
    out.push_back(std::move(cw));
  }
  return out;
}

/// Set B: for every (t+1)-subset R of the stage without the lone user,
/// sum over j in R of v_R y_BS(R + {lone} - {j}).
template <SignalBackend Backend>
std::vector<Codeword<typename Backend::Signal>> extract_codewords_B(
    const StagePlan& stage, const ReceptionMap<typename Backend::Signal>& receptions,
    const StageBeamformers& beamformers, const ChannelState& channels, const SystemParams& params,
    const Backend& backend) {
  using Sig = typename Backend::Signal;
  std::vector<Codeword<Sig>> out;
  for (const UserSet& R : combinations(stage.users.without(stage.lone_user), params.t + 1)) {
    const Eigen::RowVectorXcd& v = beamformers.v(R);
    Codeword<Sig> cw{R, -1, backend.zero(), {}, {}};
    for (int j : R) {
      const UserSet S = R.with(stage.lone_user).without(j);
      auto it = receptions.find(S);
      if (it == receptions.end()) {
        throw StageIncompleteError("missing UL reception " + S.str() + " in stage " +
                                   std::to_string(stage.stage_index));
      }
      cw.payload = cw.payload + combine(v, it->second.y, backend);
      cw.noise_record.insert(
          {NoiseLabel::Kind::BaseStation, stage.stage_index, it->second.slot, 0});
    }
    for (int l : R) {
      cw.coefficients[l] = -(v * channels.of(l))(0) * ul_amplitude(l, stage, params);
    }
    out.push_back(std::move(cw));
  }
  return out;
}

/// Runs all N_T UL transmissions of a stage and returns the BS receptions.
template <SignalBackend Backend>
ReceptionMap<typename Backend::Signal> run_uplink_stage(const StagePlan& stage,
                                                        const std::map<int, CacheContents>& caches,
                                                        const ChannelState& channels,
                                                        const SystemParams& params,
                                                        const Backend& backend) {
  ReceptionMap<typename Backend::Signal> receptions;
  for (const UserSet& S : stage.transmissions) {
    receptions.emplace(S, bs_receive(build_ul_transmission(S, stage, caches, params, backend),
                                     channels, backend));
  }
  return receptions;
}

/// Sets A and B keyed by Q; requires every reception of the stage.
template <SignalBackend Backend>
CodewordSet<typename Backend::Signal> extract_codewords(
    const StagePlan& stage, const ReceptionMap<typename Backend::Signal>& receptions,
    const StageBeamformers& beamformers, const ChannelState& channels, const SystemParams& params,
    const Backend& backend) {
  CodewordSet<typename Backend::Signal> all;
  for (auto& cw : extract_codewords_A(stage, receptions, beamformers, channels, params, backend)) {
    all.emplace(cw.Q, std::move(cw));
  }
  for (auto& cw : extract_codewords_B(stage, receptions, beamformers, channels, params, backend)) {
    all.emplace(cw.Q, std::move(cw));
  }
  return all;
}

}  // namespace ccrelay

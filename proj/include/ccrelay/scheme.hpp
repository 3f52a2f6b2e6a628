#pragma once

// One stage end to end: UL transmissions, BS extraction, DL broadcast and the
// per-user cancel/solve chain. Written against a SignalBackend so the same
// code runs numerically and symbolically.

#include <map>
#include <vector>

#include "ccrelay/downlink.hpp"
#include "ccrelay/uplink.hpp"

namespace ccrelay {

template <class Sig>
struct StageOutcome {
  int stage_index = 0;
  ReceptionMap<Sig> receptions;
  CodewordSet<Sig> codewords;
  std::vector<DlTransmission<Sig>> downlink;
  /// user -> Q -> solved scalar (before dividing by the gain)
  std::map<int, std::map<UserSet, Sig>> solved;
  /// user -> energy spent over the stage's UL transmissions
  std::map<int, double> ul_energy;
};

/// Mean power per sample of a numeric block.
inline double signal_energy(const Eigen::VectorXcd& x, const NumericBackend&) {
  return x.size() == 0 ? 0.0 : x.squaredNorm() / static_cast<double>(x.size());
}

inline double signal_energy(const FormalSignal& x, const SymbolicBackend& backend) {
  return expected_power(x, backend);
}

template <SignalBackend Backend>
StageOutcome<typename Backend::Signal> run_stage(const StagePlan& stage,
                                                 const std::map<int, CacheContents>& caches,
                                                 const ChannelState& channels,
                                                 const StageBeamformers& beamformers,
                                                 const CoefficientCodebook& codebook,
                                                 const SystemParams& params,
                                                 const Backend& backend) {
  using Sig = typename Backend::Signal;
  StageOutcome<Sig> out;
  out.stage_index = stage.stage_index;

  for (const UserSet& S : stage.transmissions) {
    auto tx = build_ul_transmission(S, stage, caches, params, backend);
    for (const auto& [k, x] : tx.per_user_signal) out.ul_energy[k] += signal_energy(x, backend);
    out.receptions.emplace(S, bs_receive(tx, channels, backend));
  }
  out.codewords = extract_codewords(stage, out.receptions, beamformers, channels, params, backend);

  const int n_t = static_cast<int>(params.transmissions_per_stage());
  std::map<int, std::vector<Sig>> cleaned;
  for (int j = 1; j <= n_t; ++j) {
    out.downlink.push_back(
        bs_dl_transmit(j, stage, out.codewords, codebook, beamformers, params, backend));
    for (int k : stage.users) {
      const auto obs = user_receive(k, out.downlink.back(), channels, backend);
      cleaned[k].push_back(cancel_cached_interference(k, obs, caches.at(k), stage, channels,
                                                      beamformers, codebook, params, backend));
    }
  }
  for (int k : stage.users) {
    out.solved.emplace(k, solve_user_system(k, cleaned.at(k), codebook, stage, params, backend));
  }
  return out;
}

/// Caches of all K users.
std::map<int, CacheContents> build_all_caches(const FileLibrary& library);

}  // namespace ccrelay

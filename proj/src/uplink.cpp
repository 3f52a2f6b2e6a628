#include "ccrelay/uplink.hpp"

#include <algorithm>

namespace ccrelay {

Rational power_ratio(PowerRole role, const SystemParams& params) {
  if (role == PowerRole::Lone) return Rational(1);
  const int t = params.t;
  const int L = params.L;
  const auto n_t = static_cast<std::int64_t>(params.transmissions_per_stage());
  const auto denom = static_cast<std::int64_t>(binomial(t + L - 2, t - 1)) +
                     static_cast<std::int64_t>(t + 1) *
                         static_cast<std::int64_t>(binomial(t + L - 2, t));
  return Rational(n_t, denom);
}

double apply_power_allocation(PowerRole role, const SystemParams& params) {
  return std::sqrt(params.P_ul * boost::rational_cast<double>(power_ratio(role, params)));
}

double ul_amplitude(int k, const StagePlan& stage, const SystemParams& params) {
  // Member and outsider summands share one amplitude; set-B cancellation
  // depends on it.
  return apply_power_allocation(k == stage.lone_user ? PowerRole::Lone : PowerRole::Member,
                                params);
}

SubpacketId codeword_subpacket(const UserSet& Q, int l, const StagePlan& stage) {
  const int target = circular_successor(l, Q);
  return {target, Q.without(target), stage.q_of(Q)};
}

Rational stage_energy_ratio(int k, const StagePlan& stage, const SystemParams& params) {
  Rational energy(0);
  for (const UserSet& S : stage.transmissions) {
    if (k == stage.lone_user) {
      energy += power_ratio(PowerRole::Lone, params);
    } else if (S.contains(k)) {
      energy += power_ratio(PowerRole::Member, params);
    } else {
      energy += static_cast<std::int64_t>(S.size()) *
                power_ratio(PowerRole::OutsiderSummand, params);
    }
  }
  return energy;
}

int transmission_slot(const UserSet& S, const StagePlan& stage) {
  auto it = std::find(stage.transmissions.begin(), stage.transmissions.end(), S);
  if (it == stage.transmissions.end()) {
    throw DomainError(S.str() + " is not a transmission of stage " +
                      std::to_string(stage.stage_index));
  }
  return static_cast<int>(it - stage.transmissions.begin()) + 1;
}

}  // namespace ccrelay

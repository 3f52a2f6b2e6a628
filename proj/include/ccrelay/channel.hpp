#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "ccrelay/combinatorics.hpp"
#include "ccrelay/params.hpp"

namespace ccrelay {

/// |v h_j| and |h_j^H w| for nulled users must not exceed this.
inline constexpr double kNullTolerance = 1e-9;
/// Non-nulled gains below this count as degenerate.
inline constexpr double kSignalTolerance = 1e-6;
inline constexpr int kChannelRetryCap = 16;

/// Perfect CSI: h[k-1] is the L x 1 channel of user k.
struct ChannelState {
  std::vector<Eigen::VectorXcd> h;

  int antennas() const { return h.empty() ? 0 : static_cast<int>(h.front().size()); }
  const Eigen::VectorXcd& of(int user) const { return h.at(static_cast<std::size_t>(user - 1)); }
};

/// Row vector v with v h_j = 0 for the stage users outside Q.
struct ReceiveBeamformer {
  UserSet Q;
  int stage_index = 0;
  Eigen::RowVectorXcd v;
};

/// Column vector w with h_j^H w = 0 for the stage users outside Q.
struct Precoder {
  UserSet Q;
  int stage_index = 0;
  Eigen::VectorXcd w;
};

struct StageBeamformers {
  std::map<UserSet, ReceiveBeamformer> receive;
  std::map<UserSet, Precoder> precode;

  const Eigen::RowVectorXcd& v(const UserSet& Q) const;
  const Eigen::VectorXcd& w(const UserSet& Q) const;
};

using ChannelDraw = std::function<ChannelState(std::mt19937_64&)>;

/// i.i.d. CN(0, 1) entries, redrawn until every stage admits its beamformers.
ChannelState generate_channels(const SystemParams& params, std::uint64_t seed);
/// Same retry loop over a caller-supplied draw; throws DegeneracyError after
/// kChannelRetryCap redraws.
ChannelState generate_channels(const SystemParams& params, std::uint64_t seed,
                               const ChannelDraw& draw);

/// Throws DegeneracyError unless every stage and every (t+1)-subset of it
/// yields well-defined receive and transmit beamformers.
void check_generic_position(const ChannelState& channels, const SystemParams& params);

ReceiveBeamformer zf_receive_vector(const UserSet& Q, const StagePlan& stage,
                                    const ChannelState& channels);
Precoder zf_precoder(const UserSet& Q, const StagePlan& stage, const ChannelState& channels);

/// v_Q and w_Q for every (t+1)-subset of the stage.
StageBeamformers derive_beamformers(const StagePlan& stage, const ChannelState& channels, int t);

/// Scales x to unit norm and rotates its first nonzero entry onto the positive real axis.
Eigen::VectorXcd canonicalize(const Eigen::VectorXcd& x);

/// i.i.d. circularly-symmetric complex Gaussian samples; variance 0 gives exact zeros.
Eigen::MatrixXcd sample_noise(int rows, int cols, double variance, std::uint64_t seed);

}  // namespace ccrelay

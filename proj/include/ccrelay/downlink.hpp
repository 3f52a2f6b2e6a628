#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "ccrelay/backend.hpp"
#include "ccrelay/channel.hpp"
#include "ccrelay/uplink.hpp"

namespace ccrelay {

inline constexpr double kMaxConditionNumber = 1e6;
inline constexpr int kCodebookRetryCap = 64;

/// Real mixing vectors a_Q, one entry per DL transmission of the stage.
struct CoefficientCodebook {
  int stage_index = 0;
  std::map<UserSet, std::vector<double>> a;

  /// N_T x N_T matrix whose i-th column is a_{Q_k(i)}, Q_k in lexicographic order.
  Eigen::MatrixXd user_matrix(int k, const StagePlan& stage, int t) const;
};

/// Q_k: the (t+1)-subsets of the stage containing k, lexicographic.
std::vector<UserSet> served_sets(int k, const StagePlan& stage, int t);

/// 2-norm condition number; infinity for singular matrices.
double condition_number(const Eigen::MatrixXd& m);

/// i.i.d. N(0,1) entries, redrawn until every stage user's matrix has
/// condition number <= kMaxConditionNumber. Throws CodebookError after
/// kCodebookRetryCap redraws.
CoefficientCodebook generate_codebook(const StagePlan& stage, const SystemParams& params,
                                      std::uint64_t seed);

/// Deterministic alternative: a_Q[j] = x_Q^(j-1) over distinct Chebyshev
/// nodes x_Q (one per Q, lexicographic), so any N_T of the vectors form an
/// invertible Vandermonde matrix. Validated like the random codebook.
CoefficientCodebook predefined_codebook(const StagePlan& stage, const SystemParams& params);

/// Checks shape and conditioning of a caller-supplied (e.g. fixed) codebook.
void validate_codebook(const CoefficientCodebook& codebook, const StagePlan& stage,
                       const SystemParams& params);

/// theta_Q: +1 when the lone user is in Q, -1 otherwise.
int codeword_sign(const UserSet& Q, const StagePlan& stage);

/// Common stream scale for DL transmission j so that the expected total
/// transmit power equals P_BS. The expectation uses each codeword's known
/// coefficients and forwarded-noise count, so it is mode independent.
template <class Sig>
double dl_power_scale(int j, const CodewordSet<Sig>& codewords,
                      const CoefficientCodebook& codebook, const SystemParams& params,
                      double ul_noise_variance) {
  double total = 0.0;
  for (const auto& [Q, cw] : codewords) {
    const double a = codebook.a.at(Q).at(static_cast<std::size_t>(j - 1));
    total += a * a * codeword_expected_power(cw, ul_noise_variance);
  }
  return total > 0.0 ? std::sqrt(params.P_bs / total) : 1.0;
}

template <class Sig>
struct DlTransmission {
  int stage_index = 0;
  int j = 0;
  double scale = 1.0;  ///< broadcast to users along with CSI
  std::vector<Sig> x;  ///< one entry per BS antenna
};

template <class Sig>
struct DlObservation {
  int user = 0;
  int j = 0;
  double scale = 1.0;
  Sig y;
};

/// x_BS(j) = scale * sum_Q a_Q[j] f_Q w_Q over all codewords of the stage.
template <SignalBackend Backend>
DlTransmission<typename Backend::Signal> bs_dl_transmit(
    int j, const StagePlan& stage, const CodewordSet<typename Backend::Signal>& codewords,
    const CoefficientCodebook& codebook, const StageBeamformers& beamformers,
    const SystemParams& params, const Backend& backend) {
  using Sig = typename Backend::Signal;
  for (const UserSet& Q : combinations(stage.users, params.t + 1)) {
    if (!codewords.contains(Q)) {
      throw StageIncompleteError("codeword " + Q.str() + " of stage " +
                                 std::to_string(stage.stage_index) + " not extracted");
    }
  }
  const double scale = dl_power_scale(j, codewords, codebook, params,
                                      backend.noise_variance(NoiseLabel::Kind::BaseStation));
  const int L = params.L;
  DlTransmission<Sig> tx{stage.stage_index, j, scale, {}};
  tx.x.assign(static_cast<std::size_t>(L), backend.zero());
  for (const auto& [Q, cw] : codewords) {
    const double a = codebook.a.at(Q).at(static_cast<std::size_t>(j - 1));
    const Eigen::VectorXcd& w = beamformers.w(Q);
    for (int ant = 0; ant < L; ++ant) {
      auto& xa = tx.x[static_cast<std::size_t>(ant)];
      xa = xa + Sig((scale * a) * w[ant] * cw.payload);
    }
  }
  return tx;
}

/// y_k(j) = h_k^H x_BS(j) + n_k.
template <SignalBackend Backend>
DlObservation<typename Backend::Signal> user_receive(
    int k, const DlTransmission<typename Backend::Signal>& tx, const ChannelState& channels,
    const Backend& backend) {
  using Sig = typename Backend::Signal;
  Sig y = backend.noise({NoiseLabel::Kind::User, tx.stage_index, tx.j, k});
  const Eigen::VectorXcd& h = channels.of(k);
  for (int a = 0; a < h.size(); ++a) {
    y = y + Sig(std::conj(h[a]) * tx.x[static_cast<std::size_t>(a)]);
  }
  return {k, tx.j, tx.scale, std::move(y)};
}

/// Removes, from y_k(j)/scale, every codeword term user k can rebuild from
/// its cache: all members l of each Q in Q_k except the one whose successor
/// is k. Coefficients come from CSI, not from the BS.
template <SignalBackend Backend>
typename Backend::Signal cancel_cached_interference(
    int k, const DlObservation<typename Backend::Signal>& obs, const CacheContents& cache,
    const StagePlan& stage, const ChannelState& channels, const StageBeamformers& beamformers,
    const CoefficientCodebook& codebook, const SystemParams& params, const Backend& backend) {
  using Sig = typename Backend::Signal;
  if (cache.user() != k) throw DomainError("cache does not belong to user " + std::to_string(k));
  Sig cleaned = Sig(Complex(1.0 / obs.scale) * obs.y);
  for (const UserSet& Q : served_sets(k, stage, params.t)) {
    const double a = codebook.a.at(Q).at(static_cast<std::size_t>(obs.j - 1));
    const Complex hw = channels.of(k).dot(beamformers.w(Q));
    const Eigen::RowVectorXcd& v = beamformers.v(Q);
    const double theta = codeword_sign(Q, stage);
    for (int l : Q) {
      if (circular_successor(l, Q) == k) continue;
      const SubpacketId id = codeword_subpacket(Q, l, stage);
      if (!cache.holds(id)) {
        throw PlacementConsistencyError("user " + std::to_string(k) + " lacks " + id.str() +
                                        " needed for cancellation");
      }
      const Complex coef = theta * (v * channels.of(l))(0) * ul_amplitude(l, stage, params);
      cleaned = cleaned - Sig((a * hw * coef) * backend.symbol(id));
    }
  }
  return cleaned;
}

/// Inverts user k's mixing matrix over the N_T cleaned observations of the
/// stage. Returns one scalar stream per Q in Q_k.
template <SignalBackend Backend>
std::map<UserSet, typename Backend::Signal> solve_user_system(
    int k, const std::vector<typename Backend::Signal>& cleaned,
    const CoefficientCodebook& codebook, const StagePlan& stage, const SystemParams& params,
    const Backend& backend) {
  using Sig = typename Backend::Signal;
  const Eigen::MatrixXd A = codebook.user_matrix(k, stage, params.t);
  if (static_cast<Eigen::Index>(cleaned.size()) != A.rows()) {
    throw DomainError("user system needs exactly N_T observations");
  }
  if (condition_number(A) > kMaxConditionNumber) {
    throw CodebookError("mixing matrix of user " + std::to_string(k) + " is ill conditioned");
  }
  const Eigen::MatrixXd inv = A.inverse();
  const auto sets = served_sets(k, stage, params.t);
  std::map<UserSet, Sig> out;
  for (Eigen::Index i = 0; i < inv.rows(); ++i) {
    Sig s = backend.zero();
    for (Eigen::Index j = 0; j < inv.cols(); ++j) {
      if (inv(i, j) != 0.0) s = s + Sig(Complex(inv(i, j)) * cleaned[static_cast<std::size_t>(j)]);
    }
    out.emplace(sets[static_cast<std::size_t>(i)], std::move(s));
  }
  return out;
}

/// theta_Q (h_k^H w_Q)(v_Q h_l*) * amplitude(l*), where <l*>_Q = k.
Complex effective_gain(int k, const UserSet& Q, const StagePlan& stage,
                       const ChannelState& channels, const StageBeamformers& beamformers,
                       const SystemParams& params);

/// The member of Q whose circular successor is k.
int predecessor_in(int k, const UserSet& Q);

/// Divides each per-Q scalar by its known gain; keyed by the desired subpacket.
template <SignalBackend Backend>
std::map<SubpacketId, typename Backend::Signal> equalize(
    int k, const std::map<UserSet, typename Backend::Signal>& scalars, const StagePlan& stage,
    const ChannelState& channels, const StageBeamformers& beamformers, const SystemParams& params,
    const Backend&) {
  using Sig = typename Backend::Signal;
  std::map<SubpacketId, Sig> out;
  for (const auto& [Q, s] : scalars) {
    const Complex g = effective_gain(k, Q, stage, channels, beamformers, params);
    out.emplace(codeword_subpacket(Q, predecessor_in(k, Q), stage), Sig(Complex(1.0) / g * s));
  }
  return out;
}

/// Equalizes and hard-demaps user k's recovered blocks to subpacket bits.
std::map<SubpacketId, Bits> equalize_and_demap(
    int k, const std::map<UserSet, Eigen::VectorXcd>& scalars, const StagePlan& stage,
    const ChannelState& channels, const StageBeamformers& beamformers, const SystemParams& params);

struct RecoveredFile {
  enum class Source { Cached, Decoded };
  int user = 0;
  Bits bits;
  std::map<SubpacketId, Source> provenance;

  std::size_t count(Source s) const;
};

/// Concatenates file k from cache and decoded subpackets in (P, q) order.
/// Throws IncompleteRecoveryError naming every missing subpacket.
RecoveredFile reassemble_file(int k, const CacheContents& cache,
                              const std::map<SubpacketId, Bits>& decoded,
                              const SystemParams& params);

}  // namespace ccrelay

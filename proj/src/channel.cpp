#include "ccrelay/channel.hpp"

#include <cmath>

#include "ccrelay/errors.hpp"
#include "ccrelay/seeding.hpp"

namespace ccrelay {

namespace {

// Rank threshold for the stacked nulled-channel matrix, relative to its
// largest singular value.
constexpr double kRankTolerance = 1e-10;

ChannelState gaussian_draw(const SystemParams& params, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ChannelState state;
  state.h.reserve(static_cast<std::size_t>(params.K));
  for (int k = 0; k < params.K; ++k) {
    Eigen::VectorXcd h(params.L);
    for (int a = 0; a < params.L; ++a) {
      const double re = normal(engine);
      const double im = normal(engine);
      h[a] = {re, im};
    }
    state.h.push_back(std::move(h));
  }
  return state;
}

/// Unit vector x with A x = 0 where A is (L-1) x L. Throws unless the null
/// space is one dimensional.
Eigen::VectorXcd one_dim_null_vector(const Eigen::MatrixXcd& A, int L, const UserSet& Q) {
  if (A.rows() == 0) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(L);
    e[0] = 1.0;
    return e;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > kRankTolerance * s[0]) ++rank;
  }
  if (s.size() == 0 || s[0] == 0.0 || L - rank != 1) {
    throw DegeneracyError("zero-forcing null space for " + Q.str() + " has dimension " +
                          std::to_string(L - rank) + ", expected 1");
  }
  return svd.matrixV().col(L - 1);
}

Eigen::MatrixXcd nulled_rows(const UserSet& Q, const StagePlan& stage,
                             const ChannelState& channels, bool conjugate) {
  if (!Q.is_subset_of(stage.users)) {
    throw DomainError(Q.str() + " is not a subset of stage " + stage.users.str());
  }
  const UserSet nulled = stage.users.minus(Q);
  const int L = channels.antennas();
  Eigen::MatrixXcd A(nulled.size(), L);
  int r = 0;
  for (int j : nulled) {
    // v h_j = 0  <=>  h_j^T v^T = 0 ;  h_j^H w = 0
    if (conjugate) {
      A.row(r++) = channels.of(j).adjoint();
    } else {
      A.row(r++) = channels.of(j).transpose();
    }
  }
  return A;
}

void require_signal(const UserSet& Q, const std::function<std::complex<double>(int)>& gain) {
  for (int k : Q) {
    if (std::abs(gain(k)) <= kSignalTolerance) {
      throw DegeneracyError("beamformer for " + Q.str() + " nearly nulls member " +
                            std::to_string(k));
    }
  }
}

}  // namespace

const Eigen::RowVectorXcd& StageBeamformers::v(const UserSet& Q) const {
  auto it = receive.find(Q);
  if (it == receive.end()) throw DomainError("no receive beamformer for " + Q.str());
  return it->second.v;
}

const Eigen::VectorXcd& StageBeamformers::w(const UserSet& Q) const {
  auto it = precode.find(Q);
  if (it == precode.end()) throw DomainError("no precoder for " + Q.str());
  return it->second.w;
}

Eigen::VectorXcd canonicalize(const Eigen::VectorXcd& x) {
  const double norm = x.norm();
  if (norm == 0.0) throw DegeneracyError("cannot canonicalize a zero vector");
  Eigen::VectorXcd y = x / norm;
  for (int i = 0; i < y.size(); ++i) {
    const double mag = std::abs(y[i]);
    if (mag > 1e-12) {
      y *= std::conj(y[i]) / mag;
      y[i] = mag;  // exact zero phase
      break;
    }
  }
  return y;
}

ReceiveBeamformer zf_receive_vector(const UserSet& Q, const StagePlan& stage,
                                    const ChannelState& channels) {
  const int L = channels.antennas();
  const Eigen::VectorXcd x =
      canonicalize(one_dim_null_vector(nulled_rows(Q, stage, channels, false), L, Q));
  ReceiveBeamformer bf{Q, stage.stage_index, x.transpose()};
  require_signal(Q, [&](int k) { return (bf.v * channels.of(k))(0); });
  return bf;
}

Precoder zf_precoder(const UserSet& Q, const StagePlan& stage, const ChannelState& channels) {
  const int L = channels.antennas();
  Precoder p{Q, stage.stage_index,
             canonicalize(one_dim_null_vector(nulled_rows(Q, stage, channels, true), L, Q))};
  require_signal(Q, [&](int k) { return channels.of(k).dot(p.w); });
  return p;
}

StageBeamformers derive_beamformers(const StagePlan& stage, const ChannelState& channels, int t) {
  StageBeamformers out;
  for (const UserSet& Q : combinations(stage.users, t + 1)) {
    out.receive.emplace(Q, zf_receive_vector(Q, stage, channels));
    out.precode.emplace(Q, zf_precoder(Q, stage, channels));
  }
  return out;
}

void check_generic_position(const ChannelState& channels, const SystemParams& params) {
  if (static_cast<int>(channels.h.size()) != params.K || channels.antennas() != params.L) {
    throw DegeneracyError("channel state must hold K vectors of length L");
  }
  for (const StagePlan& stage : enumerate_stages(params)) {
    derive_beamformers(stage, channels, params.t);
  }
}

ChannelState generate_channels(const SystemParams& params, std::uint64_t seed,
                               const ChannelDraw& draw) {
  params.validate();
  auto engine = keyed_engine(seed, "channels");
  for (int attempt = 0; attempt <= kChannelRetryCap; ++attempt) {
    ChannelState state = draw(engine);
    try {
      check_generic_position(state, params);
      return state;
    } catch (const DegeneracyError&) {
      // redraw
    }
  }
  throw DegeneracyError("channels still degenerate after " + std::to_string(kChannelRetryCap) +
                        " redraws");
}

ChannelState generate_channels(const SystemParams& params, std::uint64_t seed) {
  return generate_channels(params, seed,
                           [&](std::mt19937_64& engine) { return gaussian_draw(params, engine); });
}

Eigen::MatrixXcd sample_noise(int rows, int cols, double variance, std::uint64_t seed) {
  if (variance < 0.0) throw DomainError("noise variance must be >= 0");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, cols);
  if (variance == 0.0) return out;
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = normal(engine);
      const double im = normal(engine);
      out(r, c) = {re, im};
    }
  }
  return out;
}

}  // namespace ccrelay

#include "ccrelay/downlink.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ccrelay/seeding.hpp"

namespace ccrelay {

std::vector<UserSet> served_sets(int k, const StagePlan& stage, int t) {
  std::vector<UserSet> sets;
  for (const UserSet& rest : combinations(stage.users.without(k), t)) sets.push_back(rest.with(k));
  return sets;
}

Eigen::MatrixXd CoefficientCodebook::user_matrix(int k, const StagePlan& stage, int t) const {
  const auto sets = served_sets(k, stage, t);
  const auto n = static_cast<Eigen::Index>(sets.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& col = a.at(sets[static_cast<std::size_t>(i)]);
    if (static_cast<Eigen::Index>(col.size()) != n) {
      throw CodebookError("codebook vector for " + sets[static_cast<std::size_t>(i)].str() +
                          " must have N_T entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) m(j, i) = col[static_cast<std::size_t>(j)];
  }
  return m;
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return std::numeric_limits<double>::infinity();
  const double smallest = s[s.size() - 1];
  return smallest > 0.0 ? s[0] / smallest : std::numeric_limits<double>::infinity();
}

void validate_codebook(const CoefficientCodebook& codebook, const StagePlan& stage,
                       const SystemParams& params) {
  const auto n_t = static_cast<std::size_t>(params.transmissions_per_stage());
  for (const UserSet& Q : combinations(stage.users, params.t + 1)) {
    auto it = codebook.a.find(Q);
    if (it == codebook.a.end() || it->second.size() != n_t) {
      throw CodebookError("codebook lacks an N_T-vector for " + Q.str());
    }
  }
  for (int k : stage.users) {
    const double cond = condition_number(codebook.user_matrix(k, stage, params.t));
    if (!(cond <= kMaxConditionNumber)) {
      std::ostringstream os;
      os << "mixing matrix of user " << k << " has condition number " << cond;
      throw CodebookError(os.str());
    }
  }
}

CoefficientCodebook generate_codebook(const StagePlan& stage, const SystemParams& params,
                                      std::uint64_t seed) {
  auto engine = keyed_engine(seed, "codebook", {static_cast<std::uint64_t>(stage.stage_index)});
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n_t = static_cast<std::size_t>(params.transmissions_per_stage());
  const auto sets = combinations(stage.users, params.t + 1);
  for (int attempt = 0; attempt <= kCodebookRetryCap; ++attempt) {
    CoefficientCodebook cb{stage.stage_index, {}};
    for (const UserSet& Q : sets) {
      std::vector<double> a(n_t);
      for (double& x : a) x = normal(engine);
      cb.a.emplace(Q, std::move(a));
    }
    try {
      validate_codebook(cb, stage, params);
      return cb;
    } catch (const CodebookError&) {
      // redraw
    }
  }
  throw CodebookError("no well-conditioned codebook after " + std::to_string(kCodebookRetryCap) +
                      " redraws");
}

CoefficientCodebook predefined_codebook(const StagePlan& stage, const SystemParams& params) {
  const auto n_t = static_cast<std::size_t>(params.transmissions_per_stage());
  const auto sets = combinations(stage.users, params.t + 1);
  const double m = static_cast<double>(sets.size());
  CoefficientCodebook cb{stage.stage_index, {}};
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const double x = std::cos(std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) / (2.0 * m));
    std::vector<double> a(n_t);
    double power = 1.0;
    for (double& e : a) {
      e = power;
      power *= x;
    }
    cb.a.emplace(sets[i], std::move(a));
  }
  validate_codebook(cb, stage, params);
  return cb;
}

int codeword_sign(const UserSet& Q, const StagePlan& stage) {
  return Q.contains(stage.lone_user) ? 1 : -1;
}

int predecessor_in(int k, const UserSet& Q) {
  for (int l : Q) {
    if (circular_successor(l, Q) == k) return l;
  }
  throw DomainError("user " + std::to_string(k) + " is not in " + Q.str());
}

Complex effective_gain(int k, const UserSet& Q, const StagePlan& stage,
                       const ChannelState& channels, const StageBeamformers& beamformers,
                       const SystemParams& params) {
  const int l_star = predecessor_in(k, Q);
  const Complex hw = channels.of(k).dot(beamformers.w(Q));
  const Complex vh = (beamformers.v(Q) * channels.of(l_star))(0);
  if (std::abs(hw * vh) < kSignalTolerance) {
    throw UnequalizableError("gain of " + Q.str() + " at user " + std::to_string(k) +
                             " is below the signal tolerance");
  }
  return static_cast<double>(codeword_sign(Q, stage)) * hw * vh *
         ul_amplitude(l_star, stage, params);
}

std::map<SubpacketId, Bits> equalize_and_demap(
    int k, const std::map<UserSet, Eigen::VectorXcd>& scalars, const StagePlan& stage,
    const ChannelState& channels, const StageBeamformers& beamformers, const SystemParams& params) {
  std::map<SubpacketId, Bits> out;
  for (const auto& [Q, s] : scalars) {
    const Complex g = effective_gain(k, Q, stage, channels, beamformers, params);
    const Eigen::VectorXcd block = s / g;
    out.emplace(codeword_subpacket(Q, predecessor_in(k, Q), stage), decode_block(block, params));
  }
  return out;
}

std::size_t RecoveredFile::count(Source s) const {
  std::size_t n = 0;
  for (const auto& [id, src] : provenance) n += src == s;
  return n;
}

RecoveredFile reassemble_file(int k, const CacheContents& cache,
                              const std::map<SubpacketId, Bits>& decoded,
                              const SystemParams& params) {
  RecoveredFile file;
  file.user = k;
  file.bits.reserve(params.file_bits());
  std::vector<SubpacketId> missing;
  for (const SubpacketId& id : file_subpackets(params, k)) {
    if (cache.holds(id)) {
      const Bits& b = cache.bits(id);
      file.bits.insert(file.bits.end(), b.begin(), b.end());
      file.provenance.emplace(id, RecoveredFile::Source::Cached);
    } else if (auto it = decoded.find(id); it != decoded.end()) {
      file.bits.insert(file.bits.end(), it->second.begin(), it->second.end());
      file.provenance.emplace(id, RecoveredFile::Source::Decoded);
    } else {
      missing.push_back(id);
    }
  }
  if (!missing.empty()) {
    std::string msg = "user " + std::to_string(k) + " is missing";
    for (const auto& id : missing) msg += " " + id.str();
    throw IncompleteRecoveryError(msg);
  }
  return file;
}

}  // namespace ccrelay

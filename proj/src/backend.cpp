#include "ccrelay/backend.hpp"

#include "ccrelay/channel.hpp"
#include "ccrelay/seeding.hpp"

namespace ccrelay {

NumericBackend::NumericBackend(const FileLibrary& library, const SystemParams& params,
                               NoiseSpec noise)
    : library_(&library), params_(params), noise_(noise) {
  params_.validate();
  block_length_ = params_.symbols_per_subpacket();
  encoded_.reserve(library.size());
  for (const SubpacketId& id : library.ids()) {
    encoded_.push_back(encode_subpacket(library.bits(id), params_));
  }
}

NumericBackend::Signal NumericBackend::symbol(const SubpacketId& id) const {
  return encoded_[library_->index_of(id)];
}

NumericBackend::Signal NumericBackend::noise(const NoiseLabel& label) const {
  const double variance = noise_variance(label.kind);
  if (variance == 0.0) return zero();
  const std::uint64_t seed =
      derive_seed(noise_.seed, label.kind == NoiseLabel::Kind::BaseStation ? "bs-noise" : "user-noise",
                  {static_cast<std::uint64_t>(label.stage), static_cast<std::uint64_t>(label.slot),
                   static_cast<std::uint64_t>(label.node)});
  return sample_noise(block_length_, 1, variance, seed).col(0);
}

Eigen::VectorXcd evaluate(const FormalSignal& s, const NumericBackend& numeric) {
  Eigen::VectorXcd out = numeric.zero();
  for (const auto& [id, c] : s.terms()) out += c * numeric.symbol(id);
  for (const auto& [label, c] : s.noise_terms()) out += c * numeric.noise(label);
  return out;
}

double expected_power(const FormalSignal& s, const SymbolicBackend& backend) {
  double p = 0.0;
  for (const auto& [id, c] : s.terms()) p += std::norm(c);
  for (const auto& [label, c] : s.noise_terms()) p += std::norm(c) * backend.noise_variance(label.kind);
  return p;
}

}  // namespace ccrelay

#pragma once

// The UL/DL pipeline is written once against a "backend" that supplies the
// signal type and its leaves (encoded subpackets and noise draws):
//
//   NumericBackend   Signal = complex sample block (f/b samples per signal)
//   SymbolicBackend  Signal = FormalSignal (exact linear-combination tracking)
//
// Running the same code with both and evaluating the symbolic result against
// the numeric leaves is the oracle check for the numeric path.

#include <Eigen/Dense>
#include <concepts>
#include <cstdint>
#include <vector>

#include "ccrelay/coding.hpp"
#include "ccrelay/formal_signal.hpp"
#include "ccrelay/placement.hpp"

namespace ccrelay {

template <class B>
concept SignalBackend = requires(const B& b, const SubpacketId& id, const NoiseLabel& label,
                                 typename B::Signal s, Complex c) {
  { b.zero() } -> std::same_as<typename B::Signal>;
  { b.symbol(id) } -> std::same_as<typename B::Signal>;
  { b.noise(label) } -> std::same_as<typename B::Signal>;
  { s + s } -> std::convertible_to<typename B::Signal>;
  { c * s } -> std::convertible_to<typename B::Signal>;
  { b.noise_variance(label.kind) } -> std::convertible_to<double>;
};

/// Noise power on each link; both links use unit-variance noise in the
/// noisy mode and zero in the noiseless one.
struct NoiseSpec {
  double ul_variance = 0.0;
  double dl_variance = 0.0;
  std::uint64_t seed = 0;
};

class NumericBackend {
 public:
  using Signal = Eigen::VectorXcd;

  NumericBackend(const FileLibrary& library, const SystemParams& params, NoiseSpec noise);

  Signal zero() const { return Signal::Zero(block_length_); }
  /// c(W) for the subpacket, unit average power.
  Signal symbol(const SubpacketId& id) const;
  /// Deterministic per-label draw, independent of call order.
  Signal noise(const NoiseLabel& label) const;
  double noise_variance(NoiseLabel::Kind kind) const {
    return kind == NoiseLabel::Kind::BaseStation ? noise_.ul_variance : noise_.dl_variance;
  }
  int block_length() const { return block_length_; }
  const SystemParams& params() const { return params_; }

 private:
  const FileLibrary* library_;
  SystemParams params_;
  NoiseSpec noise_;
  int block_length_;
  std::vector<EncodedBlock> encoded_;
};

class SymbolicBackend {
 public:
  using Signal = FormalSignal;

  explicit SymbolicBackend(NoiseSpec noise = {}) : noise_(noise) {}

  Signal zero() const { return {}; }
  Signal symbol(const SubpacketId& id) const { return FormalSignal::symbol(id); }
  Signal noise(const NoiseLabel& label) const { return FormalSignal::noise(label); }
  double noise_variance(NoiseLabel::Kind kind) const {
    return kind == NoiseLabel::Kind::BaseStation ? noise_.ul_variance : noise_.dl_variance;
  }

 private:
  NoiseSpec noise_;
};

static_assert(SignalBackend<NumericBackend>);
static_assert(SignalBackend<SymbolicBackend>);

/// Substitutes the numeric backend's leaves into a formal signal.
Eigen::VectorXcd evaluate(const FormalSignal& s, const NumericBackend& numeric);

/// Expected power of a formal signal when every symbol is unit power,
/// independent of the others, and every noise scalar has the backend variance.
double expected_power(const FormalSignal& s, const SymbolicBackend& backend);

}  // namespace ccrelay

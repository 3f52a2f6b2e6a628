#pragma once

#include <compare>
#include <complex>
#include <map>
#include <set>
#include <string>

#include "ccrelay/placement.hpp"

namespace ccrelay {

using Complex = std::complex<double>;

/// Identifies one scalar noise realization.
///
/// BS noise: node is the antenna, slot the UL transmission index within the
/// stage. User noise: node is the receiving user, slot the DL transmission.
struct NoiseLabel {
  enum class Kind { BaseStation, User };
  Kind kind = Kind::BaseStation;
  int stage = 0;
  int slot = 0;
  int node = 0;

  /// The vector-valued draw this scalar belongs to: one n_BS per UL
  /// transmission (all antennas), one n_k per user and DL transmission.
  NoiseLabel source() const {
    return kind == Kind::BaseStation ? NoiseLabel{kind, stage, slot, 0} : *this;
  }
  std::string str() const;

  friend auto operator<=>(const NoiseLabel&, const NoiseLabel&) = default;
  friend bool operator==(const NoiseLabel&, const NoiseLabel&) = default;
};

/// Sparse linear combination of encoded-subpacket symbols and noise scalars.
/// Coefficients with magnitude <= kPruneTolerance are never stored.
class FormalSignal {
 public:
  static constexpr double kPruneTolerance = 1e-12;

  FormalSignal() = default;
  static FormalSignal symbol(const SubpacketId& id, Complex coefficient = 1.0);
  static FormalSignal noise(const NoiseLabel& label, Complex coefficient = 1.0);

  const std::map<SubpacketId, Complex>& terms() const { return terms_; }
  const std::map<NoiseLabel, Complex>& noise_terms() const { return noise_; }
  Complex coefficient(const SubpacketId& id) const;
  Complex coefficient(const NoiseLabel& label) const;
  bool empty() const { return terms_.empty() && noise_.empty(); }

  /// Distinct noise sources (BS antennas collapsed).
  std::set<NoiseLabel> noise_sources() const;
  /// Signal part only, noise dropped.
  FormalSignal signal_part() const;

  FormalSignal& operator+=(const FormalSignal& other);
  FormalSignal& operator-=(const FormalSignal& other);
  FormalSignal& operator*=(Complex c);

  friend FormalSignal operator+(FormalSignal a, const FormalSignal& b) { return a += b; }
  friend FormalSignal operator-(FormalSignal a, const FormalSignal& b) { return a -= b; }
  friend FormalSignal operator*(Complex c, FormalSignal a) { return a *= c; }
  friend FormalSignal operator-(FormalSignal a) { return a *= -1.0; }

  std::string str() const;

 private:
  std::map<SubpacketId, Complex> terms_;
  std::map<NoiseLabel, Complex> noise_;
};

FormalSignal formal_add(const FormalSignal& a, const FormalSignal& b);
FormalSignal formal_scale(const FormalSignal& s, Complex coefficient);

}  // namespace ccrelay

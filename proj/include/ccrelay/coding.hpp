#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "ccrelay/params.hpp"
#include "ccrelay/placement.hpp"

namespace ccrelay {

using Complex = std::complex<double>;

/// f/b unit-average-power QAM symbols carrying one subpacket.
using EncodedBlock = Eigen::VectorXcd;

/// Gray-coded square QAM with unit average energy.
///
/// The first b/2 bits of a symbol select the in-phase level, the last b/2
/// the quadrature level. Per axis, the Gray word g (read MSB first and
/// converted to its binary index i) maps to level (M-1) - 2i with M = 2^(b/2),
/// so QPSK maps 0 -> +1 and 1 -> -1 on each axis. Point index equals the
/// b-bit word read MSB first; docs/constellations.md lists the tables.
class Constellation {
 public:
  explicit Constellation(int bits_per_symbol);

  int bits_per_symbol() const { return bits_; }
  const std::vector<Complex>& points() const { return points_; }
  /// Minimum distance between distinct points.
  double min_distance() const { return min_distance_; }

  Complex map(std::span<const std::uint8_t> bits) const;
  /// Index of the nearest point; ties go to the lowest index.
  std::size_t nearest(Complex y) const;

 private:
  int bits_;
  std::vector<Complex> points_;
  double min_distance_ = 0.0;
};

const Constellation& constellation(int bits_per_symbol);

/// Maps f bits onto f/b symbols. Throws DomainError on a length mismatch.
EncodedBlock encode_subpacket(std::span<const std::uint8_t> bits, const SystemParams& params);

/// Hard-decision minimum-distance demapping of a block back to f bits.
Bits decode_block(const EncodedBlock& symbols, const SystemParams& params);

}  // namespace ccrelay

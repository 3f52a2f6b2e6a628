#include "ccrelay/coding.hpp"

#include <cmath>
#include <limits>

#include "ccrelay/errors.hpp"

namespace ccrelay {

namespace {

int gray_to_binary(int g) {
  int b = 0;
  for (; g; g >>= 1) b ^= g;
  return b;
}

}  // namespace

Constellation::Constellation(int bits_per_symbol) : bits_(bits_per_symbol) {
  if (bits_ < 2 || bits_ % 2 != 0 || bits_ > 12) {
    throw DomainError("square QAM needs an even bits_per_symbol in [2, 12]");
  }
  const int half = bits_ / 2;
  const int M = 1 << half;
  const double norm = std::sqrt(2.0 * (M * M - 1) / 3.0);
  const int count = 1 << bits_;
  points_.resize(static_cast<std::size_t>(count));
  for (int word = 0; word < count; ++word) {
    const int gi = word >> half;
    const int gq = word & (M - 1);
    const double i_level = (M - 1) - 2 * gray_to_binary(gi);
    const double q_level = (M - 1) - 2 * gray_to_binary(gq);
    points_[static_cast<std::size_t>(word)] = Complex(i_level, q_level) / norm;
  }
  min_distance_ = 2.0 / norm;
}

Complex Constellation::map(std::span<const std::uint8_t> bits) const {
  if (bits.size() != static_cast<std::size_t>(bits_)) {
    throw DomainError("symbol needs exactly bits_per_symbol bits");
  }
  std::size_t word = 0;
  for (std::uint8_t b : bits) word = (word << 1) | (b & 1u);
  return points_[word];
}

std::size_t Constellation::nearest(Complex y) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d = std::norm(y - points_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

const Constellation& constellation(int bits_per_symbol) {
  static const Constellation qpsk(2), qam16(4), qam64(6);
  switch (bits_per_symbol) {
    case 2: return qpsk;
    case 4: return qam16;
    case 6: return qam64;
    default: throw DomainError("unsupported bits_per_symbol " + std::to_string(bits_per_symbol));
  }
}

EncodedBlock encode_subpacket(std::span<const std::uint8_t> bits, const SystemParams& params) {
  const int b = params.bits_per_symbol;
  if (bits.size() != static_cast<std::size_t>(params.f) || params.f % b != 0) {
    throw DomainError("encode_subpacket: expected " + std::to_string(params.f) + " bits, got " +
                      std::to_string(bits.size()));
  }
  const Constellation& c = constellation(b);
  EncodedBlock block(params.f / b);
  for (int s = 0; s < block.size(); ++s) {
    block[s] = c.map(bits.subspan(static_cast<std::size_t>(s * b), static_cast<std::size_t>(b)));
  }
  return block;
}

Bits decode_block(const EncodedBlock& symbols, const SystemParams& params) {
  const int b = params.bits_per_symbol;
  if (symbols.size() != params.f / b) {
    throw DomainError("decode_block: block length mismatch");
  }
  const Constellation& c = constellation(b);
  Bits bits(static_cast<std::size_t>(params.f));
  for (int s = 0; s < symbols.size(); ++s) {
    const std::size_t word = c.nearest(symbols[s]);
    for (int j = 0; j < b; ++j) {
      bits[static_cast<std::size_t>(s * b + j)] =
          static_cast<std::uint8_t>((word >> (b - 1 - j)) & 1u);
    }
  }
  return bits;
}

}  // namespace ccrelay

#pragma once

#include <boost/rational.hpp>
#include <cstdint>

namespace ccrelay {

using Rational = boost::rational<std::int64_t>;

/// Static description of the network and the file split.
struct SystemParams {
  int K = 5;  ///< users (and files, N = K)
  int L = 3;  ///< BS antennas
  int t = 2;  ///< caching parameter, t = K * gamma
  int f = 8;  ///< subpacket size in bits
  int bits_per_symbol = 2;  ///< 2 = QPSK, 4 = 16-QAM
  double P_ul = 1.0;  ///< lone-user UL power per transmission (linear)
  double P_bs = 1.0;  ///< DL total transmit power per transmission (linear)

  /// Throws ConfigError naming the violated invariant.
  void validate() const;

  Rational gamma() const { return Rational(t, K); }
  /// C(K, t)
  std::uint64_t packets_per_file() const;
  /// C(K-t-1, L-1)
  std::uint64_t subpackets_per_packet() const;
  /// F = f * C(K,t) * C(K-t-1, L-1)
  std::uint64_t file_bits() const;
  /// N_S = C(K, t+L)
  std::uint64_t num_stages() const;
  /// N_T = C(t+L-1, t)
  std::uint64_t transmissions_per_stage() const;
  int symbols_per_subpacket() const { return f / bits_per_symbol; }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

}  // namespace ccrelay

#include "ccrelay/params.hpp"

#include <string>

#include "ccrelay/combinatorics.hpp"
#include "ccrelay/errors.hpp"

namespace ccrelay {

void SystemParams::validate() const {
  std::string bad;
  auto require = [&](bool ok, const char* what) {
    if (!ok) bad += (bad.empty() ? "" : "; ") + std::string(what);
  };
  require(t >= 1, "t >= 1 violated");
  require(L >= 1, "L >= 1 violated");
  require(K >= t + L, "K ≥ t+L violated");
  require(bits_per_symbol == 2 || bits_per_symbol == 4 || bits_per_symbol == 6,
          "bits_per_symbol must be 2, 4 or 6");
  require(f >= 1, "f >= 1 violated");
  require(bits_per_symbol > 0 && f % bits_per_symbol == 0,
          "f divisible by bits per symbol violated");
  require(P_ul > 0.0, "P_ul > 0 violated");
  require(P_bs > 0.0, "P_bs > 0 violated");
  if (!bad.empty()) throw ConfigError(bad);
}

std::uint64_t SystemParams::packets_per_file() const { return binomial(K, t); }

std::uint64_t SystemParams::subpackets_per_packet() const { return binomial(K - t - 1, L - 1); }

std::uint64_t SystemParams::file_bits() const {
  return static_cast<std::uint64_t>(f) * packets_per_file() * subpackets_per_packet();
}

std::uint64_t SystemParams::num_stages() const { return binomial(K, t + L); }

std::uint64_t SystemParams::transmissions_per_stage() const { return binomial(t + L - 1, t); }

}  // namespace ccrelay

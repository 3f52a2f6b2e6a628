#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace ccrelay {

/// Derives an independent sub-seed from a master seed, a component label
/// ("library", "channels", "noise", "codebook", ...) and integer keys.
/// The mapping goes through std::seed_seq, so it is stable across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::initializer_list<std::uint64_t> keys = {});

/// mt19937_64 keyed like derive_seed.
std::mt19937_64 keyed_engine(std::uint64_t master, std::string_view label,
                             std::initializer_list<std::uint64_t> keys = {});

}  // namespace ccrelay

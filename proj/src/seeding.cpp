#include "ccrelay/seeding.hpp"

#include <vector>

namespace ccrelay {

namespace {

std::vector<std::uint32_t> key_material(std::uint64_t master, std::string_view label,
                                        std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(4 + label.size() + 2 * keys.size());
  words.push_back(static_cast<std::uint32_t>(master));
  words.push_back(static_cast<std::uint32_t>(master >> 32));
  // FNV-1a of the label keeps distinct labels apart without a length prefix clash.
  std::uint32_t h = 2166136261u;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  words.push_back(h);
  words.push_back(static_cast<std::uint32_t>(keys.size()));
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  return words;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::initializer_list<std::uint64_t> keys) {
  const auto words = key_material(master, label, keys);
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

std::mt19937_64 keyed_engine(std::uint64_t master, std::string_view label,
                             std::initializer_list<std::uint64_t> keys) {
  const auto words = key_material(master, label, keys);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace ccrelay

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ccrelay/combinatorics.hpp"
#include "ccrelay/params.hpp"

namespace ccrelay {

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// Subpacket q of the packet of file n cached by the users in P.
struct SubpacketId {
  int n = 0;
  UserSet P;
  int q = 0;

  std::string str() const;

  friend auto operator<=>(const SubpacketId&, const SubpacketId&) = default;
  friend bool operator==(const SubpacketId&, const SubpacketId&) = default;
};

/// All subpackets of file n in lexicographic (P, q) order.
std::vector<SubpacketId> file_subpackets(const SystemParams& params, int n);

/// N = K files of F bits each, stored per subpacket.
class FileLibrary {
 public:
  /// Takes ownership of per-subpacket bits given in lexicographic (n, P, q) order.
  FileLibrary(SystemParams params, std::uint64_t seed, std::vector<Bits> bits);

  const SystemParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return ids_.size(); }

  /// Lexicographic (n, P, q).
  const std::vector<SubpacketId>& ids() const { return ids_; }
  std::size_t index_of(const SubpacketId& id) const;
  const Bits& bits(const SubpacketId& id) const;
  /// The F bits of file n, subpackets concatenated in (P, q) order.
  Bits file(int n) const;

  /// Flat binary dump. Layout: int32 K, L, t, f (little endian), uint64 seed,
  /// then every subpacket in (n, P, q) order, f bits packed MSB first and
  /// padded to a whole byte.
  void save(const std::filesystem::path& path) const;
  static FileLibrary load(const std::filesystem::path& path);

  friend bool operator==(const FileLibrary& a, const FileLibrary& b) {
    return a.params_.K == b.params_.K && a.params_.L == b.params_.L &&
           a.params_.t == b.params_.t && a.params_.f == b.params_.f && a.seed_ == b.seed_ &&
           a.bits_ == b.bits_;
  }

 private:
  SystemParams params_;
  std::uint64_t seed_;
  std::vector<SubpacketId> ids_;
  std::vector<Bits> bits_;
};

/// Pseudorandom library; bits of each subpacket are drawn from an engine
/// keyed by (seed, n, rank of P, q), so generation order does not matter.
FileLibrary generate_library(const SystemParams& params, std::uint64_t seed);

/// What user k holds: every subpacket whose P contains k.
class CacheContents {
 public:
  CacheContents(const FileLibrary& library, int user);

  int user() const { return user_; }
  const std::vector<SubpacketId>& entries() const { return entries_; }
  bool holds(const SubpacketId& id) const;
  /// Throws PlacementConsistencyError if the id is not cached.
  const Bits& bits(const SubpacketId& id) const;
  const FileLibrary& library() const { return *library_; }

 private:
  const FileLibrary* library_;
  int user_;
  std::vector<SubpacketId> entries_;
};

CacheContents build_cache(const FileLibrary& library, int k);

}  // namespace ccrelay

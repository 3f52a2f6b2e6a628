#include "ccrelay/placement.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "ccrelay/errors.hpp"
#include "ccrelay/seeding.hpp"

namespace ccrelay {

std::string SubpacketId::str() const {
  std::ostringstream os;
  os << "W^" << n << "_" << P.str() << "," << q;
  return os.str();
}

std::vector<SubpacketId> file_subpackets(const SystemParams& params, int n) {
  std::vector<SubpacketId> ids;
  const int nq = static_cast<int>(params.subpackets_per_packet());
  for (const UserSet& P : combinations(UserSet::range(params.K), params.t)) {
    for (int q = 1; q <= nq; ++q) ids.push_back({n, P, q});
  }
  return ids;
}

FileLibrary::FileLibrary(SystemParams params, std::uint64_t seed, std::vector<Bits> bits)
    : params_(params), seed_(seed), bits_(std::move(bits)) {
  params_.validate();
  for (int n = 1; n <= params_.K; ++n) {
    auto ids = file_subpackets(params_, n);
    ids_.insert(ids_.end(), ids.begin(), ids.end());
  }
  if (bits_.size() != ids_.size()) {
    throw ConfigError("library needs " + std::to_string(ids_.size()) + " subpackets, got " +
                      std::to_string(bits_.size()));
  }
  for (const Bits& b : bits_) {
    if (b.size() != static_cast<std::size_t>(params_.f)) {
      throw ConfigError("every subpacket must hold exactly f bits");
    }
  }
}

std::size_t FileLibrary::index_of(const SubpacketId& id) const {
  const std::uint64_t nq = params_.subpackets_per_packet();
  if (id.n < 1 || id.n > params_.K || id.P.size() != params_.t ||
      (id.P.size() > 0 && id.P.max() > params_.K) || id.q < 1 ||
      static_cast<std::uint64_t>(id.q) > nq) {
    throw DomainError("subpacket id out of range: " + id.str());
  }
  const std::uint64_t p_rank = lex_rank(id.P, UserSet::range(params_.K));
  return static_cast<std::size_t>((static_cast<std::uint64_t>(id.n - 1) * params_.packets_per_file() +
                                   p_rank) * nq +
                                  static_cast<std::uint64_t>(id.q - 1));
}

const Bits& FileLibrary::bits(const SubpacketId& id) const { return bits_[index_of(id)]; }

Bits FileLibrary::file(int n) const {
  Bits out;
  out.reserve(params_.file_bits());
  for (const SubpacketId& id : file_subpackets(params_, n)) {
    const Bits& b = bits(id);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

namespace {

template <class T>
void put_le(std::ostream& os, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    os.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xffu));
  }
}

template <class T>
T get_le(std::istream& is) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = is.get();
    if (c == EOF) throw Error("library file truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace

void FileLibrary::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  put_le<std::int32_t>(os, params_.K);
  put_le<std::int32_t>(os, params_.L);
  put_le<std::int32_t>(os, params_.t);
  put_le<std::int32_t>(os, params_.f);
  put_le<std::uint64_t>(os, seed_);
  for (const Bits& b : bits_) {
    for (std::size_t i = 0; i < b.size(); i += 8) {
      unsigned byte = 0;
      for (std::size_t j = 0; j < 8; ++j) {
        byte <<= 1;
        if (i + j < b.size()) byte |= b[i + j] & 1u;
      }
      os.put(static_cast<char>(byte));
    }
  }
  if (!os) throw Error("write failed: " + path.string());
}

FileLibrary FileLibrary::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  SystemParams p;
  p.K = get_le<std::int32_t>(is);
  p.L = get_le<std::int32_t>(is);
  p.t = get_le<std::int32_t>(is);
  p.f = get_le<std::int32_t>(is);
  // bits_per_symbol is not stored; QPSK fits any valid f.
  p.bits_per_symbol = 2;
  const auto seed = get_le<std::uint64_t>(is);
  p.validate();
  const std::size_t count =
      static_cast<std::size_t>(p.packets_per_file() * p.subpackets_per_packet()) *
      static_cast<std::size_t>(p.K);
  std::vector<Bits> bits(count, Bits(static_cast<std::size_t>(p.f)));
  for (Bits& b : bits) {
    for (std::size_t i = 0; i < b.size(); i += 8) {
      const int c = is.get();
      if (c == EOF) throw Error("library file truncated");
      for (std::size_t j = 0; j < 8 && i + j < b.size(); ++j) {
        b[i + j] = static_cast<std::uint8_t>((c >> (7 - j)) & 1);
      }
    }
  }
  return FileLibrary(p, seed, std::move(bits));
}

FileLibrary generate_library(const SystemParams& params, std::uint64_t seed) {
  params.validate();
  std::vector<Bits> bits;
  const UserSet all = UserSet::range(params.K);
  for (int n = 1; n <= params.K; ++n) {
    for (const SubpacketId& id : file_subpackets(params, n)) {
      auto engine = keyed_engine(seed, "library",
                                 {static_cast<std::uint64_t>(id.n), lex_rank(id.P, all),
                                  static_cast<std::uint64_t>(id.q)});
      Bits b(static_cast<std::size_t>(params.f));
      std::uint64_t word = 0;
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (i % 64 == 0) word = engine();
        b[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
      }
      bits.push_back(std::move(b));
    }
  }
  return FileLibrary(params, seed, std::move(bits));
}

CacheContents::CacheContents(const FileLibrary& library, int user)
    : library_(&library), user_(user) {
  if (user < 1 || user > library.params().K) {
    throw DomainError("user " + std::to_string(user) + " outside [1..K]");
  }
  for (const SubpacketId& id : library.ids()) {
    if (id.P.contains(user)) entries_.push_back(id);
  }
}

bool CacheContents::holds(const SubpacketId& id) const {
  return std::binary_search(entries_.begin(), entries_.end(), id);
}

const Bits& CacheContents::bits(const SubpacketId& id) const {
  if (!holds(id)) {
    throw PlacementConsistencyError("user " + std::to_string(user_) + " does not cache " +
                                    id.str());
  }
  return library_->bits(id);
}

CacheContents build_cache(const FileLibrary& library, int k) { return CacheContents(library, k); }

}  // namespace ccrelay

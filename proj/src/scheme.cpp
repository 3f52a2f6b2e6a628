#include "ccrelay/scheme.hpp"

namespace ccrelay {

std::map<int, CacheContents> build_all_caches(const FileLibrary& library) {
  std::map<int, CacheContents> caches;
  for (int k = 1; k <= library.params().K; ++k) caches.emplace(k, build_cache(library, k));
  return caches;
}

}  // namespace ccrelay

#pragma once

// Worked-example fixtures shared by the unit tests and the acceptance binary.
// Files are lettered A, B, C, ... (file n = letter index + 1); q is 1 in both
// examples since C(K-t-1, L-1) = 1.

#include <cstdint>
#include <string>
#include <vector>

#include "ccrelay/combinatorics.hpp"
#include "ccrelay/placement.hpp"

namespace fixtures {

using ccrelay::SubpacketId;
using ccrelay::UserSet;

inline SubpacketId sp(char file, UserSet P, int q = 1) { return {file - 'A' + 1, std::move(P), q}; }

/// x^k(S) = sign * sum(ids), before power scaling.
struct UlCell {
  UserSet S;
  int k = 0;
  int sign = 1;
  std::vector<SubpacketId> ids;
};

/// K=3, t=1, L=2.
inline std::vector<UlCell> three_user_ul() {
  return {
      {{1, 2}, 1, +1, {sp('B', {1})}},
      {{1, 2}, 2, +1, {sp('A', {2})}},
      {{1, 2}, 3, -1, {sp('B', {3}), sp('A', {3})}},
      {{1, 3}, 1, +1, {sp('C', {1})}},
      {{1, 3}, 2, -1, {sp('C', {2}), sp('A', {2})}},
      {{1, 3}, 3, +1, {sp('A', {3})}},
  };
}

/// K=5, t=2, L=3.
inline std::vector<UlCell> five_user_ul() {
  return {
      {{1, 2, 3}, 1, +1, {sp('B', {1, 3})}},
      {{1, 2, 3}, 2, +1, {sp('C', {1, 2})}},
      {{1, 2, 3}, 3, +1, {sp('A', {2, 3})}},
      {{1, 2, 3}, 4, -1, {sp('B', {3, 4}), sp('A', {3, 4}), sp('A', {2, 4})}},
      {{1, 2, 3}, 5, -1, {sp('B', {3, 5}), sp('A', {3, 5}), sp('A', {2, 5})}},

      {{1, 2, 4}, 1, +1, {sp('B', {1, 4})}},
      {{1, 2, 4}, 2, +1, {sp('D', {1, 2})}},
      {{1, 2, 4}, 3, -1, {sp('D', {2, 3}), sp('D', {1, 3}), sp('A', {2, 3})}},
      {{1, 2, 4}, 4, +1, {sp('A', {2, 4})}},
      {{1, 2, 4}, 5, -1, {sp('B', {4, 5}), sp('A', {4, 5}), sp('A', {2, 5})}},

      {{1, 2, 5}, 1, +1, {sp('B', {1, 5})}},
      {{1, 2, 5}, 2, +1, {sp('E', {1, 2})}},
      {{1, 2, 5}, 3, -1, {sp('E', {2, 3}), sp('E', {1, 3}), sp('A', {2, 3})}},
      {{1, 2, 5}, 4, -1, {sp('E', {2, 4}), sp('E', {1, 4}), sp('A', {2, 4})}},
      {{1, 2, 5}, 5, +1, {sp('A', {2, 5})}},

      {{1, 3, 4}, 1, +1, {sp('C', {1, 4})}},
      {{1, 3, 4}, 2, -1, {sp('C', {2, 4}), sp('D', {1, 2}), sp('C', {1, 2})}},
      {{1, 3, 4}, 3, +1, {sp('D', {1, 3})}},
      {{1, 3, 4}, 4, +1, {sp('A', {3, 4})}},
      {{1, 3, 4}, 5, -1, {sp('C', {4, 5}), sp('A', {4, 5}), sp('A', {3, 5})}},

      {{1, 3, 5}, 1, +1, {sp('C', {1, 5})}},
      {{1, 3, 5}, 2, -1, {sp('C', {2, 5}), sp('E', {1, 2}), sp('C', {1, 2})}},
      {{1, 3, 5}, 3, +1, {sp('E', {1, 3})}},
      {{1, 3, 5}, 4, -1, {sp('E', {3, 4}), sp('E', {1, 4}), sp('A', {3, 4})}},
      {{1, 3, 5}, 5, +1, {sp('A', {3, 5})}},

      {{1, 4, 5}, 1, +1, {sp('D', {1, 5})}},
      {{1, 4, 5}, 2, -1, {sp('D', {2, 5}), sp('E', {1, 2}), sp('D', {1, 2})}},
      {{1, 4, 5}, 3, -1, {sp('D', {3, 5}), sp('E', {1, 3}), sp('D', {1, 3})}},
      {{1, 4, 5}, 4, +1, {sp('E', {1, 4})}},
      {{1, 4, 5}, 5, +1, {sp('A', {4, 5})}},
  };
}

/// g_Q at K=5: member l -> subpacket it contributes; sign -1 for Q without user 1.
struct CodewordCell {
  UserSet Q;
  int sign = 1;
  std::vector<std::pair<int, SubpacketId>> members;
};

inline std::vector<CodewordCell> five_user_codewords() {
  return {
      {{1, 2, 3}, +1, {{1, sp('B', {1, 3})}, {2, sp('C', {1, 2})}, {3, sp('A', {2, 3})}}},
      {{1, 2, 4}, +1, {{1, sp('B', {1, 4})}, {2, sp('D', {1, 2})}, {4, sp('A', {2, 4})}}},
      {{1, 2, 5}, +1, {{1, sp('B', {1, 5})}, {2, sp('E', {1, 2})}, {5, sp('A', {2, 5})}}},
      {{1, 3, 4}, +1, {{1, sp('C', {1, 4})}, {3, sp('D', {1, 3})}, {4, sp('A', {3, 4})}}},
      {{1, 3, 5}, +1, {{1, sp('C', {1, 5})}, {3, sp('E', {1, 3})}, {5, sp('A', {3, 5})}}},
      {{1, 4, 5}, +1, {{1, sp('D', {1, 5})}, {4, sp('E', {1, 4})}, {5, sp('A', {4, 5})}}},
      {{2, 3, 4}, -1, {{2, sp('C', {2, 4})}, {3, sp('D', {2, 3})}, {4, sp('B', {3, 4})}}},
      {{2, 3, 5}, -1, {{2, sp('C', {2, 5})}, {3, sp('E', {2, 3})}, {5, sp('B', {3, 5})}}},
      {{2, 4, 5}, -1, {{2, sp('D', {2, 5})}, {4, sp('E', {2, 4})}, {5, sp('B', {4, 5})}}},
      {{3, 4, 5}, -1, {{3, sp('D', {3, 5})}, {4, sp('E', {3, 4})}, {5, sp('C', {4, 5})}}},
  };
}

/// Configurations exercised by the extraction and end-to-end checks (K, t, L).
struct Kt {
  int K, t, L;
};
inline const std::vector<Kt>& extraction_configs() {
  static const std::vector<Kt> c{{3, 1, 2}, {4, 1, 2}, {5, 2, 3}, {6, 2, 3}, {7, 3, 3}};
  return c;
}

}  // namespace fixtures

#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

namespace ccrelay {

struct SystemParams;

/// n choose k. Returns 0 when k < 0 or k > n; throws on uint64 overflow.
std::uint64_t binomial(int n, int k);

/// A set of 1-based user indices, stored strictly ascending.
class UserSet {
 public:
  UserSet() = default;
  UserSet(std::initializer_list<int> members);
  explicit UserSet(std::vector<int> members);

  /// [1..n]
  static UserSet range(int n);

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  int min() const;
  int max() const;
  bool contains(int user) const;
  bool is_subset_of(const UserSet& other) const;

  UserSet with(int user) const;
  UserSet without(int user) const;
  /// Set difference this \ other.
  UserSet minus(const UserSet& other) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  /// Compact label such as "{1,2,3}".
  std::string str() const;

  friend auto operator<=>(const UserSet&, const UserSet&) = default;
  friend bool operator==(const UserSet&, const UserSet&) = default;

 private:
  std::vector<int> members_;
};

/// All k-subsets of `pool` in lexicographic order.
std::vector<UserSet> combinations(const UserSet& pool, int k);

/// 0-based lexicographic rank of `subset` among all |subset|-subsets of
/// `pool`. Throws DomainError when subset is not contained in pool.
std::uint64_t lex_rank(const UserSet& subset, const UserSet& pool);

/// Next element after l in T under cyclic order.
int circular_successor(int l, const UserSet& T);

/// One (t+L)-user activation period.
struct StagePlan {
  int stage_index = 0;  ///< 1-based, lexicographic over (t+L)-subsets of [K]
  UserSet users;
  int lone_user = 0;  ///< min(users); sends one subpacket per transmission
  std::vector<UserSet> transmissions;  ///< the set M, lexicographic
  /// q of every (t+1)-subset of `users`.
  std::map<UserSet, int> q_assignment;

  int q_of(const UserSet& Q) const;
};

/// (t+1)-subsets of stage.users that contain stage.lone_user.
std::vector<UserSet> build_set_M(const StagePlan& stage, int t);

/// Builds a stage for an arbitrary (t+L)-subset of [K].
StagePlan make_stage(int stage_index, const UserSet& users, const SystemParams& params);

/// One StagePlan per (t+L)-subset of [K], lexicographic.
std::vector<StagePlan> enumerate_stages(const SystemParams& params);

/// 1-based rank of stage.users among the (t+L)-subsets of [K] containing Q.
int q_index(const UserSet& Q, const StagePlan& stage, const SystemParams& params);

}  // namespace ccrelay

#include "ccrelay/combinatorics.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "ccrelay/errors.hpp"
#include "ccrelay/params.hpp"

namespace ccrelay {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step
    const std::uint64_t factor = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      throw DomainError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                        ") overflows 64 bits");
    }
    result = result * factor / static_cast<std::uint64_t>(i);
  }
  return result;
}

UserSet::UserSet(std::initializer_list<int> members) : UserSet(std::vector<int>(members)) {}

UserSet::UserSet(std::vector<int> members) : members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 1) throw DomainError("user indices are 1-based");
    if (i > 0 && members_[i] <= members_[i - 1]) {
      throw DomainError("UserSet members must be strictly ascending");
    }
  }
}

UserSet UserSet::range(int n) {
  std::vector<int> m(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i + 1;
  return UserSet(std::move(m));
}

int UserSet::min() const {
  if (members_.empty()) throw DomainError("min of empty UserSet");
  return members_.front();
}

int UserSet::max() const {
  if (members_.empty()) throw DomainError("max of empty UserSet");
  return members_.back();
}

bool UserSet::contains(int user) const {
  return std::binary_search(members_.begin(), members_.end(), user);
}

bool UserSet::is_subset_of(const UserSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

UserSet UserSet::with(int user) const {
  if (contains(user)) return *this;
  std::vector<int> m = members_;
  m.insert(std::upper_bound(m.begin(), m.end(), user), user);
  return UserSet(std::move(m));
}

UserSet UserSet::without(int user) const {
  std::vector<int> m;
  m.reserve(members_.size());
  for (int u : members_)
    if (u != user) m.push_back(u);
  return UserSet(std::move(m));
}

UserSet UserSet::minus(const UserSet& other) const {
  std::vector<int> m;
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                      other.members_.end(), std::back_inserter(m));
  return UserSet(std::move(m));
}

std::string UserSet::str() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < members_.size(); ++i) os << (i ? "," : "") << members_[i];
  os << '}';
  return os.str();
}

std::vector<UserSet> combinations(const UserSet& pool, int k) {
  std::vector<UserSet> out;
  const int n = pool.size();
  if (k < 0 || k > n) return out;
  const auto& p = pool.members();
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::vector<int> m(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) m[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    out.emplace_back(std::move(m));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::uint64_t lex_rank(const UserSet& subset, const UserSet& pool) {
  if (!subset.is_subset_of(pool)) {
    throw DomainError(subset.str() + " is not a subset of " + pool.str());
  }
  const auto& p = pool.members();
  const int n = pool.size();
  const int k = subset.size();
  std::uint64_t rank = 0;
  int prev = -1;
  int i = 0;
  for (int user : subset) {
    const int pos = static_cast<int>(std::lower_bound(p.begin(), p.end(), user) - p.begin());
    for (int x = prev + 1; x < pos; ++x) rank += binomial(n - 1 - x, k - 1 - i);
    prev = pos;
    ++i;
  }
  return rank;
}

int circular_successor(int l, const UserSet& T) {
  if (!T.contains(l)) {
    throw DomainError("circular_successor: " + std::to_string(l) + " not in " + T.str());
  }
  const auto& m = T.members();
  auto it = std::upper_bound(m.begin(), m.end(), l);
  return it == m.end() ? m.front() : *it;
}

int StagePlan::q_of(const UserSet& Q) const {
  auto it = q_assignment.find(Q);
  if (it == q_assignment.end()) {
    throw DomainError(Q.str() + " is not a subset of stage users " + users.str());
  }
  return it->second;
}

std::vector<UserSet> build_set_M(const StagePlan& stage, int t) {
  std::vector<UserSet> M;
  for (const UserSet& rest : combinations(stage.users.without(stage.lone_user), t)) {
    M.push_back(rest.with(stage.lone_user));
  }
  return M;
}

int q_index(const UserSet& Q, const StagePlan& stage, const SystemParams& params) {
  if (!Q.is_subset_of(stage.users)) {
    throw DomainError("q_index: " + Q.str() + " is not a subset of " + stage.users.str());
  }
  const UserSet others = UserSet::range(params.K).minus(Q);
  return static_cast<int>(lex_rank(stage.users.minus(Q), others)) + 1;
}

StagePlan make_stage(int stage_index, const UserSet& users, const SystemParams& params) {
  if (users.size() != params.t + params.L || (!users.empty() && users.max() > params.K)) {
    throw DomainError("stage users " + users.str() + " must be a (t+L)-subset of [K]");
  }
  StagePlan stage;
  stage.stage_index = stage_index;
  stage.users = users;
  stage.lone_user = users.min();
  stage.transmissions = build_set_M(stage, params.t);
  for (const UserSet& Q : combinations(users, params.t + 1)) {
    stage.q_assignment.emplace(Q, q_index(Q, stage, params));
  }
  return stage;
}

std::vector<StagePlan> enumerate_stages(const SystemParams& params) {
  params.validate();
  std::vector<StagePlan> stages;
  int index = 1;
  for (const UserSet& users : combinations(UserSet::range(params.K), params.t + params.L)) {
    stages.push_back(make_stage(index++, users, params));
  }
  return stages;
}

}  // namespace ccrelay

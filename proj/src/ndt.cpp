#include "ccrelay/ndt.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "ccrelay/combinatorics.hpp"
#include "ccrelay/errors.hpp"

namespace ccrelay {

namespace {

void require_valid(int K, int t, int L) {
  if (t < 0 || L < 1 || K < t + L) {
    throw ConfigError("invalid (K, t, L) = (" + std::to_string(K) + ", " + std::to_string(t) +
                      ", " + std::to_string(L) + "): need t >= 0, L >= 1, K ≥ t+L");
  }
}

Rational dl_ndt(int K, int t, int L) { return Rational(K - t, t + L); }

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Proposed: return "proposed";
    case Strategy::A: return "A";
    case Strategy::B: return "B";
  }
  return "?";
}

NdtReport ndt_proposed(int K, int t, int L) {
  require_valid(K, t, L);
  return {Strategy::Proposed, K, L, t, dl_ndt(K, t, L), dl_ndt(K, t, L)};
}

NdtReport ndt_strategy_a(int K, int t, int L) {
  require_valid(K, t, L);
  return {Strategy::A, K, L, t, Rational(K - t, L), dl_ndt(K, t, L)};
}

NdtReport ndt_strategy_b(int K, int t, int L) {
  require_valid(K, t, L);
  return {Strategy::B, K, L, t, Rational(K - t, t + 1), dl_ndt(K, t, L)};
}

Rational ndt_from_count(std::uint64_t transmissions, int K, int t, int L) {
  const auto denom = binomial(K, t) * binomial(K - t - 1, L - 1);
  return Rational(static_cast<std::int64_t>(transmissions), static_cast<std::int64_t>(denom));
}

std::vector<SweepRow> sweep_gamma(int K, int L, const std::vector<double>& gamma_grid) {
  std::vector<SweepRow> rows;
  for (double gamma : gamma_grid) {
    const double t = gamma * K;
    const bool integral = std::abs(t - std::round(t)) < 1e-9;
    const double tt = integral ? std::round(t) : t;
    const double dl = (K - tt) / (tt + L);
    rows.push_back({gamma, tt, integral, Strategy::A, (K - tt) / L, dl});
    rows.push_back({gamma, tt, integral, Strategy::B, (K - tt) / (tt + 1), dl});
    rows.push_back({gamma, tt, integral, Strategy::Proposed, dl, dl});
  }
  return rows;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
  return grid;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "gamma,t,strategy,T_ul,T_dl\n";
  os << std::fixed << std::setprecision(6);
  for (const SweepRow& r : rows) {
    os << r.gamma << ',' << r.t << ',' << to_string(r.strategy) << ',' << r.T_ul << ',' << r.T_dl
       << '\n';
  }
  os.unsetf(std::ios::floatfield);
}

}  // namespace ccrelay

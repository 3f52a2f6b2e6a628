#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ccrelay/params.hpp"

namespace ccrelay {

enum class Strategy { Proposed, A, B };

std::string to_string(Strategy s);

/// Normalized delivery times of one strategy, as exact rationals.
struct NdtReport {
  Strategy strategy = Strategy::Proposed;
  int K = 0;
  int L = 0;
  int t = 0;
  Rational T_ul;
  Rational T_dl;
};

/// (K-t)/(t+L) on both links. Requires t >= 0, L >= 1, K >= t+L.
NdtReport ndt_proposed(int K, int t, int L);
/// Spatial multiplexing only on the UL: (K-t)/L.
NdtReport ndt_strategy_a(int K, int t, int L);
/// Coded-caching gain only on the UL: (K-t)/(t+1).
NdtReport ndt_strategy_b(int K, int t, int L);

/// N * Q with Q = 1 / (C(K,t) C(K-t-1,L-1)): the NDT implied by an actual
/// transmission count.
Rational ndt_from_count(std::uint64_t transmissions, int K, int t, int L);

struct SweepRow {
  double gamma = 0.0;
  double t = 0.0;          ///< gamma * K, possibly non-integer
  bool integral_t = true;  ///< false flags a point only the continuous curve has
  Strategy strategy = Strategy::Proposed;
  double T_ul = 0.0;
  double T_dl = 0.0;
};

/// One row per (gamma, strategy). Non-integer t = gamma K is evaluated with
/// the closed forms taken over the reals and flagged.
std::vector<SweepRow> sweep_gamma(int K, int L, const std::vector<double>& gamma_grid);

/// gamma = 0, 0.01, ..., 1.
std::vector<double> default_gamma_grid();

/// Header `gamma,t,strategy,T_ul,T_dl`, 6-decimal fixed values.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace ccrelay

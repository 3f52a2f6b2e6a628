#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "ccrelay/errors.hpp"
#include "ccrelay/simulation.hpp"

namespace {

void print_summary(const ccrelay::SimResult& r) {
  const auto& p = r.config.params;
  std::cout << "K=" << p.K << " L=" << p.L << " t=" << p.t << " f=" << p.f
            << " mode=" << ccrelay::to_string(r.config.mode) << " trials=" << r.config.trials
            << " seed=" << r.config.seed << '\n';
  if (r.ndt) {
    std::cout << "NDT T_ul=" << r.ndt->T_ul << " T_dl=" << r.ndt->T_dl << '\n';
  }
  if (r.config.gamma_sweep) {
    std::cout << r.sweep.size() << " sweep rows\n";
  } else {
    std::cout << "UL transmissions " << r.ul_transmissions << ", DL transmissions "
              << r.dl_transmissions << '\n';
    for (const auto& u : r.users) {
      std::cout << "user " << u.user << (u.recovered ? " recovered" : " FAILED") << " decoded "
                << u.decoded_subpackets << " cached " << u.cached_subpackets << '\n';
    }
    for (const auto& e : r.energy) {
      std::cout << "user " << e.user << " UL energy expected " << e.expected << " measured "
                << e.measured << " (closed form " << e.closed_form << ")\n";
    }
    for (const auto& b : r.ber) {
      std::cout << "snr " << b.snr_db << " dB user " << b.user << " BER " << b.ber() << '\n';
    }
  }
  std::cout << "wall clock " << std::fixed << std::setprecision(3) << r.wall_clock_seconds
            << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  try {
    auto config = ccrelay::parse_config(std::vector<std::string>(argv + 1, argv + argc), std::cout);
    if (!config) return 0;
    const auto result = ccrelay::run_experiment(*config);
    if (!config->output_path.empty()) ccrelay::emit_results(result);
    print_summary(result);
    for (const auto& u : result.users) {
      if (!u.recovered && config->mode != ccrelay::Mode::Noisy) return 2;
    }
    return 0;
  } catch (const ccrelay::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

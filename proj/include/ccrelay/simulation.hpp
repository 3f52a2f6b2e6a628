#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccrelay/ndt.hpp"
#include "ccrelay/params.hpp"

namespace ccrelay {

enum class Mode { Symbolic, Noiseless, Noisy };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

/// DL mixing vectors: i.i.d. Gaussian with retry, or the fixed Vandermonde design.
enum class CodebookKind { Random, Predefined };

std::string to_string(CodebookKind c);
CodebookKind parse_codebook(const std::string& s);

struct SimConfig {
  SystemParams params;
  Mode mode = Mode::Noiseless;
  std::vector<double> snr_grid_db{0.0, 10.0, 20.0, 30.0};
  int trials = 1;
  std::uint64_t seed = 1;
  std::filesystem::path output_path;  ///< directory; empty means no files
  int workers = 1;
  bool gamma_sweep = false;  ///< NDT sweep over gamma for (K, L) instead of a simulation
  CodebookKind codebook = CodebookKind::Random;

  /// Throws ConfigError listing every violated invariant.
  void validate() const;
  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Command line (argv[0] is skipped). `--config FILE` reads flat key=value
/// lines using the flag names as keys; explicit flags win over the file.
/// Returns nullopt when help was requested (the text goes to `out`).
std::optional<SimConfig> parse_config(const std::vector<std::string>& args, std::ostream& out);
SimConfig parse_config(const std::vector<std::string>& args);

/// Flat key=value text that parse_config reads back to an equal SimConfig.
void write_config(const SimConfig& config, std::ostream& os);
SimConfig read_config_file(const std::filesystem::path& path);

struct UserStatus {
  int user = 0;
  bool recovered = false;  ///< bit-exact (noiseless), exact symbolic identity (symbolic)
  std::uint64_t decoded_subpackets = 0;
  std::uint64_t cached_subpackets = 0;
  friend bool operator==(const UserStatus&, const UserStatus&) = default;
};

struct BerCount {
  double snr_db = 0.0;
  int user = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_total = 0;  ///< decoded (not cached) bits over all trials
  double ber() const { return bits_total ? double(bit_errors) / double(bits_total) : 0.0; }
  friend bool operator==(const BerCount&, const BerCount&) = default;
};

struct UserEnergy {
  int user = 0;
  double expected = 0.0;  ///< from signal coefficients, per trial
  double measured = 0.0;  ///< mean sample power summed over the user's transmissions, trial average
  double closed_form = 0.0;     ///< P_UL N_T C(K-1, t+L-1)
  friend bool operator==(const UserEnergy&, const UserEnergy&) = default;
};

struct SimResult {
  SimConfig config;
  std::vector<UserStatus> users;
  std::vector<BerCount> ber;
  std::vector<UserEnergy> energy;
  std::optional<NdtReport> ndt;
  std::uint64_t ul_transmissions = 0;
  std::uint64_t dl_transmissions = 0;
  std::vector<SweepRow> sweep;
  double wall_clock_seconds = 0.0;  ///< not persisted, so output files stay reproducible
};

/// Placement, channels, every stage's UL and DL, decoding and reassembly,
/// over config.trials independent draws. Deterministic given config.seed and
/// independent of config.workers.
SimResult run_experiment(const SimConfig& config);

/// Per-run detail. Everything except wall-clock time and the output directory.
nlohmann::json to_json(const SimResult& result);
SimResult result_from_json(const nlohmann::json& j);

void write_ber_csv(std::ostream& os, const std::vector<BerCount>& rows);

/// Writes result.json, plus ber.csv (noisy mode) or sweep.csv (gamma sweep),
/// into result.config.output_path. Throws Error on I/O failure.
void emit_results(const SimResult& result);
void emit_results(const SimResult& result, const std::filesystem::path& dir);

}  // namespace ccrelay

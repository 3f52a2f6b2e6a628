#include "ccrelay/simulation.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "ccrelay/errors.hpp"
#include "ccrelay/scheme.hpp"
#include "ccrelay/seeding.hpp"

namespace ccrelay {

using nlohmann::json;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Symbolic: return "symbolic";
    case Mode::Noiseless: return "noiseless";
    case Mode::Noisy: return "noisy";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "symbolic") return Mode::Symbolic;
  if (s == "noiseless") return Mode::Noiseless;
  if (s == "noisy") return Mode::Noisy;
  throw ConfigError("unknown mode '" + s + "' (expected symbolic, noiseless or noisy)");
}

std::string to_string(CodebookKind c) {
  return c == CodebookKind::Random ? "random" : "predefined";
}

CodebookKind parse_codebook(const std::string& s) {
  if (s == "random") return CodebookKind::Random;
  if (s == "predefined") return CodebookKind::Predefined;
  throw ConfigError("unknown codebook '" + s + "' (expected random or predefined)");
}

void SimConfig::validate() const {
  std::vector<std::string> problems;
  try {
    params.validate();
  } catch (const ConfigError& e) {
    problems.emplace_back(e.what());
  }
  if (trials < 1) problems.emplace_back("trials >= 1 violated");
  if (workers < 1) problems.emplace_back("workers >= 1 violated");
  if (mode == Mode::Noisy && snr_grid_db.empty()) {
    problems.emplace_back("nonempty SNR grid in noisy mode violated");
  }
  if (!problems.empty()) {
    std::string msg = problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
    throw ConfigError(msg);
  }
}

namespace {

std::string shortest(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

struct Options {
  int K = 5, L = 3, t = 2, f = 8, b = 2;
  std::string mode = "noiseless";
  std::vector<double> snr{0.0, 10.0, 20.0, 30.0};
  int trials = 1;
  std::uint64_t seed = 1;
  std::string out;
  int workers = 1;
  bool sweep = false;
  std::string codebook = "random";
};

void add_options(CLI::App& app, Options& o) {
  app.add_option("--K", o.K, "number of users (and files)");
  app.add_option("--L", o.L, "BS antennas");
  app.add_option("--t", o.t, "caching parameter t = K gamma");
  app.add_option("--f", o.f, "subpacket size in bits");
  app.add_option("--bits-per-symbol", o.b, "2 = QPSK, 4 = 16-QAM, 6 = 64-QAM");
  app.add_option("--mode", o.mode, "symbolic | noiseless | noisy");
  app.add_option("--snr-db", o.snr, "SNR grid in dB (noisy mode)")->delimiter(',');
  app.add_option("--trials", o.trials, "independent library/channel/noise draws");
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--workers", o.workers, "worker threads");
  app.add_flag("--gamma-sweep", o.sweep, "write the NDT-vs-gamma sweep for (K, L)");
  app.add_option("--codebook", o.codebook, "DL mixing vectors: random | predefined");
  app.set_config("--config", "", "flat key=value file");
}

SimConfig to_config(const Options& o) {
  SimConfig c;
  c.params.K = o.K;
  c.params.L = o.L;
  c.params.t = o.t;
  c.params.f = o.f;
  c.params.bits_per_symbol = o.b;
  c.mode = parse_mode(o.mode);
  c.snr_grid_db = o.snr;
  c.trials = o.trials;
  c.seed = o.seed;
  c.output_path = o.out;
  c.workers = o.workers;
  c.gamma_sweep = o.sweep;
  c.codebook = parse_codebook(o.codebook);
  c.validate();
  return c;
}

}  // namespace

std::optional<SimConfig> parse_config(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"coded-caching relay simulator"};
  Options o;
  add_options(app, o);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  return to_config(o);
}

SimConfig parse_config(const std::vector<std::string>& args) {
  std::ostringstream sink;
  auto config = parse_config(args, sink);
  if (!config) throw ConfigError("help requested");
  return *config;
}

void write_config(const SimConfig& c, std::ostream& os) {
  os << "K=" << c.params.K << '\n';
  os << "L=" << c.params.L << '\n';
  os << "t=" << c.params.t << '\n';
  os << "f=" << c.params.f << '\n';
  os << "bits-per-symbol=" << c.params.bits_per_symbol << '\n';
  os << "mode=" << to_string(c.mode) << '\n';
  os << "snr-db=[";
  for (std::size_t i = 0; i < c.snr_grid_db.size(); ++i) {
    os << (i ? "," : "") << shortest(c.snr_grid_db[i]);
  }
  os << "]\n";
  os << "trials=" << c.trials << '\n';
  os << "seed=" << c.seed << '\n';
  os << "out=\"" << c.output_path.string() << "\"\n";
  os << "workers=" << c.workers << '\n';
  os << "gamma-sweep=" << (c.gamma_sweep ? "true" : "false") << '\n';
  os << "codebook=" << to_string(c.codebook) << '\n';
}

SimConfig read_config_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  return parse_config({"--config", path.string()});
}

namespace {

constexpr double kSymbolicTolerance = 1e-9;

struct TrialOutput {
  std::map<int, bool> recovered;
  std::map<int, std::uint64_t> decoded, cached;
  std::map<int, std::uint64_t> bit_errors, bits_total;
  std::map<int, double> expected_energy, measured_energy;
};

template <class E>
void rethrow_if(const Error& e, const std::string& msg) {
  if (dynamic_cast<const E*>(&e) != nullptr) throw E(msg);
}

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string msg = context + ": " + e.what();
  rethrow_if<DomainError>(e, msg);
  rethrow_if<ConfigError>(e, msg);
  rethrow_if<DegeneracyError>(e, msg);
  rethrow_if<PlacementConsistencyError>(e, msg);
  rethrow_if<CodebookError>(e, msg);
  rethrow_if<StageIncompleteError>(e, msg);
  rethrow_if<UnequalizableError>(e, msg);
  rethrow_if<IncompleteRecoveryError>(e, msg);
  throw Error(msg);
}

std::string stage_context(int trial, const StagePlan& stage) {
  return "trial " + std::to_string(trial) + ", stage " + std::to_string(stage.stage_index) + " " +
         stage.users.str();
}

double analytic_stage_energy(int k, const StagePlan& stage, const SystemParams& params) {
  return params.P_ul * boost::rational_cast<double>(stage_energy_ratio(k, stage, params));
}

void finish_user(int k, const FileLibrary& library, const std::map<int, CacheContents>& caches,
                 const std::map<SubpacketId, Bits>& decoded, const SystemParams& params,
                 TrialOutput& out) {
  const RecoveredFile file = reassemble_file(k, caches.at(k), decoded, params);
  out.recovered[k] = file.bits == library.file(k);
  out.decoded[k] = file.count(RecoveredFile::Source::Decoded);
  out.cached[k] = file.count(RecoveredFile::Source::Cached);
  for (const auto& [id, bits] : decoded) {
    const Bits& truth = library.bits(id);
    for (std::size_t i = 0; i < bits.size(); ++i) out.bit_errors[k] += bits[i] != truth[i];
    out.bits_total[k] += bits.size();
  }
}

CoefficientCodebook stage_codebook(const StagePlan& stage, const SystemParams& params,
                                   CodebookKind kind, std::uint64_t seed) {
  return kind == CodebookKind::Random ? generate_codebook(stage, params, seed)
                                      : predefined_codebook(stage, params);
}

TrialOutput numeric_trial(const SystemParams& params, std::uint64_t seed, int trial,
                          double noise_variance, CodebookKind kind) {
  const auto key = static_cast<std::uint64_t>(trial);
  const FileLibrary library = generate_library(params, derive_seed(seed, "library", {key}));
  const ChannelState channels = generate_channels(params, derive_seed(seed, "channels", {key}));
  const auto caches = build_all_caches(library);
  const NumericBackend backend(library, params,
                               {noise_variance, noise_variance, derive_seed(seed, "noise", {key})});
  const std::uint64_t codebook_seed = derive_seed(seed, "codebook", {key});

  TrialOutput out;
  std::map<int, std::map<SubpacketId, Bits>> decoded;
  for (const StagePlan& stage : enumerate_stages(params)) {
    try {
      const auto beamformers = derive_beamformers(stage, channels, params.t);
      const auto codebook = stage_codebook(stage, params, kind, codebook_seed);
      const auto outcome = run_stage(stage, caches, channels, beamformers, codebook, params, backend);
      for (int k : stage.users) {
        out.measured_energy[k] += outcome.ul_energy.at(k);
        out.expected_energy[k] += analytic_stage_energy(k, stage, params);
        decoded[k].merge(equalize_and_demap(k, outcome.solved.at(k), stage, channels, beamformers,
                                            params));
      }
    } catch (const Error& e) {
      rethrow_with_context(e, stage_context(trial, stage));
    }
  }
  for (int k = 1; k <= params.K; ++k) finish_user(k, library, caches, decoded[k], params, out);
  return out;
}

/// The equalized signal must be exactly the desired symbol plus noise.
bool symbolic_identity(const FormalSignal& s, const SubpacketId& id) {
  const FormalSignal residual = s.signal_part() - FormalSignal::symbol(id);
  for (const auto& [other, c] : residual.terms()) {
    if (std::abs(c) > kSymbolicTolerance) return false;
  }
  return true;
}

TrialOutput symbolic_trial(const SystemParams& params, std::uint64_t seed, int trial,
                           CodebookKind kind) {
  const auto key = static_cast<std::uint64_t>(trial);
  const FileLibrary library = generate_library(params, derive_seed(seed, "library", {key}));
  const ChannelState channels = generate_channels(params, derive_seed(seed, "channels", {key}));
  const auto caches = build_all_caches(library);
  const SymbolicBackend backend({0.0, 0.0, 0});
  const std::uint64_t codebook_seed = derive_seed(seed, "codebook", {key});

  TrialOutput out;
  std::map<int, bool> exact;
  std::map<int, std::map<SubpacketId, Bits>> decoded;
  for (const StagePlan& stage : enumerate_stages(params)) {
    try {
      const auto beamformers = derive_beamformers(stage, channels, params.t);
      const auto codebook = stage_codebook(stage, params, kind, codebook_seed);
      const auto outcome = run_stage(stage, caches, channels, beamformers, codebook, params, backend);
      for (int k : stage.users) {
        out.measured_energy[k] += outcome.ul_energy.at(k);
        out.expected_energy[k] += outcome.ul_energy.at(k);
        const auto eq =
            equalize(k, outcome.solved.at(k), stage, channels, beamformers, params, backend);
        exact.try_emplace(k, true);
        for (const auto& [id, s] : eq) {
          exact[k] = exact[k] && symbolic_identity(s, id);
          decoded[k].emplace(id, library.bits(id));
        }
      }
    } catch (const Error& e) {
      rethrow_with_context(e, stage_context(trial, stage));
    }
  }
  for (int k = 1; k <= params.K; ++k) {
    finish_user(k, library, caches, decoded[k], params, out);
    out.recovered[k] = out.recovered[k] && exact[k];
  }
  return out;
}

/// Runs fn(i) for i in [0, n) on `workers` threads; results land in slot i.
template <class Fn>
std::vector<TrialOutput> parallel_map(int n, int workers, Fn fn) {
  std::vector<TrialOutput> results(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        results[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int extra = std::min(workers, n) - 1;
  for (int w = 0; w < extra; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void check_closed_form_energy(const std::vector<UserEnergy>& energy) {
  for (const UserEnergy& e : energy) {
    if (std::abs(e.expected - e.closed_form) > 1e-9 * std::max(1.0, e.closed_form)) {
      std::ostringstream os;
      os << "user " << e.user << " UL energy " << e.expected << " differs from " << e.closed_form;
      throw Error(os.str());
    }
  }
}

}  // namespace

SimResult run_experiment(const SimConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  SimResult result;
  result.config = config;
  const SystemParams& params = config.params;
  result.ndt = ndt_proposed(params.K, params.t, params.L);

  if (config.gamma_sweep) {
    result.sweep = sweep_gamma(params.K, params.L, default_gamma_grid());
    result.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
  }

  result.ul_transmissions = params.num_stages() * params.transmissions_per_stage();
  result.dl_transmissions = result.ul_transmissions;
  const Rational achieved = ndt_from_count(result.ul_transmissions, params.K, params.t, params.L);
  if (achieved != result.ndt->T_ul || achieved != result.ndt->T_dl) {
    throw Error("transmission count does not reproduce the closed-form NDT");
  }

  const auto closed_form = boost::rational_cast<double>(
      Rational(static_cast<std::int64_t>(params.transmissions_per_stage() *
                                         binomial(params.K - 1, params.t + params.L - 1))));
  const int trials = config.trials;

  auto energy_of = [&](const std::vector<TrialOutput>& outs, double p_ul) {
    std::vector<UserEnergy> energy;
    for (int k = 1; k <= params.K; ++k) {
      UserEnergy e{k, 0.0, 0.0, p_ul * closed_form};
      for (const auto& o : outs) {
        e.expected += o.expected_energy.at(k);
        e.measured += o.measured_energy.at(k);
      }
      e.expected /= static_cast<double>(outs.size());
      e.measured /= static_cast<double>(outs.size());
      energy.push_back(e);
    }
    return energy;
  };
  auto status_of = [&](const std::vector<TrialOutput>& outs) {
    for (int k = 1; k <= params.K; ++k) {
      UserStatus s{k, true, outs.front().decoded.at(k), outs.front().cached.at(k)};
      for (const auto& o : outs) s.recovered = s.recovered && o.recovered.at(k);
      result.users.push_back(s);
    }
  };

  if (config.mode == Mode::Noisy) {
    const int points = static_cast<int>(config.snr_grid_db.size());
    auto outs = parallel_map(points * trials, config.workers, [&](int i) {
      SystemParams p = params;
      p.P_ul = p.P_bs = std::pow(10.0, config.snr_grid_db[static_cast<std::size_t>(i / trials)] / 10.0);
      return numeric_trial(p, config.seed, i % trials, 1.0, config.codebook);
    });
    for (int s = 0; s < points; ++s) {
      for (int k = 1; k <= params.K; ++k) {
        BerCount c{config.snr_grid_db[static_cast<std::size_t>(s)], k, 0, 0};
        for (int tr = 0; tr < trials; ++tr) {
          const auto& o = outs[static_cast<std::size_t>(s * trials + tr)];
          c.bit_errors += o.bit_errors.at(k);
          c.bits_total += o.bits_total.at(k);
        }
        result.ber.push_back(c);
      }
    }
    // Energy and status at the highest SNR point.
    std::vector<TrialOutput> last(outs.end() - trials, outs.end());
    status_of(last);
    result.energy =
        energy_of(last, std::pow(10.0, config.snr_grid_db.back() / 10.0));
  } else {
    auto outs = parallel_map(trials, config.workers, [&](int i) {
      return config.mode == Mode::Symbolic
                 ? symbolic_trial(params, config.seed, i, config.codebook)
                 : numeric_trial(params, config.seed, i, 0.0, config.codebook);
    });
    status_of(outs);
    result.energy = energy_of(outs, params.P_ul);
    check_closed_form_energy(result.energy);
  }
  result.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

namespace {

json config_json(const SimConfig& c) {
  return {{"K", c.params.K},
          {"L", c.params.L},
          {"t", c.params.t},
          {"f", c.params.f},
          {"bits_per_symbol", c.params.bits_per_symbol},
          {"P_ul", c.params.P_ul},
          {"P_bs", c.params.P_bs},
          {"mode", to_string(c.mode)},
          {"snr_db", c.snr_grid_db},
          {"trials", c.trials},
          {"seed", c.seed},
          {"workers", c.workers},
          {"gamma_sweep", c.gamma_sweep},
          {"codebook", to_string(c.codebook)}};
}

SimConfig config_from(const json& j) {
  SimConfig c;
  c.params.K = j.at("K").get<int>();
  c.params.L = j.at("L").get<int>();
  c.params.t = j.at("t").get<int>();
  c.params.f = j.at("f").get<int>();
  c.params.bits_per_symbol = j.at("bits_per_symbol").get<int>();
  c.params.P_ul = j.at("P_ul").get<double>();
  c.params.P_bs = j.at("P_bs").get<double>();
  c.mode = parse_mode(j.at("mode").get<std::string>());
  c.snr_grid_db = j.at("snr_db").get<std::vector<double>>();
  c.trials = j.at("trials").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.workers = j.at("workers").get<int>();
  c.gamma_sweep = j.at("gamma_sweep").get<bool>();
  c.codebook = parse_codebook(j.at("codebook").get<std::string>());
  return c;
}

std::string rational_str(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) throw Error("malformed rational '" + s + "'");
  return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

Strategy parse_strategy(const std::string& s) {
  if (s == "proposed") return Strategy::Proposed;
  if (s == "A") return Strategy::A;
  if (s == "B") return Strategy::B;
  throw Error("unknown strategy '" + s + "'");
}

}  // namespace

json to_json(const SimResult& r) {
  json j;
  j["config"] = config_json(r.config);
  j["users"] = json::array();
  for (const auto& u : r.users) {
    j["users"].push_back({{"user", u.user},
                          {"recovered", u.recovered},
                          {"decoded_subpackets", u.decoded_subpackets},
                          {"cached_subpackets", u.cached_subpackets}});
  }
  j["ber"] = json::array();
  for (const auto& b : r.ber) {
    j["ber"].push_back({{"snr_db", b.snr_db},
                        {"user", b.user},
                        {"bit_errors", b.bit_errors},
                        {"bits_total", b.bits_total}});
  }
  j["ul_energy"] = json::array();
  for (const auto& e : r.energy) {
    j["ul_energy"].push_back(
        {{"user", e.user}, {"expected", e.expected}, {"measured", e.measured}, {"closed_form", e.closed_form}});
  }
  if (r.ndt) {
    j["ndt"] = {{"strategy", to_string(r.ndt->strategy)},
                {"K", r.ndt->K},
                {"L", r.ndt->L},
                {"t", r.ndt->t},
                {"T_ul", rational_str(r.ndt->T_ul)},
                {"T_dl", rational_str(r.ndt->T_dl)}};
  } else {
    j["ndt"] = nullptr;
  }
  j["transmissions"] = {{"ul", r.ul_transmissions}, {"dl", r.dl_transmissions}};
  j["sweep"] = json::array();
  for (const auto& s : r.sweep) {
    j["sweep"].push_back({{"gamma", s.gamma},
                          {"t", s.t},
                          {"integral_t", s.integral_t},
                          {"strategy", to_string(s.strategy)},
                          {"T_ul", s.T_ul},
                          {"T_dl", s.T_dl}});
  }
  return j;
}

SimResult result_from_json(const json& j) {
  SimResult r;
  r.config = config_from(j.at("config"));
  for (const auto& u : j.at("users")) {
    r.users.push_back({u.at("user").get<int>(), u.at("recovered").get<bool>(),
                       u.at("decoded_subpackets").get<std::uint64_t>(),
                       u.at("cached_subpackets").get<std::uint64_t>()});
  }
  for (const auto& b : j.at("ber")) {
    r.ber.push_back({b.at("snr_db").get<double>(), b.at("user").get<int>(),
                     b.at("bit_errors").get<std::uint64_t>(), b.at("bits_total").get<std::uint64_t>()});
  }
  for (const auto& e : j.at("ul_energy")) {
    r.energy.push_back({e.at("user").get<int>(), e.at("expected").get<double>(),
                        e.at("measured").get<double>(), e.at("closed_form").get<double>()});
  }
  if (const auto& n = j.at("ndt"); !n.is_null()) {
    r.ndt = NdtReport{parse_strategy(n.at("strategy").get<std::string>()), n.at("K").get<int>(),
                      n.at("L").get<int>(), n.at("t").get<int>(),
                      parse_rational(n.at("T_ul").get<std::string>()),
                      parse_rational(n.at("T_dl").get<std::string>())};
  }
  r.ul_transmissions = j.at("transmissions").at("ul").get<std::uint64_t>();
  r.dl_transmissions = j.at("transmissions").at("dl").get<std::uint64_t>();
  for (const auto& s : j.at("sweep")) {
    r.sweep.push_back({s.at("gamma").get<double>(), s.at("t").get<double>(),
                       s.at("integral_t").get<bool>(),
                       parse_strategy(s.at("strategy").get<std::string>()),
                       s.at("T_ul").get<double>(), s.at("T_dl").get<double>()});
  }
  return r;
}

void write_ber_csv(std::ostream& os, const std::vector<BerCount>& rows) {
  os << "snr_db,user,bit_errors,bits_total\n";
  for (const auto& r : rows) {
    os << shortest(r.snr_db) << ',' << r.user << ',' << r.bit_errors << ',' << r.bits_total << '\n';
  }
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << text;
  os.close();
  if (!os) throw Error("failed writing " + path.string());
}

}  // namespace

void emit_results(const SimResult& result) { emit_results(result, result.config.output_path); }

void emit_results(const SimResult& result, const std::filesystem::path& dir) {
  if (dir.empty()) throw Error("no output directory given");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "result.json", to_json(result).dump(2) + "\n");
  if (result.config.mode == Mode::Noisy && !result.config.gamma_sweep) {
    std::ostringstream os;
    write_ber_csv(os, result.ber);
    write_file(dir / "ber.csv", os.str());
  }
  if (result.config.gamma_sweep) {
    std::ostringstream os;
    write_sweep_csv(os, result.sweep);
    write_file(dir / "sweep.csv", os.str());
  }
}

}  // namespace ccrelay

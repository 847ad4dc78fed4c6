// photonlink: command-line front end for the microwave photon-link models.
// Subcommands: rate-sweep, absorber-design, reconstruct, em-fit, simulate.
// All outputs are RFC-4180-style CSV (UTF-8, LF) with one leading '#'
// provenance comment echoing the tool version and the full command line,
// so identical invocations reproduce files byte for byte.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "photonlink/absorber.hpp"
#include "photonlink/hbt_channel.hpp"
#include "photonlink/mixture.hpp"
#include "photonlink/poisson_channel.hpp"
#include "photonlink/radiometry.hpp"
#include "photonlink/reconstruction.hpp"
#include "photonlink/rng.hpp"
#include "photonlink/simulator.hpp"
#include "photonlink/version.hpp"

namespace {

using namespace photonlink;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct CsvWriter {
  std::ostream* out = nullptr;
  std::ofstream file;

  CsvWriter(const std::string& path, const std::string& provenance) {
    if (path.empty() || path == "-") {
      out = &std::cout;
    } else {
      file.open(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
      out = &file;
    }
    *out << "# " << provenance << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) *out << ",";
      *out << cells[i];
    }
    *out << "\n";
  }
};

std::vector<double> parse_range(const std::string& text) {
  double start = 0, stop = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':')
    throw CLI::ValidationError("range", "expected start:stop:step, got '" + text + "'");
  if (!(step > 0.0)) throw CLI::ValidationError("range", "step must be > 0");
  if (stop < start) throw CLI::ValidationError("range", "stop must be >= start");
  std::vector<double> values;
  for (double v = start; v <= stop + 1e-9 * step; v += step) values.push_back(v);
  return values;
}

std::array<double, 3> parse_triple(const std::string& text) {
  std::array<double, 3> out{};
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> out[0] >> c1 >> out[1] >> c2 >> out[2]) || c1 != ',' || c2 != ',')
    throw CLI::ValidationError("triple", "expected a,b,c, got '" + text + "'");
  return out;
}

std::string provenance_line(int argc, char** argv) {
  std::string line = std::string("photonlink ") + kVersion + " |";
  for (int i = 1; i < argc; ++i) {
    line += " ";
    line += argv[i];
  }
  return line;
}

// ---- rate-sweep ----------------------------------------------------------

struct RateSweepArgs {
  std::string channel = "poisson";
  std::string mode = "hard";
  std::vector<double> temps{300.0};
  std::string power_range;
  double freq_ghz = 5.0;
  double slot_ms = 1.0;
  double capture_p = 0.9;
  std::string coherent = "0.25,0.25,0.25";
  std::string thermal = "0.36,0.07,0.07";
  std::string out;
};

int run_rate_sweep(const RateSweepArgs& args, const std::string& provenance) {
  const std::vector<double> powers = parse_range(args.power_range);
  CsvWriter csv(args.out, provenance);

  if (args.channel == "poisson") {
    csv.row({"power_dbm", "temp_k", "threshold_opt", "prior_opt", "rate_bits"});
    const RateMode mode = args.mode == "soft" ? RateMode::soft : RateMode::hard;
    for (const double temp : args.temps) {
      std::vector<LinkBudget> budgets;
      for (const double p : powers)
        budgets.push_back({p, args.freq_ghz * 1e9, args.slot_ms * 1e-3, temp, args.capture_p});
      const auto curve = rate_curve(budgets, mode);
      for (const auto& pt : curve)
        csv.row({fmt(pt.power_dbm), fmt(temp), std::to_string(pt.threshold), fmt(pt.prior),
                 fmt(pt.rate_bits)});
    }
  } else {
    csv.row({"power_dbm", "temp_k", "prior_opt", "rate_bits"});
    HbtChannelParams templ;
    templ.coherent_probs = parse_triple(args.coherent);
    templ.thermal_probs = parse_triple(args.thermal);
    for (const double temp : args.temps) {
      std::vector<LinkBudget> budgets;
      for (const double p : powers)
        budgets.push_back({p, args.freq_ghz * 1e9, args.slot_ms * 1e-3, temp, 1.0});
      const auto curve = hbt_rate_curve(budgets, templ);
      for (const auto& pt : curve)
        csv.row({fmt(pt.power_dbm), fmt(temp), fmt(pt.prior), fmt(pt.rate_bits)});
    }
  }
  return 0;
}

// ---- absorber-design -----------------------------------------------------

int run_absorber_design(int n_max, const std::string& out, const std::string& provenance) {
  CsvWriter csv(out, provenance);
  csv.row({"N", "gamma_opt", "phase_opt", "absorption_opt"});
  for (int n = 1; n <= n_max; ++n) {
    const auto design = optimize_chain(n);
    csv.row({std::to_string(n), fmt(design.gamma), fmt(design.phase), fmt(design.absorption)});
  }
  return 0;
}

// ---- reconstruct ---------------------------------------------------------

struct ReconstructArgs {
  std::string scheme = "dual";
  int order = 4;
  std::int64_t samples = 1000000;
  std::uint64_t seed = 1;
  double gain = 2.0;
  double amplitude = 0.5;
  double noise_var = 1.0;
  std::string out;
};

std::vector<double> gaussian_raw_moments(double mean, double var, int order) {
  std::vector<double> m(order + 1, 0.0);
  m[0] = 1.0;
  if (order >= 1) m[1] = mean;
  for (int n = 2; n <= order; ++n) m[n] = mean * m[n - 1] + (n - 1) * var * m[n - 2];
  return m;
}

MomentTable measured_table_from_samples(const std::vector<std::complex<double>>& samples,
                                        int order) {
  MomentTable t(order);
  for (int n = 0; n <= order; ++n) {
    for (int m = 0; n + m <= order; ++m) {
      std::complex<double> acc{0.0, 0.0};
      for (const auto& s : samples)
        acc += std::pow(std::conj(s), n) * std::pow(s, m);
      t.set(n, m, acc / static_cast<double>(samples.size()));
    }
  }
  return t;
}

int run_reconstruct_single(const ReconstructArgs& args, const std::string& provenance) {
  const double sigma = std::sqrt(args.noise_var / 2.0);
  const auto draw = [&](CounterRng& rng, std::complex<double> amp) {
    const std::complex<double> h{sigma * rng.next_gaussian(), sigma * rng.next_gaussian()};
    return std::sqrt(args.gain) * (amp + std::conj(h));
  };

  constexpr int kBatches = 16;
  const std::int64_t per_batch = std::max<std::int64_t>(1, args.samples / kBatches);
  std::vector<MomentTable> recovered_batches;
  for (int b = 0; b < kBatches; ++b) {
    std::vector<std::complex<double>> sig, vac;
    sig.reserve(per_batch);
    vac.reserve(per_batch);
    CounterRng rng_sig(args.seed, 2 * b);
    CounterRng rng_vac(args.seed, 2 * b + 1);
    for (std::int64_t i = 0; i < per_batch; ++i) {
      sig.push_back(draw(rng_sig, {args.amplitude, 0.0}));
      vac.push_back(draw(rng_vac, {0.0, 0.0}));
    }
    const auto measured = measured_table_from_samples(sig, args.order);
    const auto calib = measured_table_from_samples(vac, args.order);
    recovered_batches.push_back(invert_moments(measured, calib, args.gain));
  }

  const auto truth = MomentTable::coherent({args.amplitude, 0.0}, args.order);
  CsvWriter csv(args.out, provenance);
  csv.row({"n", "m", "true_re", "true_im", "recovered_re", "recovered_im", "stderr_re",
           "stderr_im"});
  for (int n = 0; n <= args.order; ++n) {
    for (int m = 0; n + m <= args.order; ++m) {
      std::complex<double> mean{0.0, 0.0};
      for (const auto& t : recovered_batches) mean += t.at(n, m);
      mean /= static_cast<double>(kBatches);
      double var_re = 0.0, var_im = 0.0;
      for (const auto& t : recovered_batches) {
        var_re += std::pow(t.at(n, m).real() - mean.real(), 2);
        var_im += std::pow(t.at(n, m).imag() - mean.imag(), 2);
      }
      const double se_re = std::sqrt(var_re / (kBatches - 1.0) / kBatches);
      const double se_im = std::sqrt(var_im / (kBatches - 1.0) / kBatches);
      csv.row({std::to_string(n), std::to_string(m), fmt(truth.at(n, m).real()),
               fmt(truth.at(n, m).imag()), fmt(mean.real()), fmt(mean.imag()), fmt(se_re),
               fmt(se_im)});
    }
  }
  return 0;
}

int run_reconstruct_dual(const ReconstructArgs& args, const std::string& provenance) {
  // Gaussian test configuration: S ~ N(1, 0.25), chi ~ N(0, 1), V ~ N(0, 4).
  constexpr double kSignalMean = 1.0, kSignalVar = 0.25;
  constexpr double kNoiseVar = 1.0, kRefVar = 4.0;

  DualPathConfig config;
  config.gain = args.gain;
  config.max_order = args.order;
  config.reference_moments = gaussian_raw_moments(0.0, kRefVar, args.order + 1);

  std::vector<std::pair<int, int>> keys;
  for (int n = 1; n <= args.order; ++n) {
    keys.push_back({n, 0});
    keys.push_back({0, n});
  }
  for (int n = 2; n <= args.order; ++n) keys.push_back({n - 1, 1});

  constexpr int kBatches = 16;
  const std::int64_t per_batch = std::max<std::int64_t>(1, args.samples / kBatches);
  std::vector<DualPathMoments> batches;
  for (int b = 0; b < kBatches; ++b) {
    CounterRng rng(args.seed, 100 + b);
    CrossMoments cross;
    for (std::int64_t i = 0; i < per_batch; ++i) {
      const double s = kSignalMean + std::sqrt(kSignalVar) * rng.next_gaussian();
      const double v = std::sqrt(kRefVar) * rng.next_gaussian();
      const double chi1 = std::sqrt(kNoiseVar) * rng.next_gaussian();
      const double chi2 = std::sqrt(kNoiseVar) * rng.next_gaussian();
      const double c1 = args.gain * (s + v + chi1);
      const double c2 = args.gain * (-s + v + chi2);
      for (const auto& [l, m] : keys)
        cross[{l, m}] += std::pow(c1, l) * std::pow(c2, m) / static_cast<double>(per_batch);
    }
    batches.push_back(dual_path_recover(cross, config));
  }

  const auto true_signal = gaussian_raw_moments(kSignalMean, kSignalVar, args.order);
  const auto true_noise = gaussian_raw_moments(0.0, kNoiseVar, args.order);

  CsvWriter csv(args.out, provenance);
  csv.row({"quantity", "order", "true_value", "recovered", "stderr"});
  const auto emit = [&](const char* name, int order, double truth,
                        const std::function<double(const DualPathMoments&)>& get) {
    double mean = 0.0;
    for (const auto& b : batches) mean += get(b);
    mean /= kBatches;
    double var = 0.0;
    for (const auto& b : batches) var += std::pow(get(b) - mean, 2);
    const double se = std::sqrt(var / (kBatches - 1.0) / kBatches);
    csv.row({name, std::to_string(order), fmt(truth), fmt(mean), fmt(se)});
  };
  for (int n = 1; n <= args.order; ++n)
    emit("S^n", n, true_signal[n], [n](const DualPathMoments& m) { return m.signal[n]; });
  for (int n = 1; n <= std::min(args.order, 2); ++n) {
    emit("chi1^n", n, true_noise[n], [n](const DualPathMoments& m) { return m.noise1[n]; });
    emit("chi2^n", n, true_noise[n], [n](const DualPathMoments& m) { return m.noise2[n]; });
  }
  return 0;
}

// ---- em-fit ----------------------------------------------------------------

int run_em_fit(const std::string& input, int k, double tol, int max_iter,
               const std::string& out, const std::string& provenance) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open input file: " + input);
  std::vector<std::int64_t> counts;
  std::int64_t v = 0;
  while (in >> v) counts.push_back(v);
  if (counts.empty()) throw std::runtime_error("no counts in input file: " + input);

  const auto result = em_fit(counts, k, std::nullopt, max_iter, tol);
  const char* status = result.status == EmStatus::converged      ? "converged"
                       : result.status == EmStatus::degenerate   ? "degenerate"
                                                                 : "max_iterations";
  CsvWriter csv(out, provenance);
  *csv.out << "# status=" << status << " iterations=" << result.iterations
           << " log_likelihood=" << fmt(result.log_likelihood) << "\n";
  csv.row({"component", "weight", "mean"});
  for (std::size_t j = 0; j < result.model.components(); ++j)
    csv.row({std::to_string(j), fmt(result.model.weights[j]), fmt(result.model.means[j])});
  return 0;
}

// ---- simulate --------------------------------------------------------------

SimConfig parse_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  SimConfig config;
  const auto get = [&](const char* key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  if (const auto s = get("channel")) config.channel_kind =
      *s == "hbt" ? ChannelKind::hbt : ChannelKind::poisson;
  if (const auto s = get("lambda_sig")) config.stats.lambda_sig = std::stod(*s);
  if (const auto s = get("lambda_bg")) config.stats.lambda_bg = std::stod(*s);
  if (const auto s = get("capture_prob")) config.stats.capture_prob = std::stod(*s);
  if (const auto s = get("prior_one")) config.prior_one = std::stod(*s);
  if (const auto s = get("n_symbols")) config.n_symbols = std::stoll(*s);
  if (const auto s = get("detector"))
    config.detector = *s == "map" ? DetectorKind::map : DetectorKind::threshold;
  if (const auto s = get("threshold")) config.threshold = std::stoll(*s);
  if (const auto s = get("thinning")) config.thinning_path = (*s == "1" || *s == "true");
  if (const auto s = get("workers")) config.workers = std::stoi(*s);
  if (config.channel_kind == ChannelKind::hbt) {
    HbtChannelParams params;
    params.stats = config.stats;
    if (const auto s = get("coherent_probs")) params.coherent_probs = parse_triple(*s);
    if (const auto s = get("thermal_probs")) params.thermal_probs = parse_triple(*s);
    config.hbt_params = params;
  }
  return config;
}

int run_simulate(const std::string& config_path, std::uint64_t seed, const std::string& out,
                 const std::string& provenance) {
  SimConfig config = parse_sim_config(config_path);
  config.seed = seed;
  const SimReport report = run_simulation(config);

  CsvWriter csv(out, provenance);
  csv.row({"metric", "value"});
  csv.row({"n_symbols", std::to_string(report.n_symbols)});
  csv.row({"n_errors", std::to_string(report.n_errors)});
  csv.row({"empirical_error_rate", fmt(report.empirical_error_rate)});
  csv.row({"error_rate_stderr", fmt(report.error_rate_stderr)});
  csv.row({"analytic_error_rate", fmt(report.analytic_error_rate)});
  csv.row({"empirical_mi_estimate", fmt(report.empirical_mi_estimate)});
  for (const auto& [triple, count] : report.counts_histogram) {
    std::string key = "hist:" + std::to_string(triple.n00);
    if (config.channel_kind == ChannelKind::hbt)
      key += ":" + std::to_string(triple.n01) + ":" + std::to_string(triple.n10);
    csv.row({key, std::to_string(count)});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photonlink: microwave photon-level link modeling"};
  app.require_subcommand(1);
  const std::string provenance = provenance_line(argc, argv);

  RateSweepArgs rs;
  auto* sweep = app.add_subcommand("rate-sweep", "achievable-rate sweep over signal power");
  sweep->add_option("--channel", rs.channel, "poisson or hbt")
      ->check(CLI::IsMember({"poisson", "hbt"}));
  sweep->add_option("--mode", rs.mode, "hard or soft decision (poisson channel)")
      ->check(CLI::IsMember({"hard", "soft"}));
  sweep->add_option("--temp-k", rs.temps, "antenna temperatures in kelvin")->delimiter(',');
  sweep->add_option("--power-dbm", rs.power_range, "power sweep start:stop:step in dBm")
      ->required();
  sweep->add_option("--freq-ghz", rs.freq_ghz, "carrier frequency in GHz");
  sweep->add_option("--slot-ms", rs.slot_ms, "slot duration in ms");
  sweep->add_option("--capture-p", rs.capture_p, "detector capture probability");
  sweep->add_option("--coherent-probs", rs.coherent, "hbt coherent outcome probs a,b,c");
  sweep->add_option("--thermal-probs", rs.thermal, "hbt thermal outcome probs a,b,c");
  sweep->add_option("--out", rs.out, "output CSV path (default stdout)");

  int design_n = 1;
  std::string design_out;
  auto* design = app.add_subcommand("absorber-design",
                                    "optimal homogeneous absorber chains for N = 1..n");
  design->add_option("--n", design_n, "largest chain length")->required()
      ->check(CLI::Range(1, 64));
  design->add_option("--out", design_out, "output CSV path (default stdout)");

  ReconstructArgs rc;
  auto* rec = app.add_subcommand("reconstruct", "moment reconstruction on synthetic data");
  rec->add_option("--scheme", rc.scheme, "single or dual path")
      ->check(CLI::IsMember({"single", "dual"}));
  rec->add_option("--order", rc.order, "maximum moment order")->check(CLI::Range(1, 12));
  rec->add_option("--samples", rc.samples, "number of Monte Carlo samples");
  rec->add_option("--seed", rc.seed, "random seed");
  rec->add_option("--gain", rc.gain, "amplifier gain");
  rec->add_option("--amplitude", rc.amplitude, "coherent amplitude (single scheme)");
  rec->add_option("--noise-var", rc.noise_var, "noise variance (single scheme)");
  rec->add_option("--out", rc.out, "output CSV path (default stdout)");

  std::string em_input, em_out;
  int em_k = 1, em_max_iter = 1000;
  double em_tol = 1e-8;
  auto* em = app.add_subcommand("em-fit", "fit a Poisson mixture to a count file");
  em->add_option("--k", em_k, "number of mixture components")->required()
      ->check(CLI::Range(1, 64));
  em->add_option("--input", em_input, "whitespace-separated counts file")->required();
  em->add_option("--tol", em_tol, "relative log-likelihood tolerance");
  em->add_option("--max-iter", em_max_iter, "iteration cap");
  em->add_option("--out", em_out, "output CSV path (default stdout)");

  std::string sim_config, sim_out;
  std::uint64_t sim_seed = 0;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo link simulation");
  sim->add_option("--config", sim_config, "key = value config file")->required();
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--out", sim_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) return run_rate_sweep(rs, provenance);
    if (design->parsed()) return run_absorber_design(design_n, design_out, provenance);
    if (rec->parsed())
      return rc.scheme == "single" ? run_reconstruct_single(rc, provenance)
                                   : run_reconstruct_dual(rc, provenance);
    if (em->parsed()) return run_em_fit(em_input, em_k, em_tol, em_max_iter, em_out, provenance);
    if (sim->parsed()) return run_simulate(sim_config, sim_seed, sim_out, provenance);
  } catch (const CLI::ParseError& e) {
    std::cerr << "photonlink: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "photonlink: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

#include "ofdmici/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ofdmici/ekf_offset.hpp"
#include "ofdmici/rng.hpp"
#include "ofdmici/self_cancel.hpp"

namespace ofdmici {

std::string format_real17(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string fmt17(double v) { return format_real17(v); }

void fill_bits(BitVec& bits, std::size_t count, SeededRng& rng) {
  bits.resize(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng.next_u64();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
}

std::int64_t count_bit_errors(const BitVec& a, const BitVec& b) {
  std::int64_t errors = 0;
  for (std::size_t i = 0; i < a.size(); ++i) errors += (a[i] != b[i]);
  return errors;
}

ComplexVec active_bins(const FrequencySymbols& symbols, const OfdmConfig& config) {
  return ComplexVec(symbols.values.begin(), symbols.values.begin() + config.active_carriers);
}

struct FrameOutcome {
  std::int64_t bits = 0;
  std::int64_t errors = 0;
  std::int64_t symbols = 0;  // N-sample blocks consumed
};

FrameOutcome run_frame_none(const OfdmConfig& cfg, double eps, const NoiseSpec& noise,
                            SeededRng& rng, BitVec& bits) {
  fill_bits(bits, static_cast<std::size_t>(cfg.active_carriers) * cfg.modulation.bits_per_symbol(),
            rng);
  FrequencySymbols tx = place_payload(map_bits(bits, cfg.modulation), cfg);
  TimeSamples channel_out =
      add_awgn(apply_cfo(ofdm_modulate(tx, cfg), {eps}, cfg), noise, cfg, rng);
  BitVec rx = demap_symbols(active_bins(ofdm_demodulate(channel_out, cfg), cfg), cfg.modulation);
  return {static_cast<std::int64_t>(bits.size()), count_bit_errors(bits, rx), 1};
}

FrameOutcome run_frame_sc(const OfdmConfig& cfg, double eps, const NoiseSpec& noise,
                          SeededRng& rng, BitVec& bits) {
  fill_bits(bits,
            static_cast<std::size_t>(cfg.active_carriers / 2) * cfg.modulation.bits_per_symbol(),
            rng);
  FrequencySymbols tx = sc_encode(map_bits(bits, cfg.modulation), cfg);
  TimeSamples channel_out =
      add_awgn(apply_cfo(ofdm_modulate(tx, cfg), {eps}, cfg), noise, cfg, rng);
  BitVec rx = demap_symbols(sc_decode(ofdm_demodulate(channel_out, cfg), cfg), cfg.modulation);
  return {static_cast<std::int64_t>(bits.size()), count_bit_errors(bits, rx), 1};
}

std::pair<TimeSamples, TimeSamples> split_halves(const TimeSamples& block, int n) {
  TimeSamples first{ComplexVec(block.values.begin(), block.values.begin() + n),
                    block.start_index};
  TimeSamples second{ComplexVec(block.values.begin() + n, block.values.end()),
                     block.start_index + n};
  return {std::move(first), std::move(second)};
}

FrameOutcome run_frame_ml(const OfdmConfig& cfg, double eps, const NoiseSpec& noise,
                          SeededRng& rng, BitVec& bits) {
  fill_bits(bits, static_cast<std::size_t>(cfg.active_carriers) * cfg.modulation.bits_per_symbol(),
            rng);
  FrequencySymbols tx = place_payload(map_bits(bits, cfg.modulation), cfg);
  TimeSamples channel_out =
      add_awgn(apply_cfo(ml_frame_build(tx, cfg), {eps}, cfg), noise, cfg, rng);
  auto [first, second] = split_halves(channel_out, cfg.fft_size);

  RepeatedObservation obs{ofdm_demodulate(first, cfg), ofdm_demodulate(second, cfg)};
  OffsetEstimate est = ml_estimate(obs, cfg);

  // Both halves carry the payload; each is corrected and decided on its own.
  std::int64_t errors = 0;
  for (const TimeSamples* half : {&first, &second}) {
    BitVec rx = demap_symbols(active_bins(ml_correct(*half, est, cfg), cfg), cfg.modulation);
    errors += count_bit_errors(bits, rx);
  }
  return {2 * static_cast<std::int64_t>(bits.size()), errors, 2};
}

FrameOutcome run_frame_ekf(const OfdmConfig& cfg, double eps, const NoiseSpec& noise,
                           SeededRng& rng, BitVec& bits, const TimeSamples& preamble_tx) {
  fill_bits(bits, static_cast<std::size_t>(cfg.active_carriers) * cfg.modulation.bits_per_symbol(),
            rng);
  FrequencySymbols tx = place_payload(map_bits(bits, cfg.modulation), cfg);
  TimeSamples data = ofdm_modulate(tx, cfg);

  // One frame = Np preamble samples then the data symbol, one continuous
  // phase ramp across both.
  TimeSamples frame;
  frame.start_index = 0;
  frame.values = preamble_tx.values;
  frame.values.insert(frame.values.end(), data.values.begin(), data.values.end());
  TimeSamples channel_out = add_awgn(apply_cfo(frame, {eps}, cfg), noise, cfg, rng);
  auto [preamble_rx, data_rx] = split_halves(channel_out, cfg.fft_size);

  Preamble preamble{preamble_tx, preamble_rx, noise.sigma2_time(cfg.fft_size), cfg.fft_size};
  EkfResult ekf = ekf_estimate(preamble, 0.0, 1.0);
  BitVec rx = demap_symbols(active_bins(ekf_correct(data_rx, ekf.estimate, cfg), cfg),
                            cfg.modulation);
  // Preamble samples carry no information bits.
  return {static_cast<std::int64_t>(bits.size()), count_bit_errors(bits, rx), 2};
}

BerRecord simulate_point(const OfdmConfig& cfg, MitigationScheme scheme, double eps,
                         double ebn0_db, std::int64_t symbols_per_point, std::int64_t max_bits,
                         std::uint64_t seed) {
  SeededRng rng(seed);
  NoiseSpec noise = ebn0_to_sigma(ebn0_db, cfg.modulation);
  TimeSamples preamble_tx;
  if (scheme == MitigationScheme::EkfPreamble) preamble_tx = preamble_time_samples(cfg);

  BerRecord rec{scheme, cfg.modulation.name(), eps, ebn0_db, 0, 0, 0.0, 1.0, seed};
  rec.throughput_factor =
      (scheme == MitigationScheme::SelfCancel || scheme == MitigationScheme::MlRepeat) ? 0.5 : 1.0;

  BitVec bits;
  std::int64_t symbols_done = 0;
  while (symbols_done < symbols_per_point && (max_bits == 0 || rec.bits_sent < max_bits)) {
    FrameOutcome out;
    switch (scheme) {
      case MitigationScheme::None:
        out = run_frame_none(cfg, eps, noise, rng, bits);
        break;
      case MitigationScheme::SelfCancel:
        out = run_frame_sc(cfg, eps, noise, rng, bits);
        break;
      case MitigationScheme::MlRepeat:
        out = run_frame_ml(cfg, eps, noise, rng, bits);
        break;
      case MitigationScheme::EkfPreamble:
        out = run_frame_ekf(cfg, eps, noise, rng, bits, preamble_tx);
        break;
    }
    rec.bits_sent += out.bits;
    rec.bit_errors += out.errors;
    symbols_done += out.symbols;
  }
  rec.ber = rec.bits_sent > 0 ? static_cast<double>(rec.bit_errors) / rec.bits_sent : 0.0;
  return rec;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    parts.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

double parse_real(const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number '" + text + "'");
  }
}

}  // namespace

std::string scheme_name(MitigationScheme scheme) {
  switch (scheme) {
    case MitigationScheme::None: return "none";
    case MitigationScheme::SelfCancel: return "sc";
    case MitigationScheme::MlRepeat: return "ml";
    case MitigationScheme::EkfPreamble: return "ekf";
  }
  return "?";
}

MitigationScheme parse_scheme(std::string_view name) {
  if (name == "none") return MitigationScheme::None;
  if (name == "sc") return MitigationScheme::SelfCancel;
  if (name == "ml") return MitigationScheme::MlRepeat;
  if (name == "ekf") return MitigationScheme::EkfPreamble;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected none, sc, ml or ekf)");
}

std::uint64_t derive_point_seed(std::uint64_t base_seed, MitigationScheme scheme,
                                const ModulationScheme& modulation, double epsilon,
                                double ebn0_db) {
  std::string key = scheme_name(scheme) + "|" + modulation.name() + "|" + fmt17(epsilon) + "|" +
                    fmt17(ebn0_db);
  return splitmix64(base_seed ^ fnv1a64(key));
}

int sweep_thread_count() {
  if (const char* env = std::getenv("OFDM_ICI_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<BerRecord> run_ber_sweep(const SweepConfig& sweep) {
  if (sweep.schemes.empty() || sweep.epsilons.empty() || sweep.ebn0_db.empty())
    throw std::invalid_argument("run_ber_sweep: schemes, epsilons and ebn0_db must be non-empty");
  if (sweep.symbols_per_point < 1)
    throw std::invalid_argument("run_ber_sweep: symbols_per_point must be >= 1");
  if (sweep.max_bits < 0) throw std::invalid_argument("run_ber_sweep: max_bits must be >= 0");
  for (MitigationScheme scheme : sweep.schemes) {
    if (scheme != MitigationScheme::MlRepeat) continue;
    for (double eps : sweep.epsilons)
      if (!(std::abs(eps) < 0.5))
        throw std::invalid_argument("run_ber_sweep: ml requires |epsilon| < 0.5, got " +
                                    fmt17(eps));
  }
  if (std::find(sweep.schemes.begin(), sweep.schemes.end(), MitigationScheme::SelfCancel) !=
          sweep.schemes.end() &&
      sweep.config.active_carriers % 2 != 0)
    throw std::invalid_argument("run_ber_sweep: sc requires even active_carriers");

  struct Point {
    MitigationScheme scheme;
    double eps;
    double ebn0;
  };
  std::vector<Point> grid;
  for (MitigationScheme scheme : sweep.schemes)
    for (double eps : sweep.epsilons)
      for (double ebn0 : sweep.ebn0_db) grid.push_back({scheme, eps, ebn0});

  std::vector<BerRecord> records(grid.size(),
                                 BerRecord{MitigationScheme::None, "", 0, 0, 0, 0, 0, 0, 0});
  auto run_one = [&](std::size_t i) {
    const Point& p = grid[i];
    std::uint64_t seed =
        derive_point_seed(sweep.base_seed, p.scheme, sweep.config.modulation, p.eps, p.ebn0);
    records[i] = simulate_point(sweep.config, p.scheme, p.eps, p.ebn0, sweep.symbols_per_point,
                                sweep.max_bits, seed);
  };

  int workers = std::min<int>(sweep_thread_count(), static_cast<int>(grid.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < grid.size(); i = next++) run_one(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  return records;
}

std::vector<CirSweepRow> run_cir_sweep(int fft_size, const std::vector<double>& epsilon_grid) {
  std::vector<CirSweepRow> rows;
  rows.reserve(epsilon_grid.size());
  for (double eps : epsilon_grid)
    rows.push_back({cir_standard(eps, fft_size), cir_self_cancel(eps, fft_size)});
  return rows;
}

EstimatorStats measure_estimator_stats(EstimatorMethod method, double epsilon, double ebn0_db,
                                       int trials, std::uint64_t seed, const OfdmConfig& config) {
  if (trials < 1) throw std::invalid_argument("measure_estimator_stats: trials must be >= 1");
  SeededRng rng(seed);
  NoiseSpec noise = ebn0_to_sigma(ebn0_db, config.modulation);
  TimeSamples preamble_tx;
  if (method == EstimatorMethod::Ekf) preamble_tx = preamble_time_samples(config);

  std::vector<double> errors(trials);
  BitVec bits;
  for (int t = 0; t < trials; ++t) {
    double estimate;
    if (method == EstimatorMethod::Ml) {
      fill_bits(bits,
                static_cast<std::size_t>(config.active_carriers) *
                    config.modulation.bits_per_symbol(),
                rng);
      FrequencySymbols tx = place_payload(map_bits(bits, config.modulation), config);
      TimeSamples channel_out =
          add_awgn(apply_cfo(ml_frame_build(tx, config), {epsilon}, config), noise, config, rng);
      auto [first, second] = split_halves(channel_out, config.fft_size);
      RepeatedObservation obs{ofdm_demodulate(first, config), ofdm_demodulate(second, config)};
      estimate = ml_estimate(obs, config).epsilon_hat;
    } else {
      TimeSamples received =
          add_awgn(apply_cfo(preamble_tx, {epsilon}, config), noise, config, rng);
      Preamble preamble{preamble_tx, received, noise.sigma2_time(config.fft_size),
                        config.fft_size};
      estimate = ekf_estimate(preamble, 0.0, 1.0).estimate.epsilon_hat;
    }
    errors[t] = estimate - epsilon;
  }

  EstimatorStats stats{0.0, 0.0, 0.0};
  for (double e : errors) {
    stats.mean_error += e;
    stats.rmse += e * e;
  }
  stats.mean_error /= trials;
  stats.rmse = std::sqrt(stats.rmse / trials);
  std::vector<double> absolute(trials);
  for (int t = 0; t < trials; ++t) absolute[t] = std::abs(errors[t]);
  std::sort(absolute.begin(), absolute.end());
  stats.median_abs_error = (trials % 2 == 1)
                               ? absolute[trials / 2]
                               : 0.5 * (absolute[trials / 2 - 1] + absolute[trials / 2]);
  return stats;
}

void write_results(const std::vector<BerRecord>& records, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_results: cannot open '" + tmp.string() + "'");
    out << "# generator=" << kRngName << " version=" << kVersion << "\n";
    out << "scheme,modulation,epsilon,ebn0_db,bits_sent,bit_errors,ber,throughput_factor,seed\n";
    for (const BerRecord& r : records) {
      out << scheme_name(r.scheme) << ',' << r.modulation << ',' << fmt17(r.epsilon) << ','
          << fmt17(r.ebn0_db) << ',' << r.bits_sent << ',' << r.bit_errors << ',' << fmt17(r.ber)
          << ',' << fmt17(r.throughput_factor) << ',' << r.seed << "\n";
    }
    if (!out.flush()) throw std::runtime_error("write_results: write failed on '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw std::runtime_error("write_results: cannot rename '" + tmp.string() + "' to '" +
                             path.string() + "': " + ec.message());
}

std::vector<double> parse_value_grid(std::string_view text) {
  std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty value grid");
  if (t.find(',') != std::string::npos) {
    std::vector<double> values;
    for (const std::string& part : split(t, ',')) values.push_back(parse_real(part));
    return values;
  }
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts = split(t, ':');
    if (parts.size() > 3) throw std::invalid_argument("bad range '" + t + "'");
    double lo = parse_real(parts[0]);
    double hi = parse_real(parts[1]);
    double step = parts.size() == 3 ? parse_real(parts[2]) : 1.0;
    if (!(step > 0) || hi < lo)
      throw std::invalid_argument("bad range '" + t + "' (need lo <= hi and step > 0)");
    std::vector<double> values;
    // Half-step slack keeps the nominal endpoint in despite rounding.
    for (double v = lo; v <= hi + step / 2; v += step) values.push_back(v);
    return values;
  }
  return {parse_real(t)};
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_sweep_config: cannot open '" + path.string() + "'");

  int fft_size = 64;
  int active = 48;
  std::string modulation = "bpsk";
  SweepConfig sweep{OfdmConfig(fft_size, active, ModulationScheme::parse(modulation)), {}, {}, {}};

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("load_sweep_config: line " + std::to_string(lineno) +
                                  " is not key=value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key == "fft_size") {
      fft_size = static_cast<int>(parse_real(value));
    } else if (key == "active_carriers") {
      active = static_cast<int>(parse_real(value));
    } else if (key == "modulation") {
      modulation = value;
    } else if (key == "schemes") {
      sweep.schemes.clear();
      for (const std::string& part : split(value, ',')) sweep.schemes.push_back(parse_scheme(part));
    } else if (key == "epsilons") {
      sweep.epsilons = parse_value_grid(value);
    } else if (key == "ebn0_db") {
      sweep.ebn0_db = parse_value_grid(value);
    } else if (key == "symbols_per_point") {
      sweep.symbols_per_point = static_cast<std::int64_t>(parse_real(value));
    } else if (key == "base_seed") {
      try {
        sweep.base_seed = std::stoull(value);
      } catch (const std::exception&) {
        throw std::invalid_argument("load_sweep_config: bad base_seed '" + value + "'");
      }
    } else if (key == "max_bits") {
      sweep.max_bits = static_cast<std::int64_t>(parse_real(value));
    } else {
      throw std::invalid_argument("load_sweep_config: unknown key '" + key + "' on line " +
                                  std::to_string(lineno));
    }
  }
  sweep.config = OfdmConfig(fft_size, active, ModulationScheme::parse(modulation));
  return sweep;
}

}  // namespace ofdmici

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ofdmici/channel.hpp"
#include "ofdmici/ici.hpp"
#include "ofdmici/ml_offset.hpp"
#include "ofdmici/modem.hpp"

namespace ofdmici {

inline constexpr std::string_view kVersion = "0.1.0";

enum class MitigationScheme { None, SelfCancel, MlRepeat, EkfPreamble };

std::string scheme_name(MitigationScheme scheme);          // none, sc, ml, ekf
MitigationScheme parse_scheme(std::string_view name);

struct SweepConfig {
  OfdmConfig config;
  std::vector<MitigationScheme> schemes;
  std::vector<double> epsilons;
  std::vector<double> ebn0_db;  // +infinity means noiseless
  std::int64_t symbols_per_point = 1000;  // budget in N-sample OFDM symbols
  std::uint64_t base_seed = 1;
  std::int64_t max_bits = 0;  // extra cap on information bits; 0 = none
};

struct BerRecord {
  MitigationScheme scheme;
  std::string modulation;
  double epsilon;
  double ebn0_db;
  std::int64_t bits_sent;
  std::int64_t bit_errors;
  double ber;
  double throughput_factor;  // 1/2 for sc and ml, 1 for none and ekf
  std::uint64_t seed;        // per-point derived seed
};

/**
 * Per-point seed: splitmix64(base_seed XOR fnv1a64(key)) where key is
 * "<scheme>|<modulation>|<epsilon>|<ebn0_db>" with the reals printed as
 * %.17g. Points are independent of one another: extending the grid never
 * perturbs existing records.
 */
std::uint64_t derive_point_seed(std::uint64_t base_seed, MitigationScheme scheme,
                                const ModulationScheme& modulation, double epsilon,
                                double ebn0_db);

/**
 * Full-chain Monte-Carlo BER over the (scheme, epsilon, ebn0) grid. Each
 * trial frame is an independent realization (payload, noise) with the CFO
 * phase ramp starting at sample 0; within a frame the ramp is continuous
 * (the ML repeat spans 2N samples, the EKF frame is preamble + data symbol).
 * Only information bits are counted; the ML receiver demodulates and counts
 * both halves of the repeat, the EKF preamble carries no information bits.
 *
 * Grid points run in parallel (OFDM_ICI_THREADS workers, 0/unset = auto);
 * records are returned in grid order regardless of scheduling.
 */
std::vector<BerRecord> run_ber_sweep(const SweepConfig& sweep);

struct CirSweepRow {
  CirPoint standard;
  CirPoint self_cancel;
};

std::vector<CirSweepRow> run_cir_sweep(int fft_size, const std::vector<double>& epsilon_grid);

struct EstimatorStats {
  double mean_error;
  double rmse;
  double median_abs_error;
};

// Estimation-only trials (no data decisions): ML uses a random repeated
// symbol per trial, EKF the fixed preamble. ebn0_db = +infinity disables
// noise. Deterministic given seed.
EstimatorStats measure_estimator_stats(EstimatorMethod method, double epsilon, double ebn0_db,
                                       int trials, std::uint64_t seed, const OfdmConfig& config);

/**
 * CSV writer: one comment line "# generator=<rng-name> version=<semver>",
 * then the header
 *   scheme,modulation,epsilon,ebn0_db,bits_sent,bit_errors,ber,throughput_factor,seed
 * then one row per record, reals with 17 significant digits. The file is
 * written atomically (temp file + rename).
 */
void write_results(const std::vector<BerRecord>& records, const std::filesystem::path& path);

// Plain-text key=value sweep description; keys mirror the SweepConfig
// fields (fft_size, active_carriers, modulation, schemes, epsilons,
// ebn0_db, symbols_per_point, base_seed, max_bits). Lists are
// comma-separated; ranges a:b (step 1) and a:b:step are accepted.
SweepConfig load_sweep_config(const std::filesystem::path& path);

// Grid helpers shared by the config loader and the CLI: "3", "1,2,5",
// "1:15" (step 1), "0.05:0.45:0.05" (inclusive of the endpoint up to a half
// step), "inf".
std::vector<double> parse_value_grid(std::string_view text);

// Worker count for parallel sweeps: OFDM_ICI_THREADS, 0 or unset = auto.
int sweep_thread_count();

// %.17g: round-trip-exact real serialization used in every CSV surface.
std::string format_real17(double value);

}  // namespace ofdmici

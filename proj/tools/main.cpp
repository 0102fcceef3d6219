#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ofdmici/harness.hpp"
#include "ofdmici/ici.hpp"

namespace {

using namespace ofdmici;

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed on '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" + path.string() +
                             "': " + ec.message());
}

struct BerArgs {
  std::string schemes = "none";
  std::string mod = "bpsk";
  std::string eps;
  std::string ebn0;
  std::string out;
  std::string preset;
  std::string config_file;
  int fft_size = 64;
  int active = 48;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::int64_t symbols = 1000;
  std::int64_t bits = 0;
};

int run_ber(const BerArgs& args) {
  SweepConfig sweep{OfdmConfig(64, 48, ModulationScheme::parse("bpsk")), {}, {}, {}};
  if (!args.config_file.empty()) {
    sweep = load_sweep_config(args.config_file);
    if (args.seed_given) sweep.base_seed = args.seed;
  } else {
    int n = args.fft_size;
    int active = args.active;
    std::int64_t symbols = args.symbols;
    if (!args.preset.empty()) {
      if (args.preset != "paper-table-6-1")
        throw std::invalid_argument("unknown preset '" + args.preset + "'");
      n = 1024;
      active = 768;
      symbols = 100;
    }
    sweep.config = OfdmConfig(n, active, ModulationScheme::parse(args.mod));
    sweep.epsilons = parse_value_grid(args.eps);
    sweep.ebn0_db = parse_value_grid(args.ebn0);
    sweep.symbols_per_point = symbols;
    sweep.base_seed = args.seed;
    sweep.max_bits = args.bits;
    sweep.schemes.clear();
    std::stringstream names(args.schemes);
    std::string part;
    while (std::getline(names, part, ',')) sweep.schemes.push_back(parse_scheme(part));
  }

  auto t0 = std::chrono::steady_clock::now();
  std::vector<BerRecord> records = run_ber_sweep(sweep);
  auto t1 = std::chrono::steady_clock::now();
  write_results(records, args.out);

  double secs = std::chrono::duration<double>(t1 - t0).count();
  std::cerr << "ber: " << records.size() << " grid points in " << format_real17(secs) << " s\n";
  for (const BerRecord& r : records) {
    if (r.scheme == MitigationScheme::EkfPreamble) {
      // Np = N known samples ahead of each N-sample data symbol.
      std::cerr << "ber: ekf preamble overhead = 0.5 (Np = fft_size, one data symbol per frame)\n";
      break;
    }
  }
  return 0;
}

struct CirArgs {
  int fft_size = 64;
  std::string eps_grid;
  std::string out;
};

int run_cir(const CirArgs& args) {
  if (args.fft_size < 4 || args.fft_size % 2 != 0)
    throw std::invalid_argument("--n must be an even value >= 4");
  std::vector<double> grid = parse_value_grid(args.eps_grid);
  std::vector<CirSweepRow> rows = run_cir_sweep(args.fft_size, grid);

  std::string csv = "epsilon,cir_standard_db,cir_self_cancel_db,improvement_db\n";
  for (const CirSweepRow& row : rows) {
    double improvement = row.self_cancel.cir_db - row.standard.cir_db;
    csv += format_real17(row.standard.epsilon) + "," + format_real17(row.standard.cir_db) + "," +
           format_real17(row.self_cancel.cir_db) + "," + format_real17(improvement) + "\n";
  }
  write_text_atomic(args.out, csv);
  return 0;
}

struct EstimateArgs {
  std::string method = "ml";
  double eps = 0.0;
  double ebn0 = 0.0;
  bool noiseless = false;
  bool have_ebn0 = false;
  int trials = 100;
  std::uint64_t seed = 1;
  int fft_size = 64;
  int active = 48;
  std::string mod = "bpsk";
};

int run_estimate(const EstimateArgs& args) {
  EstimatorMethod method;
  if (args.method == "ml")
    method = EstimatorMethod::Ml;
  else if (args.method == "ekf")
    method = EstimatorMethod::Ekf;
  else
    throw std::invalid_argument("--method must be ml or ekf");
  if (method == EstimatorMethod::Ml && !(std::abs(args.eps) < 0.5))
    throw std::invalid_argument("ml acquisition requires |eps| < 0.5");
  if (args.noiseless == args.have_ebn0)
    throw std::invalid_argument("exactly one of --ebn0 and --noiseless is required");

  double ebn0 = args.noiseless ? std::numeric_limits<double>::infinity() : args.ebn0;
  OfdmConfig config(args.fft_size, args.active, ModulationScheme::parse(args.mod));
  EstimatorStats stats =
      measure_estimator_stats(method, args.eps, ebn0, args.trials, args.seed, config);
  std::cout << format_real17(stats.mean_error) << ',' << format_real17(stats.rmse) << ','
            << format_real17(stats.median_abs_error) << "\n";
  return 0;
}

struct CoeffArgs {
  int fft_size = 64;
  double eps = 0.0;
  std::string out;
};

int run_coeffs(const CoeffArgs& args) {
  if (args.fft_size < 2) throw std::invalid_argument("--n must be >= 2");
  std::string csv = "d,abs_S,abs_Sprime,abs_Sdoubleprime,re_S,im_S\n";
  for (int d = -args.fft_size / 2; d < args.fft_size / 2; ++d) {
    ComplexSample s = ici_coefficient(d, args.eps, args.fft_size);
    ComplexSample sp = sc_mod_coefficient(d, args.eps, args.fft_size);
    ComplexSample spp = sc_demod_coefficient(d, args.eps, args.fft_size);
    csv += std::to_string(d) + "," + format_real17(std::abs(s)) + "," +
           format_real17(std::abs(sp)) + "," + format_real17(std::abs(spp)) + "," +
           format_real17(s.real()) + "," + format_real17(s.imag()) + "\n";
  }
  write_text_atomic(args.out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDM carrier-frequency-offset / ICI mitigation toolbox"};
  app.require_subcommand(1);

  BerArgs ber;
  CLI::App* ber_cmd = app.add_subcommand("ber", "Monte-Carlo BER sweep over a mitigation grid");
  ber_cmd->add_option("--scheme", ber.schemes, "Schemes, comma-separated: none,sc,ml,ekf");
  ber_cmd->add_option("--mod", ber.mod, "Modulation: bpsk, psk4/16/64, qam4/16/64");
  auto* eps_opt = ber_cmd->add_option("--eps", ber.eps, "Offset grid (value, list or a:b:step)");
  auto* ebn0_opt = ber_cmd->add_option("--ebn0", ber.ebn0, "Eb/N0 dB grid (a:b = step 1; inf ok)");
  ber_cmd->add_option("--out", ber.out, "Output CSV path")->required();
  ber_cmd->add_option("--preset", ber.preset, "Named preset: paper-table-6-1 (1024 carriers)");
  ber_cmd->add_option("--config", ber.config_file, "key=value sweep file instead of grid flags");
  ber_cmd->add_option("--n", ber.fft_size, "FFT size (power of two)");
  ber_cmd->add_option("--active", ber.active, "Active carriers");
  auto* seed_opt = ber_cmd->add_option("--seed", ber.seed, "Base seed for per-point stream derivation");
  ber_cmd->add_option("--symbols", ber.symbols, "OFDM symbol budget per grid point");
  ber_cmd->add_option("--bits", ber.bits, "Information-bit cap per grid point (0 = none)");

  CirArgs cir;
  CLI::App* cir_cmd = app.add_subcommand("cir", "Theoretical CIR versus offset");
  cir_cmd->add_option("--n", cir.fft_size, "FFT size (even, >= 4)")->required();
  cir_cmd->add_option("--eps-grid", cir.eps_grid, "Offset grid (value, list or a:b:step)")
      ->required();
  cir_cmd->add_option("--out", cir.out, "Output CSV path")->required();

  EstimateArgs est;
  CLI::App* est_cmd = app.add_subcommand("estimate", "Offset-estimator accuracy trials");
  est_cmd->add_option("--method", est.method, "ml or ekf")->required();
  est_cmd->add_option("--eps", est.eps, "True normalized offset")->required();
  auto* est_ebn0 = est_cmd->add_option("--ebn0", est.ebn0, "Eb/N0 in dB");
  est_cmd->add_flag("--noiseless", est.noiseless, "Disable channel noise");
  est_cmd->add_option("--trials", est.trials, "Number of independent trials");
  est_cmd->add_option("--seed", est.seed, "Seed");
  est_cmd->add_option("--n", est.fft_size, "FFT size (power of two)");
  est_cmd->add_option("--active", est.active, "Active carriers");
  est_cmd->add_option("--mod", est.mod, "Modulation (ml payloads)");

  CoeffArgs coeffs;
  CLI::App* coeffs_cmd = app.add_subcommand("coeffs", "Leakage coefficient tables");
  coeffs_cmd->add_option("--n", coeffs.fft_size, "FFT size")->required();
  coeffs_cmd->add_option("--eps", coeffs.eps, "Normalized offset")->required();
  coeffs_cmd->add_option("--out", coeffs.out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(ber_cmd)) {
      if (ber.config_file.empty() && (!*eps_opt || !*ebn0_opt))
        throw std::invalid_argument("ber needs --eps and --ebn0 (or --config)");
      ber.seed_given = static_cast<bool>(*seed_opt);
      return run_ber(ber);
    }
    if (app.got_subcommand(cir_cmd)) return run_cir(cir);
    if (app.got_subcommand(est_cmd)) {
      est.have_ebn0 = static_cast<bool>(*est_ebn0);
      return run_estimate(est);
    }
    if (app.got_subcommand(coeffs_cmd)) return run_coeffs(coeffs);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

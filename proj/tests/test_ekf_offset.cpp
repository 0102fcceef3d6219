#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "ofdmici/channel.hpp"
#include "ofdmici/ekf_offset.hpp"
#include "ofdmici/harness.hpp"
#include "ofdmici/rng.hpp"

using namespace ofdmici;

namespace {

const OfdmConfig kCfg(64, 48, ModulationScheme(ModulationKind::Psk, 2));

Preamble make_preamble(double eps, double ebn0_db, std::uint64_t seed) {
  TimeSamples tx = preamble_time_samples(kCfg);
  NoiseSpec noise = ebn0_to_sigma(ebn0_db, kCfg.modulation);
  SeededRng rng(seed);
  TimeSamples rx = add_awgn(apply_cfo(tx, {eps}, kCfg), noise, kCfg, rng);
  return {tx, rx, noise.sigma2_time(kCfg.fft_size), kCfg.fft_size};
}

Preamble make_noiseless(double eps) {
  TimeSamples tx = preamble_time_samples(kCfg);
  TimeSamples rx = apply_cfo(tx, {eps}, kCfg);
  return {tx, rx, 0.0, kCfg.fft_size};
}

}  // namespace

TEST_CASE("observation slope matches a central finite difference") {
  TimeSamples tx = preamble_time_samples(kCfg);
  const double eps_hat = 0.13;
  const double h = 1e-6;
  for (int i : {1, 7, 40, 63}) {
    double theta = 2.0 * std::numbers::pi * i / 64.0;
    ComplexSample slope = ComplexSample{0.0, theta} * std::polar(1.0, theta * eps_hat) *
                          tx.values[i];
    ComplexSample fplus = tx.values[i] * std::polar(1.0, theta * (eps_hat + h));
    ComplexSample fminus = tx.values[i] * std::polar(1.0, theta * (eps_hat - h));
    ComplexSample numeric = (fplus - fminus) / (2.0 * h);
    CHECK(std::abs(slope - numeric) <= 1e-6 * std::abs(numeric));
  }
}

TEST_CASE("initializing at the true offset is a fixed point when noiseless") {
  EkfResult res = ekf_estimate(make_noiseless(0.2), 0.2, 1.0);
  for (const EkfState& st : res.trace) CHECK(st.epsilon_hat == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("noiseless convergence from a cold start") {
  for (double eps : {-0.3, -0.1, 0.05, 0.1, 0.3}) {
    EkfResult res = ekf_estimate(make_noiseless(eps), 0.0, 1.0);
    CHECK(std::abs(res.estimate.epsilon_hat - eps) < 1e-6);
  }
}

TEST_CASE("error variance is non-increasing and strictly shrinks under noise") {
  EkfResult res = ekf_estimate(make_preamble(0.1, 10.0, 50), 0.0, 1.0);
  REQUIRE(res.trace.size() == 65);
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    CHECK(res.trace[i].error_variance >= 0.0);
    CHECK(res.trace[i].error_variance <= res.trace[i - 1].error_variance);
  }
  CHECK(res.trace.back().error_variance < res.trace.front().error_variance);
}

TEST_CASE("identical inputs produce bit-identical traces") {
  Preamble p1 = make_preamble(0.25, 12.0, 51);
  Preamble p2 = make_preamble(0.25, 12.0, 51);
  EkfResult a = ekf_estimate(p1, 0.0, 1.0);
  EkfResult b = ekf_estimate(p2, 0.0, 1.0);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].epsilon_hat == b.trace[i].epsilon_hat);
    CHECK(a.trace[i].error_variance == b.trace[i].error_variance);
  }
}

TEST_CASE("degenerate preambles are rejected") {
  Preamble empty{TimeSamples{}, TimeSamples{}, 0.0, 64};
  CHECK_THROWS_AS(ekf_estimate(empty, 0.0, 1.0), std::invalid_argument);

  Preamble zeros{TimeSamples{ComplexVec(64, {0.0, 0.0}), 0},
                 TimeSamples{ComplexVec(64, {0.0, 0.0}), 0}, 0.0, 64};
  CHECK_THROWS_AS(ekf_estimate(zeros, 0.0, 1.0), std::invalid_argument);

  Preamble ok = make_noiseless(0.1);
  CHECK_THROWS_AS(ekf_estimate(ok, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ekf_estimate(Preamble{ok.transmitted, ok.received, -1.0, 64}, 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("the unscaled-innovation gain variant differs from the standard one") {
  Preamble p = make_preamble(0.1, 10.0, 52);
  EkfResult standard = ekf_estimate(p, 0.0, 1.0, EkfGainForm::Standard);
  EkfResult unscaled = ekf_estimate(p, 0.0, 1.0, EkfGainForm::UnscaledInnovation);
  CHECK(standard.estimate.epsilon_hat != unscaled.estimate.epsilon_hat);
  CHECK(std::abs(standard.estimate.epsilon_hat - 0.1) < 0.05);
}

TEST_CASE("correction mirrors the ml contract") {
  SeededRng rng(53);
  BitVec bits(48);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
  FrequencySymbols tx = place_payload(map_bits(bits, kCfg.modulation), kCfg);
  TimeSamples data = ofdm_modulate(tx, kCfg);
  data.start_index = 64;  // data symbol follows the preamble
  TimeSamples shifted = apply_cfo(data, {0.3}, kCfg);

  FrequencySymbols plain = ekf_correct(shifted, {0.0, EstimatorMethod::Ekf}, kCfg);
  FrequencySymbols direct = ofdm_demodulate(shifted, kCfg);
  for (int k = 0; k < 64; ++k) CHECK(plain.values[k] == direct.values[k]);

  FrequencySymbols fixed = ekf_correct(shifted, {0.3, EstimatorMethod::Ekf}, kCfg);
  for (int k = 0; k < 64; ++k) CHECK(std::abs(fixed.values[k] - tx.values[k]) < 1e-9);
}

TEST_CASE("correcting with the estimate lowers the paired bit error count") {
  // One frame layout as in the sweep: preamble then data, continuous ramp,
  // same noise draw for the corrected and uncorrected receivers.
  const double eps = 0.3;
  NoiseSpec noise = ebn0_to_sigma(15.0, kCfg.modulation);
  SeededRng rng(54);

  TimeSamples preamble_tx = preamble_time_samples(kCfg);
  std::int64_t errors_raw = 0, errors_fixed = 0;
  for (int frame = 0; frame < 50; ++frame) {
    BitVec bits(48);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    FrequencySymbols tx = place_payload(map_bits(bits, kCfg.modulation), kCfg);
    TimeSamples data = ofdm_modulate(tx, kCfg);

    TimeSamples whole;
    whole.start_index = 0;
    whole.values = preamble_tx.values;
    whole.values.insert(whole.values.end(), data.values.begin(), data.values.end());
    TimeSamples rx = add_awgn(apply_cfo(whole, {eps}, kCfg), noise, kCfg, rng);

    TimeSamples pre_rx{ComplexVec(rx.values.begin(), rx.values.begin() + 64), 0};
    TimeSamples data_rx{ComplexVec(rx.values.begin() + 64, rx.values.end()), 64};

    EkfResult ekf = ekf_estimate(
        Preamble{preamble_tx, pre_rx, noise.sigma2_time(64), 64}, 0.0, 1.0);

    FrequencySymbols uncorrected = ofdm_demodulate(data_rx, kCfg);
    BitVec raw = demap_symbols(
        ComplexVec(uncorrected.values.begin(), uncorrected.values.begin() + 48), kCfg.modulation);
    FrequencySymbols corrected = ekf_correct(data_rx, ekf.estimate, kCfg);
    BitVec fixed = demap_symbols(ComplexVec(corrected.values.begin(), corrected.values.begin() + 48),
                                 kCfg.modulation);
    for (int i = 0; i < 48; ++i) {
      errors_raw += raw[i] != bits[i];
      errors_fixed += fixed[i] != bits[i];
    }
  }
  CHECK(errors_fixed < errors_raw);
}

TEST_CASE("median residual at 15 dB stays under 0.01") {
  EstimatorStats stats = measure_estimator_stats(EstimatorMethod::Ekf, 0.3, 15.0, 100, 79, kCfg);
  CHECK(stats.median_abs_error < 0.01);
}

TEST_CASE("pilot pattern is fixed, unit magnitude on the active band") {
  FrequencySymbols bins = preamble_pilot_bins(kCfg);
  for (int k = 0; k < 48; ++k) CHECK(std::abs(bins.values[k]) == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 48; k < 64; ++k) CHECK(bins.values[k] == ComplexSample{0.0, 0.0});
  FrequencySymbols again = preamble_pilot_bins(kCfg);
  for (int k = 0; k < 64; ++k) CHECK(bins.values[k] == again.values[k]);
}

TEST_CASE("pilot pattern matches the published fixture") {
  std::ifstream fixture(OFDMICI_FIXTURE_DIR "/preamble_pilot_n64_a48.csv");
  REQUIRE(fixture.is_open());
  FrequencySymbols bins = preamble_pilot_bins(kCfg);
  std::string header;
  std::getline(fixture, header);
  CHECK(header == "bin,re,im");
  std::string line;
  int rows = 0;
  while (std::getline(fixture, line)) {
    int k = 0;
    double re = 0.0, im = 0.0;
    REQUIRE(std::sscanf(line.c_str(), "%d,%lf,%lf", &k, &re, &im) == 3);
    REQUIRE(k >= 0);
    REQUIRE(k < 64);
    CHECK(std::abs(bins.values[k] - ComplexSample{re, im}) < 1e-15);
    ++rows;
  }
  CHECK(rows == 64);
}

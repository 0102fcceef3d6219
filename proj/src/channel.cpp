#include "ofdmici/channel.hpp"

#include <cmath>
#include <numbers>

namespace ofdmici {

NoiseSpec ebn0_to_sigma(double ebn0_db, const ModulationScheme& scheme) {
  NoiseSpec spec;
  spec.ebn0_db = ebn0_db;
  // Es = 1, so Es/N0 = log2(M) * Eb/N0 and sigma2 per bin is its inverse.
  // +inf dB collapses to exactly zero noise.
  spec.sigma2_freq = 1.0 / (scheme.bits_per_symbol() * std::pow(10.0, ebn0_db / 10.0));
  return spec;
}

TimeSamples apply_cfo(const TimeSamples& samples, NormalizedCfo cfo, const OfdmConfig& config) {
  TimeSamples out;
  out.start_index = samples.start_index;
  out.values.resize(samples.values.size());
  const double step = 2.0 * std::numbers::pi * cfo.epsilon / config.fft_size;
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    double phase = step * static_cast<double>(samples.start_index + static_cast<std::int64_t>(i));
    out.values[i] = samples.values[i] * ComplexSample{std::cos(phase), std::sin(phase)};
  }
  return out;
}

TimeSamples add_awgn(const TimeSamples& samples, const NoiseSpec& noise, const OfdmConfig& config,
                     SeededRng& rng) {
  TimeSamples out = samples;
  const double amp = std::sqrt(noise.sigma2_time(config.fft_size) / 2.0);
  if (amp == 0.0) return out;
  for (auto& v : out.values) v += amp * rng.complex_gaussian();
  return out;
}

}  // namespace ofdmici

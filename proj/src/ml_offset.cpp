#include "ofdmici/ml_offset.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ofdmici {

TimeSamples ml_frame_build(const FrequencySymbols& symbols, const OfdmConfig& config) {
  TimeSamples one = ofdm_modulate(symbols, config);
  TimeSamples out;
  out.start_index = 0;
  out.values.reserve(2 * one.values.size());
  out.values.insert(out.values.end(), one.values.begin(), one.values.end());
  out.values.insert(out.values.end(), one.values.begin(), one.values.end());
  return out;
}

OffsetEstimate ml_estimate(const RepeatedObservation& obs, const OfdmConfig& config) {
  const int n = config.fft_size;
  if (static_cast<int>(obs.first_half.values.size()) != n ||
      static_cast<int>(obs.second_half.values.size()) != n)
    throw std::invalid_argument("ml_estimate: both halves must hold fft_size bins");

  std::vector<int> bins;
  if (obs.k_range == kAllActiveCarriers) {
    bins.resize(config.active_carriers);
    for (int k = 0; k < config.active_carriers; ++k) bins[k] = k;
  } else {
    if (obs.k_range < 0 || 2 * obs.k_range + 1 > config.active_carriers)
      throw std::invalid_argument("ml_estimate: k_range must satisfy 1 <= 2K+1 <= active_carriers");
    for (int k = -obs.k_range; k <= obs.k_range; ++k) bins.push_back(((k % n) + n) % n);
  }

  ComplexSample corr{0.0, 0.0};
  bool any_signal = false;
  for (int k : bins) {
    const ComplexSample& y1 = obs.first_half.values[k];
    if (y1 != ComplexSample{0.0, 0.0}) any_signal = true;
    corr += obs.second_half.values[k] * std::conj(y1);
  }
  if (!any_signal)
    throw std::invalid_argument("ml_estimate: degenerate observation, every selected bin is zero");

  double eps = std::atan2(corr.imag(), corr.real()) / (2.0 * std::numbers::pi);
  return {eps, EstimatorMethod::Ml};
}

FrequencySymbols ml_correct(const TimeSamples& samples, const OffsetEstimate& est,
                            const OfdmConfig& config) {
  TimeSamples derotated;
  derotated.start_index = samples.start_index;
  derotated.values.resize(samples.values.size());
  const double step = -2.0 * std::numbers::pi * est.epsilon_hat / config.fft_size;
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    double phase = step * static_cast<double>(samples.start_index + static_cast<std::int64_t>(i));
    derotated.values[i] = samples.values[i] * ComplexSample{std::cos(phase), std::sin(phase)};
  }
  return ofdm_demodulate(derotated, config);
}

}  // namespace ofdmici

#include "ofdmici/ekf_offset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ofdmici/rng.hpp"

namespace ofdmici {

namespace {

// Keeps the gain alive on noiseless preambles; see ekf_estimate() docs. The
// trajectory after the first informative sample is insensitive to the exact
// value because P collapses proportionally to it.
constexpr double kSigma2Floor = 1e-15;

}  // namespace

EkfResult ekf_estimate(const Preamble& preamble, double init_epsilon, double init_error_variance,
                       EkfGainForm form) {
  const auto& x = preamble.transmitted.values;
  const auto& y = preamble.received.values;
  if (x.empty()) throw std::invalid_argument("ekf_estimate: empty preamble");
  if (x.size() != y.size())
    throw std::invalid_argument("ekf_estimate: transmitted/received length mismatch");
  if (preamble.fft_size < 2) throw std::invalid_argument("ekf_estimate: fft_size must be >= 2");
  if (init_error_variance <= 0.0)
    throw std::invalid_argument("ekf_estimate: initial error variance must be > 0");
  if (preamble.sigma2 < 0.0) throw std::invalid_argument("ekf_estimate: sigma2 must be >= 0");
  if (std::all_of(x.begin(), x.end(), [](const ComplexSample& v) { return v == ComplexSample{}; }))
    throw std::invalid_argument("ekf_estimate: all-zero preamble is unobservable");

  const double sigma2 = std::max(preamble.sigma2, kSigma2Floor);
  const double two_pi_over_n = 2.0 * std::numbers::pi / preamble.fft_size;

  double eps = init_epsilon;
  double p = init_error_variance;
  EkfResult result;
  result.trace.reserve(x.size() + 1);
  result.trace.push_back({eps, p, 0});

  for (std::size_t i = 0; i < x.size(); ++i) {
    const double n_abs =
        static_cast<double>(preamble.transmitted.start_index + static_cast<std::int64_t>(i));
    const double theta = two_pi_over_n * n_abs;
    const ComplexSample rot{std::cos(theta * eps), std::sin(theta * eps)};
    const ComplexSample predicted = x[i] * rot;
    const ComplexSample slope = ComplexSample{0.0, theta} * predicted;  // d(predicted)/d(eps)

    const double innovation_var =
        (form == EkfGainForm::Standard ? std::norm(slope) * p : p) + sigma2;
    const ComplexSample gain = p * std::conj(slope) / innovation_var;

    eps += (gain * (y[i] - predicted)).real();
    p *= 1.0 - (gain * slope).real();
    result.trace.push_back({eps, p, static_cast<int>(i) + 1});
  }

  result.estimate = {eps, EstimatorMethod::Ekf};
  return result;
}

FrequencySymbols ekf_correct(const TimeSamples& samples, const OffsetEstimate& est,
                             const OfdmConfig& config) {
  return ml_correct(samples, est, config);
}

FrequencySymbols preamble_pilot_bins(const OfdmConfig& config) {
  FrequencySymbols out;
  out.values.assign(config.fft_size, ComplexSample{0.0, 0.0});
  SeededRng rng(kPreambleSeed);
  for (int k = 0; k < config.active_carriers; ++k) {
    double phase = 2.0 * std::numbers::pi * rng.uniform01();
    out.values[k] = {std::cos(phase), std::sin(phase)};
  }
  return out;
}

TimeSamples preamble_time_samples(const OfdmConfig& config) {
  return ofdm_modulate(preamble_pilot_bins(config), config);
}

}  // namespace ofdmici

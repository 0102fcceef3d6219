#pragma once

#include <vector>

#include "ofdmici/ml_offset.hpp"
#include "ofdmici/modem.hpp"

namespace ofdmici {

/// Scalar filter state after iteration n.
struct EkfState {
  double epsilon_hat;
  double error_variance;  // P(n), >= 0
  int iteration;          // 0 = initial state
};

/**
 * Known training block and its received counterpart. transmitted is known
 * bit-exactly at the receiver; start_index is absolute within the frame so
 * the offset correction applied to the data symbols that follow stays phase
 * consistent. sigma2 is the AWGN variance per complex time sample (known at
 * the receiver). fft_size fixes the 2 pi n'/N phase scale.
 */
struct Preamble {
  TimeSamples transmitted;
  TimeSamples received;
  double sigma2 = 0.0;
  int fft_size = 0;
};

enum class EkfGainForm {
  // K(n) = P(n-1) H*(n) / (|H(n)|^2 P(n-1) + sigma^2): the innovation
  // variance includes the observation scaling. Default.
  Standard,
  // K(n) = P(n-1) H*(n) / (P(n-1) + sigma^2): drops |H|^2 from the
  // denominator. Kept selectable for comparison; it is not dimensionally
  // consistent and can diverge when |H| is large.
  UnscaledInnovation,
};

#ifdef OFDMICI_EKF_UNSCALED_GAIN
inline constexpr EkfGainForm kDefaultEkfGainForm = EkfGainForm::UnscaledInnovation;
#else
inline constexpr EkfGainForm kDefaultEkfGainForm = EkfGainForm::Standard;
#endif

struct EkfResult {
  OffsetEstimate estimate;
  std::vector<EkfState> trace;  // states 0..Np
};

/**
 * Scalar extended Kalman recursion for the constant offset eps observed
 * through y(n) = x(n) e^{j 2 pi n' eps / N} + w(n). Per preamble sample:
 *
 *   H(n)   = (j 2 pi n'/N) e^{j 2 pi n' eps_hat/N} x(n)   (observation slope)
 *   K(n)   = P H*(n) / (|H(n)|^2 P + sigma^2)
 *   eps_hat += Re{ K(n) (y(n) - x(n) e^{j 2 pi n' eps_hat/N}) }
 *   P      *= 1 - Re{ K(n) H(n) }
 *
 * The state is real, so only the real parts of the gain products enter the
 * update and P stays real and non-negative. sigma2 is floored at a tiny
 * positive value so a noiseless preamble keeps a nonzero gain instead of
 * freezing after the first sample.
 */
EkfResult ekf_estimate(const Preamble& preamble, double init_epsilon, double init_error_variance,
                       EkfGainForm form = kDefaultEkfGainForm);

// Same contract as ml_correct, with the EKF's estimate.
FrequencySymbols ekf_correct(const TimeSamples& samples, const OffsetEstimate& est,
                             const OfdmConfig& config);

// Fixed pseudo-random unit-magnitude pilot pattern on the active bins
// (deterministic: seeded with kPreambleSeed, independent of everything
// else). tests/fixtures pins a sample of the values.
inline constexpr std::uint64_t kPreambleSeed = 0x243f6a8885a308d3ULL;
FrequencySymbols preamble_pilot_bins(const OfdmConfig& config);

// IFFT of the pilot pattern: Np = N known time samples, start_index 0.
TimeSamples preamble_time_samples(const OfdmConfig& config);

}  // namespace ofdmici

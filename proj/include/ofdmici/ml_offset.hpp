#pragma once

#include "ofdmici/modem.hpp"

namespace ofdmici {

/// Sum over all active carriers in the estimator (the default).
inline constexpr int kAllActiveCarriers = -1;

/**
 * The two demodulated halves of a repeated OFDM symbol. first_half and
 * second_half are the FFTs of consecutive N-sample blocks of one
 * transmission (start indices 0 and N), so a constant offset shows up as a
 * fixed phase rotation e^{j 2 pi eps} between them.
 *
 * k_range selects the estimator bins: kAllActiveCarriers uses bins
 * 0..active_carriers-1; a value K >= 0 uses the 2K+1 bins k = -K..K
 * interpreted modulo N.
 */
struct RepeatedObservation {
  FrequencySymbols first_half;
  FrequencySymbols second_half;
  int k_range = kAllActiveCarriers;
};

enum class EstimatorMethod { Ml, Ekf };

struct OffsetEstimate {
  double epsilon_hat = 0.0;
  EstimatorMethod method = EstimatorMethod::Ml;
};

// One OFDM symbol transmitted twice back to back: 2N samples, start_index 0.
TimeSamples ml_frame_build(const FrequencySymbols& symbols, const OfdmConfig& config);

// eps_hat = (1/2pi) atan2( Im sum_k Y2(k) Y1*(k), Re sum_k Y2(k) Y1*(k) ).
// Acquisition range is |eps| < 0.5; offsets outside alias into [-0.5, 0.5].
// Throws if every selected first-half bin is zero (nothing to correlate).
OffsetEstimate ml_estimate(const RepeatedObservation& obs, const OfdmConfig& config);

// Derotates by the estimate (using start_index for the absolute phase) and
// demodulates: FFT{ y(n) e^{-j 2 pi (start_index + n) eps_hat / N} }.
FrequencySymbols ml_correct(const TimeSamples& samples, const OffsetEstimate& est,
                            const OfdmConfig& config);

}  // namespace ofdmici

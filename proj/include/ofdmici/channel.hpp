#pragma once

#include "ofdmici/modem.hpp"
#include "ofdmici/rng.hpp"

namespace ofdmici {

/// Carrier frequency offset as a fraction of the subcarrier spacing.
/// |epsilon| < 0.5 is required only for ML acquisition; the channel and the
/// CIR analysis accept any value.
struct NormalizedCfo {
  double epsilon = 0.0;
};

/**
 * Noise calibration for a unit-energy constellation (Es = 1):
 *
 *   sigma2_freq = 1 / (log2(M) * 10^(ebn0_db/10))
 *
 * is the complex noise variance seen per frequency-domain bin after the
 * unscaled forward transform; the per-time-sample variance is
 * sigma2_freq / N. Eb counts information bits only — scheme redundancy
 * (repeats, carrier pairing) is reported as throughput, not folded in here.
 */
struct NoiseSpec {
  double ebn0_db = 0.0;
  double sigma2_freq = 0.0;

  double sigma2_time(int fft_size) const { return sigma2_freq / fft_size; }
};

NoiseSpec ebn0_to_sigma(double ebn0_db, const ModulationScheme& scheme);

// y(n) = x(n) e^{j 2 pi (start_index + n) eps / N}. Pure phase ramp;
// preserves energy and start_index.
TimeSamples apply_cfo(const TimeSamples& samples, NormalizedCfo cfo, const OfdmConfig& config);

// Adds circularly-symmetric complex Gaussian noise, sigma2_time per complex
// sample (half per real component). One complex_gaussian() draw per sample.
TimeSamples add_awgn(const TimeSamples& samples, const NoiseSpec& noise, const OfdmConfig& config,
                     SeededRng& rng);

}  // namespace ofdmici

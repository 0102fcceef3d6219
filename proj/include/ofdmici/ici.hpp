#pragma once

#include "ofdmici/modem.hpp"

namespace ofdmici {

/**
 * Leakage coefficient of a subcarrier transmitted d bins away from the
 * observed bin under normalized offset epsilon:
 *
 *   S(d) = (1/N) sum_{n=0}^{N-1} e^{j 2 pi n (d + eps) / N}
 *        = sin(pi(d+eps)) / (N sin(pi(d+eps)/N)) * e^{j pi (1 - 1/N)(d+eps)}
 *
 * S is N-periodic in d. Integer d+eps hits the 0/0 limit and is resolved
 * exactly: 1 when (d+eps) mod N == 0, else 0.
 */
ComplexSample ici_coefficient(int d, double epsilon, int fft_size);

/// Coefficient seen on a received bin when (X, -X) pairs are transmitted on
/// adjacent carriers: S'(d) = S(d) - S(d+1).
ComplexSample sc_mod_coefficient(int d, double epsilon, int fft_size);

/// Coefficient after additionally differencing adjacent received bins:
/// S''(d) = -S(d-1) + 2 S(d) - S(d+1).
ComplexSample sc_demod_coefficient(int d, double epsilon, int fft_size);

enum class CirVariant { Standard, SelfCancel };

struct CirPoint {
  double epsilon;
  double cir_db;  // +infinity at epsilon == 0 (perfect orthogonality)
  CirVariant variant;
};

// |S(0)|^2 / sum_{d=1}^{N-1} |S(d)|^2, in dB.
CirPoint cir_standard(double epsilon, int fft_size);

// |S''(0)|^2 / sum_{d even, 2..N-2} |S''(d)|^2, in dB. Requires even N >= 4.
CirPoint cir_self_cancel(double epsilon, int fft_size);

}  // namespace ofdmici

#include "ofdmici/ici.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ofdmici {

namespace {

void check_size(int fft_size, int minimum) {
  if (fft_size < minimum)
    throw std::invalid_argument("fft_size must be >= " + std::to_string(minimum));
}

}  // namespace

ComplexSample ici_coefficient(int d, double epsilon, int fft_size) {
  check_size(fft_size, 2);
  const double u = d + epsilon;
  if (u == std::round(u)) {
    // Exact 0/0 limit of the ratio form: the geometric sum is N when u is a
    // multiple of N and 0 at every other integer.
    long long r = std::llround(u) % fft_size;
    return (r == 0) ? ComplexSample{1.0, 0.0} : ComplexSample{0.0, 0.0};
  }
  const double pi = std::numbers::pi;
  double magnitude = std::sin(pi * u) / (fft_size * std::sin(pi * u / fft_size));
  double phase = pi * (1.0 - 1.0 / fft_size) * u;
  return magnitude * ComplexSample{std::cos(phase), std::sin(phase)};
}

ComplexSample sc_mod_coefficient(int d, double epsilon, int fft_size) {
  return ici_coefficient(d, epsilon, fft_size) - ici_coefficient(d + 1, epsilon, fft_size);
}

ComplexSample sc_demod_coefficient(int d, double epsilon, int fft_size) {
  return -ici_coefficient(d - 1, epsilon, fft_size) + 2.0 * ici_coefficient(d, epsilon, fft_size) -
         ici_coefficient(d + 1, epsilon, fft_size);
}

CirPoint cir_standard(double epsilon, int fft_size) {
  check_size(fft_size, 2);
  if (epsilon == 0.0)
    return {epsilon, std::numeric_limits<double>::infinity(), CirVariant::Standard};
  double num = std::norm(ici_coefficient(0, epsilon, fft_size));
  double den = 0.0;
  for (int d = 1; d < fft_size; ++d) den += std::norm(ici_coefficient(d, epsilon, fft_size));
  return {epsilon, 10.0 * std::log10(num / den), CirVariant::Standard};
}

CirPoint cir_self_cancel(double epsilon, int fft_size) {
  check_size(fft_size, 4);
  if (fft_size % 2 != 0) throw std::invalid_argument("cir_self_cancel: fft_size must be even");
  if (epsilon == 0.0)
    return {epsilon, std::numeric_limits<double>::infinity(), CirVariant::SelfCancel};
  double num = std::norm(sc_demod_coefficient(0, epsilon, fft_size));
  double den = 0.0;
  // Only even spacings interfere: transmit pairs sit on even bins and the
  // receiver observes even bins, so d runs over 2, 4, ..., N-2.
  for (int d = 2; d <= fft_size - 2; d += 2)
    den += std::norm(sc_demod_coefficient(d, epsilon, fft_size));
  return {epsilon, 10.0 * std::log10(num / den), CirVariant::SelfCancel};
}

}  // namespace ofdmici

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ofdmici {

using ComplexSample = std::complex<double>;
using ComplexVec = std::vector<ComplexSample>;
using BitVec = std::vector<std::uint8_t>;

enum class ModulationKind { Psk, Qam };

/**
 * Gray-labeled constellation of order M with unit average symbol energy.
 *
 * PSK supports M in {2, 4, 16, 64}; QAM supports the square orders
 * {4, 16, 64}. The point table is built once at construction and the
 * normalization keeps sum(|p|^2)/M == 1.
 */
class ModulationScheme {
 public:
  ModulationScheme(ModulationKind kind, int order);

  ModulationKind kind() const { return kind_; }
  int order() const { return order_; }
  int bits_per_symbol() const { return bits_per_symbol_; }
  const ComplexVec& points() const { return points_; }

  // Canonical name: "bpsk", "psk4", "psk16", "psk64", "qam4", "qam16", "qam64".
  std::string name() const;
  static ModulationScheme parse(std::string_view name);

 private:
  ModulationKind kind_;
  int order_;
  int bits_per_symbol_;
  ComplexVec points_;  // indexed by bit label value
};

struct OfdmConfig {
  int fft_size;         // N, power of two
  int active_carriers;  // data occupies bins 0..active_carriers-1
  ModulationScheme modulation;

  OfdmConfig(int fft_size, int active_carriers, ModulationScheme modulation);
};

/// One OFDM symbol in the frequency domain; length equals fft_size.
struct FrequencySymbols {
  ComplexVec values;
};

/// Baseband time-domain samples. start_index is the absolute position of
/// values[0] within the transmission, which keeps the CFO phase ramp
/// continuous across consecutive blocks.
struct TimeSamples {
  ComplexVec values;
  std::int64_t start_index = 0;
};

// Bits -> Gray-labeled constellation points, one per bits_per_symbol() bits.
ComplexVec map_bits(const BitVec& bits, const ModulationScheme& scheme);

// Hard decision: nearest constellation point in Euclidean distance, ties
// broken toward the lowest bit-label value.
BitVec demap_symbols(const ComplexVec& points, const ModulationScheme& scheme);

// x(n) = (1/N) sum_m X(m) e^{+j 2 pi n m / N}; the 1/N factor sits on the
// inverse transform. Output start_index is 0.
TimeSamples ofdm_modulate(const FrequencySymbols& symbols, const OfdmConfig& config);

// Y(m) = sum_n y(n) e^{-j 2 pi n m / N} (no scaling on the forward transform).
FrequencySymbols ofdm_demodulate(const TimeSamples& samples, const OfdmConfig& config);

// Payload onto bins 0..payload.size()-1, zeros elsewhere. payload must fit
// in the active band.
FrequencySymbols place_payload(const ComplexVec& payload, const OfdmConfig& config);

}  // namespace ofdmici

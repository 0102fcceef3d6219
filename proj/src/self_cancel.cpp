#include "ofdmici/self_cancel.hpp"

#include <stdexcept>

namespace ofdmici {

FrequencySymbols sc_encode(const ComplexVec& payload, const OfdmConfig& config) {
  if (config.active_carriers % 2 != 0)
    throw std::invalid_argument("sc_encode: active_carriers must be even for pair coding");
  const std::size_t pairs = static_cast<std::size_t>(config.active_carriers) / 2;
  if (payload.size() != pairs)
    throw std::invalid_argument("sc_encode: payload length " + std::to_string(payload.size()) +
                                " != active_carriers/2 = " + std::to_string(pairs));
  FrequencySymbols out;
  out.values.assign(config.fft_size, ComplexSample{0.0, 0.0});
  for (std::size_t i = 0; i < pairs; ++i) {
    out.values[2 * i] = payload[i];
    out.values[2 * i + 1] = -payload[i];
  }
  return out;
}

ComplexVec sc_decode(const FrequencySymbols& received, const OfdmConfig& config) {
  if (config.active_carriers % 2 != 0)
    throw std::invalid_argument("sc_decode: active_carriers must be even for pair coding");
  if (static_cast<int>(received.values.size()) != config.fft_size)
    throw std::invalid_argument("sc_decode: got " + std::to_string(received.values.size()) +
                                " bins, config expects " + std::to_string(config.fft_size));
  const std::size_t pairs = static_cast<std::size_t>(config.active_carriers) / 2;
  ComplexVec out(pairs);
  for (std::size_t i = 0; i < pairs; ++i)
    out[i] = (received.values[2 * i] - received.values[2 * i + 1]) * 0.5;
  return out;
}

}  // namespace ofdmici

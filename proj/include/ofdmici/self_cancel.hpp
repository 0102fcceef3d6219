#pragma once

#include "ofdmici/modem.hpp"

namespace ofdmici {

// Pair coding across adjacent carriers: bins (2i, 2i+1) carry
// (payload[i], -payload[i]) inside the active band, zeros elsewhere.
// payload.size() must equal active_carriers/2 and active_carriers must be
// even. Throughput factor is exactly 1/2.
FrequencySymbols sc_encode(const ComplexVec& payload, const OfdmConfig& config);

// Differencing receiver: output[k/2] = (Y(k) - Y(k+1)) / 2 for even k. The
// 1/2 keeps the zero-offset noiseless decision variable equal to the payload
// (the paired signal coefficient is 2 there), so constellation minimum
// distances are unchanged. Decision noise is (n_k - n_{k+1})/2, variance
// sigma2_freq/2.
ComplexVec sc_decode(const FrequencySymbols& received, const OfdmConfig& config);

}  // namespace ofdmici

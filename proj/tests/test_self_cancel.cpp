#include <doctest.h>

#include <cmath>

#include "ofdmici/channel.hpp"
#include "ofdmici/ici.hpp"
#include "ofdmici/rng.hpp"
#include "ofdmici/self_cancel.hpp"
#include "oracles.hpp"

using namespace ofdmici;

namespace {

ComplexVec random_payload(int count, SeededRng& rng) {
  ComplexVec v(count);
  for (auto& s : v) s = rng.complex_gaussian();
  return v;
}

}  // namespace

TEST_CASE("pair layout: (a, -a) on adjacent bins, zeros outside") {
  OfdmConfig cfg(8, 2, {ModulationKind::Psk, 2});
  ComplexSample a{0.3, -1.1};
  FrequencySymbols f = sc_encode({a}, cfg);
  CHECK(f.values[0] == a);
  CHECK(f.values[1] == -a);
  for (int k = 2; k < 8; ++k) CHECK(f.values[k] == ComplexSample{0.0, 0.0});

  FrequencySymbols z = sc_encode({ComplexSample{}, ComplexSample{}}, OfdmConfig(8, 4, cfg.modulation));
  for (const auto& v : z.values) CHECK(v == ComplexSample{0.0, 0.0});
}

TEST_CASE("encode validation: odd band and wrong payload size") {
  ModulationScheme bpsk(ModulationKind::Psk, 2);
  CHECK_THROWS_AS(sc_encode({ComplexSample{1, 0}}, OfdmConfig(8, 3, bpsk)), std::invalid_argument);
  CHECK_THROWS_AS(sc_encode({ComplexSample{1, 0}}, OfdmConfig(8, 4, bpsk)), std::invalid_argument);
  CHECK_THROWS_AS(sc_decode(FrequencySymbols{ComplexVec(8)}, OfdmConfig(8, 3, bpsk)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sc_decode(FrequencySymbols{ComplexVec(4)}, OfdmConfig(8, 4, bpsk)),
                  std::invalid_argument);
}

TEST_CASE("decode is the half-difference of adjacent bins") {
  OfdmConfig cfg(8, 4, {ModulationKind::Psk, 2});
  FrequencySymbols f{ComplexVec(8, {0.0, 0.0})};
  f.values[0] = {2.0, 0.0};
  f.values[1] = {0.0, 2.0};
  f.values[2] = {-1.0, 1.0};
  f.values[3] = {1.0, -1.0};
  ComplexVec out = sc_decode(f, cfg);
  CHECK(out[0] == ComplexSample{1.0, -1.0});
  CHECK(out[1] == ComplexSample{-1.0, 1.0});
}

TEST_CASE("noiseless zero-offset round trip through the full modem") {
  SeededRng rng(21);
  for (int active : {2, 8, 48}) {
    for (ModulationKind kind : {ModulationKind::Psk, ModulationKind::Qam}) {
      OfdmConfig cfg(64, active, {kind, 4});
      ComplexVec payload = random_payload(active / 2, rng);
      FrequencySymbols rx = ofdm_demodulate(ofdm_modulate(sc_encode(payload, cfg), cfg), cfg);
      ComplexVec decoded = sc_decode(rx, cfg);
      for (int i = 0; i < active / 2; ++i) CHECK(std::abs(decoded[i] - payload[i]) < 1e-9);
    }
  }
}

TEST_CASE("offset chain matches the pair-coded coefficient model") {
  // Even received bin k: sum over even l of X(l) [S(l-k) - S(l+1-k)]; after
  // differencing, the payload sees the second-difference coefficients / 2.
  OfdmConfig cfg(16, 16, {ModulationKind::Psk, 2});
  SeededRng rng(22);
  const double eps = 0.3;
  ComplexVec payload = random_payload(8, rng);
  FrequencySymbols tx = sc_encode(payload, cfg);
  FrequencySymbols rx = ofdm_demodulate(apply_cfo(ofdm_modulate(tx, cfg), {eps}, cfg), cfg);

  for (int k = 0; k < 16; k += 2) {
    oracles::Cplx expect{0.0, 0.0};
    for (int l = 0; l < 16; l += 2)
      expect += oracles::Cplx(payload[l / 2]) *
                (oracles::ici_sum(l - k, eps, 16) - oracles::ici_sum(l + 1 - k, eps, 16));
    CHECK(std::abs(rx.values[k] - ComplexSample(expect)) < 1e-9);
  }

  ComplexVec decoded = sc_decode(rx, cfg);
  for (int k = 0; k < 16; k += 2) {
    oracles::Cplx expect{0.0, 0.0};
    for (int l = 0; l < 16; l += 2) {
      oracles::Cplx spp = -oracles::ici_sum(l - k - 1, eps, 16) +
                          2.0 * oracles::ici_sum(l - k, eps, 16) -
                          oracles::ici_sum(l - k + 1, eps, 16);
      expect += oracles::Cplx(payload[l / 2]) * spp;
    }
    CHECK(std::abs(decoded[k / 2] - ComplexSample(expect) * 0.5) < 1e-9);
  }
}

TEST_CASE("measured decision-variable cir matches the closed form") {
  // Full active band so every pair sees the same cyclic interferer set as
  // the closed-form denominator. 10^4 frames keeps the Monte-Carlo error
  // well inside the 0.5 dB budget.
  OfdmConfig cfg(64, 64, {ModulationKind::Psk, 2});
  SeededRng rng(23);
  const double eps = 0.3;
  const ComplexSample signal_coeff = sc_demod_coefficient(0, eps, 64) * 0.5;

  double signal_power = 0.0, ici_power = 0.0;
  for (int frame = 0; frame < 10000; ++frame) {
    ComplexVec payload(32);
    for (auto& p : payload) p = (rng.next_u64() & 1u) ? ComplexSample{-1, 0} : ComplexSample{1, 0};
    FrequencySymbols rx =
        ofdm_demodulate(apply_cfo(ofdm_modulate(sc_encode(payload, cfg), cfg), {eps}, cfg), cfg);
    ComplexVec decoded = sc_decode(rx, cfg);
    for (int i = 0; i < 32; ++i) {
      ComplexSample wanted = payload[i] * signal_coeff;
      signal_power += std::norm(wanted);
      ici_power += std::norm(decoded[i] - wanted);
    }
  }
  double measured_db = 10.0 * std::log10(signal_power / ici_power);
  CHECK(std::abs(measured_db - cir_self_cancel(eps, 64).cir_db) < 0.5);
}

#include "ofdmici/modem.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace ofdmici {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int int_log2(int m) {
  int b = 0;
  while ((1 << b) < m) ++b;
  return b;
}

// Binary-reflected Gray decode: index k such that k ^ (k >> 1) == g.
unsigned gray_decode(unsigned g) {
  unsigned k = g;
  for (g >>= 1; g != 0; g >>= 1) k ^= g;
  return k;
}

ComplexVec build_points(ModulationKind kind, int order) {
  ComplexVec pts(static_cast<std::size_t>(order));
  if (kind == ModulationKind::Psk) {
    // Label u sits at phase index gray_decode(u), so adjacent phases differ
    // in one bit. u = 0 lands on +1, matching the BPSK sign convention.
    for (int u = 0; u < order; ++u) {
      double angle = kTwoPi * static_cast<double>(gray_decode(u)) / order;
      pts[u] = {std::cos(angle), std::sin(angle)};
    }
  } else {
    // Square QAM: independent Gray-coded PAM per axis, first half of the
    // label on I, second half on Q. Label 0 per axis is the most positive
    // level, so "00" maps to the top-right corner.
    int side = static_cast<int>(std::lround(std::sqrt(order)));
    int axis_bits = int_log2(side);
    double scale = std::sqrt(3.0 / (2.0 * (side * side - 1)));
    for (int u = 0; u < order; ++u) {
      unsigned ui = static_cast<unsigned>(u) >> axis_bits;
      unsigned uq = static_cast<unsigned>(u) & ((1u << axis_bits) - 1u);
      double li = side - 1 - 2.0 * gray_decode(ui);
      double lq = side - 1 - 2.0 * gray_decode(uq);
      pts[u] = {li * scale, lq * scale};
    }
  }
  return pts;
}

// Per-size transform tables, cached per thread so parallel sweeps never
// contend on them.
struct FftTables {
  std::vector<int> bit_reverse;
  ComplexVec twiddles;  // e^{-j 2 pi k / N}, k = 0..N/2-1
};

const FftTables& tables_for(int n) {
  thread_local std::unordered_map<int, FftTables> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  FftTables t;
  t.bit_reverse.resize(n);
  int bits = int_log2(n);
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
    t.bit_reverse[i] = r;
  }
  t.twiddles.resize(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    double angle = -kTwoPi * k / n;
    t.twiddles[k] = {std::cos(angle), std::sin(angle)};
  }
  return cache.emplace(n, std::move(t)).first->second;
}

// In-place iterative radix-2 transform; forward uses e^{-j...}, inverse
// e^{+j...}. No scaling either way.
void fft_radix2(ComplexVec& a, bool inverse) {
  const int n = static_cast<int>(a.size());
  const FftTables& t = tables_for(n);
  for (int i = 0; i < n; ++i) {
    int r = t.bit_reverse[i];
    if (i < r) std::swap(a[i], a[r]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    int stride = n / len;
    for (int start = 0; start < n; start += len) {
      for (int k = 0; k < len / 2; ++k) {
        ComplexSample w = t.twiddles[k * stride];
        if (inverse) w = std::conj(w);
        ComplexSample u = a[start + k];
        ComplexSample v = a[start + k + len / 2] * w;
        a[start + k] = u + v;
        a[start + k + len / 2] = u - v;
      }
    }
  }
}

void check_finite(const ComplexVec& values, const char* where) {
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument(std::string(where) + ": non-finite sample");
  }
}

}  // namespace

ModulationScheme::ModulationScheme(ModulationKind kind, int order) : kind_(kind), order_(order) {
  if (kind == ModulationKind::Psk) {
    if (order != 2 && order != 4 && order != 16 && order != 64)
      throw std::invalid_argument("PSK order must be one of {2, 4, 16, 64}");
  } else {
    if (order != 4 && order != 16 && order != 64)
      throw std::invalid_argument("QAM order must be a square, one of {4, 16, 64}");
  }
  bits_per_symbol_ = int_log2(order);
  points_ = build_points(kind, order);
}

std::string ModulationScheme::name() const {
  if (kind_ == ModulationKind::Psk && order_ == 2) return "bpsk";
  return (kind_ == ModulationKind::Psk ? "psk" : "qam") + std::to_string(order_);
}

ModulationScheme ModulationScheme::parse(std::string_view name) {
  if (name == "bpsk" || name == "psk2") return {ModulationKind::Psk, 2};
  ModulationKind kind;
  std::string_view rest;
  if (name.starts_with("psk")) {
    kind = ModulationKind::Psk;
    rest = name.substr(3);
  } else if (name.starts_with("qam")) {
    kind = ModulationKind::Qam;
    rest = name.substr(3);
  } else {
    throw std::invalid_argument("unknown modulation '" + std::string(name) + "'");
  }
  int order = 0;
  for (char c : rest) {
    if (c < '0' || c > '9')
      throw std::invalid_argument("unknown modulation '" + std::string(name) + "'");
    order = order * 10 + (c - '0');
  }
  return {kind, order};
}

OfdmConfig::OfdmConfig(int fft_size_in, int active_carriers_in, ModulationScheme modulation_in)
    : fft_size(fft_size_in), active_carriers(active_carriers_in), modulation(std::move(modulation_in)) {
  if (fft_size < 2 || !std::has_single_bit(static_cast<unsigned>(fft_size)))
    throw std::invalid_argument("fft_size must be a power of two >= 2");
  if (active_carriers < 1 || active_carriers > fft_size)
    throw std::invalid_argument("active_carriers must be in [1, fft_size]");
}

ComplexVec map_bits(const BitVec& bits, const ModulationScheme& scheme) {
  const int bps = scheme.bits_per_symbol();
  if (bits.size() % bps != 0)
    throw std::invalid_argument("map_bits: " + std::to_string(bits.size()) +
                                " bits is not a multiple of " + std::to_string(bps) + " (" +
                                scheme.name() + ")");
  ComplexVec out(bits.size() / bps);
  for (std::size_t s = 0; s < out.size(); ++s) {
    unsigned label = 0;
    for (int b = 0; b < bps; ++b) label = (label << 1) | (bits[s * bps + b] & 1u);
    out[s] = scheme.points()[label];
  }
  return out;
}

BitVec demap_symbols(const ComplexVec& points, const ModulationScheme& scheme) {
  const int bps = scheme.bits_per_symbol();
  const ComplexVec& table = scheme.points();
  BitVec out(points.size() * bps);
  for (std::size_t s = 0; s < points.size(); ++s) {
    // Ascending label scan with strict less-than: ties go to the lowest
    // bit-label value.
    unsigned best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (unsigned u = 0; u < table.size(); ++u) {
      double d2 = std::norm(points[s] - table[u]);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = u;
      }
    }
    for (int b = 0; b < bps; ++b) out[s * bps + b] = (best >> (bps - 1 - b)) & 1u;
  }
  return out;
}

TimeSamples ofdm_modulate(const FrequencySymbols& symbols, const OfdmConfig& config) {
  const int n = config.fft_size;
  if (static_cast<int>(symbols.values.size()) != n)
    throw std::invalid_argument("ofdm_modulate: got " + std::to_string(symbols.values.size()) +
                                " bins, config expects " + std::to_string(n));
  TimeSamples out;
  out.values = symbols.values;
  out.start_index = 0;
  fft_radix2(out.values, /*inverse=*/true);
  const double scale = 1.0 / n;
  for (auto& v : out.values) v *= scale;
  check_finite(out.values, "ofdm_modulate");
  return out;
}

FrequencySymbols ofdm_demodulate(const TimeSamples& samples, const OfdmConfig& config) {
  const int n = config.fft_size;
  if (static_cast<int>(samples.values.size()) != n)
    throw std::invalid_argument("ofdm_demodulate: got " + std::to_string(samples.values.size()) +
                                " samples, config expects " + std::to_string(n));
  FrequencySymbols out;
  out.values = samples.values;
  fft_radix2(out.values, /*inverse=*/false);
  check_finite(out.values, "ofdm_demodulate");
  return out;
}

FrequencySymbols place_payload(const ComplexVec& payload, const OfdmConfig& config) {
  if (static_cast<int>(payload.size()) > config.active_carriers)
    throw std::invalid_argument("place_payload: payload exceeds the active band");
  FrequencySymbols out;
  out.values.assign(config.fft_size, ComplexSample{0.0, 0.0});
  std::copy(payload.begin(), payload.end(), out.values.begin());
  return out;
}

}  // namespace ofdmici

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "ofdmici/modem.hpp"

namespace ofdmici {

/**
 * Deterministic random stream: std::mt19937_64 (fully specified by the
 * standard, so identical seeds give identical streams on every platform)
 * with an explicit Box-Muller transform for Gaussian variates. The
 * std::*_distribution adapters are avoided on purpose: their output is
 * implementation-defined.
 */
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

  // One circularly-symmetric standard complex Gaussian: independent N(0,1)
  // real and imaginary parts from a single Box-Muller pair (two u64 draws).
  ComplexSample complex_gaussian() {
    // (0,1]: shifting by one ulp keeps log() away from zero.
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  double gaussian() { return complex_gaussian().real(); }

 private:
  std::mt19937_64 gen_;
};

// Name recorded in output file headers next to the results it produced.
inline constexpr std::string_view kRngName = "mt19937_64-boxmuller";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace ofdmici

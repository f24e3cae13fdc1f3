#pragma once

#include <cstdint>
#include <random>

namespace saddlekit::rng {

// All random draws in the library go through these helpers so that a given
// std::mt19937_64 stream produces the same doubles on every platform
// (std::uniform_real_distribution and friends are implementation-defined).

using Engine = std::mt19937_64;

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform on the open interval (0, 1).
inline double uniform_open01(Engine& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(Engine& g);
double exponential(Engine& g);
double gumbel(Engine& g, double location, double scale);
double inverse_gaussian(Engine& g, double mean, double shape);
// Integer uniform on {lo, ..., hi_exclusive - 1}.
long discrete_uniform(Engine& g, long lo, long hi_exclusive);

}  // namespace saddlekit::rng

#pragma once

#include <cstdint>
#include <random>

#include "core/cmatrix.hpp"

namespace alcc {

// Stable seed derivation for independent sub-streams (per trial, per matrix).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// Zero-mean circularly symmetric complex Gaussian with per-entry standard
// deviation sigma, so each component has variance sigma^2/2. Components are
// truncated to [-theta*sigma, theta*sigma] by rejection resampling.
struct ComplexGaussianSpec {
    double sigma = 1.0;
    double theta = 3.0;
};

CMatrix sample_truncated_complex_gaussian(const ComplexGaussianSpec& spec,
                                          std::size_t rows, std::size_t cols,
                                          std::mt19937_64& rng);

RMatrix sample_standard_normal(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

RMatrix sample_uniform(std::size_t rows, std::size_t cols, double lo, double hi,
                       std::mt19937_64& rng);

// Uniform draw from {0, ..., p-1} by rejection on raw 64-bit words, so the
// stream is identical across platforms for a fixed engine state.
std::uint64_t sample_uniform_residue(std::mt19937_64& rng, std::uint64_t p);

} // namespace alcc

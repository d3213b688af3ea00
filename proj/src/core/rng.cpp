#include "core/rng.hpp"

#include <cmath>

namespace alcc {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer over the combined state.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

CMatrix sample_truncated_complex_gaussian(const ComplexGaussianSpec& spec,
                                          std::size_t rows, std::size_t cols,
                                          std::mt19937_64& rng) {
    if (spec.sigma < 0.0) fail(errc::invalid_argument, "gaussian spec: sigma must be nonnegative");
    if (spec.theta <= 0.0) fail(errc::invalid_argument, "gaussian spec: theta must be positive");

    CMatrix out(rows, cols);
    if (spec.sigma == 0.0) return out;

    const double comp_sigma = spec.sigma / std::sqrt(2.0);
    const double bound = spec.theta * spec.sigma;
    std::normal_distribution<double> dist(0.0, comp_sigma);
    auto draw = [&]() {
        double v;
        do {
            v = dist(rng);
        } while (std::abs(v) > bound);
        return v;
    };
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double re = draw();
        const double im = draw();
        out.data()[i] = cplx(re, im);
    }
    return out;
}

RMatrix sample_standard_normal(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    RMatrix out(rows, cols);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = dist(rng);
    return out;
}

RMatrix sample_uniform(std::size_t rows, std::size_t cols, double lo, double hi,
                       std::mt19937_64& rng) {
    if (!(lo < hi)) fail(errc::invalid_argument, "sample_uniform: empty interval");
    RMatrix out(rows, cols);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = dist(rng);
    return out;
}

std::uint64_t sample_uniform_residue(std::mt19937_64& rng, std::uint64_t p) {
    if (p == 0) fail(errc::invalid_argument, "sample_uniform_residue: zero modulus");
    if (p == 1) return 0;
    // Reject draws from the incomplete top block to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % p;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % p;
}

} // namespace alcc

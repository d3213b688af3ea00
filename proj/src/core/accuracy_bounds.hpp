#pragma once

#include <cstdint>
#include <vector>

#include "core/alcc_core.hpp"
#include "core/polyfun.hpp"

namespace alcc {

struct AccuracyReport {
    double alcc_upper_bound = 0.0;       // max(m,n)^D dimension factor
    double alcc_upper_bound_loose = 0.0; // (m n e)^D dimension factor
    double beta_bar = 0.0;
    double kappa_b = 0.0;
    double lambda_min = 0.0;
    std::uint32_t bits = 64;
    std::uint32_t mantissa_bits = 54; // bits - 10 after sign and exponent
};

// (beta^(dtilde+2) - 1) / (beta^2 - 1); at beta = 1 the limit dtilde/2 + 1.
double beta_bar(double beta, std::size_t dtilde);

// Condition-number growth cap for a straggler pattern: Ntilde^(s+6) with
// Ntilde the smallest odd integer above the worker count.
double kappa_straggler_bound(std::size_t n_workers, std::size_t s);

// Floating-point error bound for the decoded evaluations:
// beta_bar * (c * dims^D / lambda_min) * sqrt(dtilde+1) *
// (k r + t theta sigma_n)^D * kappa_B * 2^(-mantissa_bits),
// with dims^D either max(m,n)^D or the looser (m n e)^D. kappa_B and
// lambda_min come from the decoding matrix of the first dtilde+1 listed
// non-straggler workers.
AccuracyReport alcc_error_bound(const AlccParams& p, const PolyFn::Bounds& fb,
                                const std::vector<std::uint32_t>& non_stragglers,
                                std::uint32_t bits);

AccuracyReport alcc_error_bound(const AlccParams& p, const PolyFn& f,
                                const std::vector<std::uint32_t>& non_stragglers,
                                std::uint32_t bits);

// Smallest quantization steps compatible with a b-bit word by the overflow
// analysis; first the modular-intermediate case, then the reduce-once case.
struct LccDeltaBounds {
    double modular = 0.0;
    double integer_once = 0.0;
};

LccDeltaBounds lcc_error_lower_bounds(std::uint32_t degree, double s_a, double r,
                                      std::uint32_t bits);

} // namespace alcc

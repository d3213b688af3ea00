#include "core/accuracy_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "core/linalg.hpp"

namespace alcc {

double beta_bar(double beta, std::size_t dtilde) {
    if (!(beta > 0.0)) fail(errc::invalid_argument, "beta_bar: beta must be positive");
    const double d = static_cast<double>(dtilde);
    if (std::abs(beta - 1.0) < 1e-12) return d / 2.0 + 1.0;
    return (std::pow(beta, d + 2.0) - 1.0) / (beta * beta - 1.0);
}

double kappa_straggler_bound(std::size_t n_workers, std::size_t s) {
    if (n_workers == 0) fail(errc::invalid_argument, "kappa_straggler_bound: empty worker set");
    const std::size_t ntilde = (n_workers % 2 == 0) ? n_workers + 1 : n_workers + 2;
    return std::pow(static_cast<double>(ntilde), static_cast<double>(s) + 6.0);
}

AccuracyReport alcc_error_bound(const AlccParams& p, const PolyFn::Bounds& fb,
                                const std::vector<std::uint32_t>& non_stragglers,
                                std::uint32_t bits) {
    p.validate();
    if (fb.degree != p.degree)
        fail(errc::invalid_argument, "alcc_error_bound: function degree differs from params degree");
    if (bits <= 10) fail(errc::invalid_argument, "alcc_error_bound: bit budget too small");

    const std::size_t need = p.dtilde() + 1;
    std::vector<std::uint32_t> used = non_stragglers;
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    if (used.size() < need) fail(errc::insufficient_workers, "insufficient workers");
    used.resize(need);

    const CMatrix b = decoding_matrix(p, used);
    const auto sv = singular_values(b);

    AccuracyReport rep;
    rep.bits = bits;
    rep.mantissa_bits = bits - 10;
    rep.beta_bar = beta_bar(p.beta, p.dtilde());
    rep.lambda_min = sv.back();
    rep.kappa_b = sv.back() > 0.0 ? sv.front() / sv.back()
                                  : std::numeric_limits<double>::infinity();

    const double d = static_cast<double>(p.degree);
    const double amp = static_cast<double>(p.k) * p.r +
                       static_cast<double>(p.t) * p.theta * p.sigma_n;
    const double common = rep.beta_bar * fb.c / rep.lambda_min *
                          std::sqrt(static_cast<double>(need)) *
                          std::pow(amp, d) * rep.kappa_b *
                          std::exp2(-static_cast<double>(rep.mantissa_bits));
    const double dim_tight = std::pow(static_cast<double>(std::max(p.m, p.n)), d);
    const double dim_loose = std::pow(static_cast<double>(p.m) * static_cast<double>(p.n) *
                                          std::numbers::e,
                                      d);
    rep.alcc_upper_bound = common * dim_tight;
    rep.alcc_upper_bound_loose = common * dim_loose;
    return rep;
}

AccuracyReport alcc_error_bound(const AlccParams& p, const PolyFn& f,
                                const std::vector<std::uint32_t>& non_stragglers,
                                std::uint32_t bits) {
    return alcc_error_bound(p, f.degree_and_bounds(p.m, p.n), non_stragglers, bits);
}

LccDeltaBounds lcc_error_lower_bounds(std::uint32_t degree, double s_a, double r,
                                      std::uint32_t bits) {
    if (degree < 1) fail(errc::invalid_argument, "lcc_error_lower_bounds: degree must be positive");
    if (!(s_a > 0.0) || !(r > 0.0))
        fail(errc::invalid_argument, "lcc_error_lower_bounds: s_a and r must be positive");
    const double d = static_cast<double>(degree);
    const double b = static_cast<double>(bits);
    const double ln2 = std::numbers::ln2;
    // Log-space evaluation keeps large b and r in range.
    const double ln1 = (std::log(s_a) + d * std::log(r) - (b / 2.0 - 1.0) * ln2) / (d + 1.0);
    const double ln2v = ((1.0 + 1.0 / d) * std::log(s_a) + d * std::log(r) -
                         (b / d - 1.0) * ln2) *
                        d / (d * d + d + 1.0);
    return {std::exp(ln1), std::exp(ln2v)};
}

} // namespace alcc

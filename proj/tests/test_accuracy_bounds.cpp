#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "core/accuracy_bounds.hpp"
#include "test_util.hpp"

using namespace alcc;

namespace {

// Even interpolation spans admit a term-by-term power-sum oracle for the
// amplification factor: 1 + beta^2 + ... + beta^(dtilde+... up to exponent
// dtilde), i.e. dtilde/2 + 1 terms.
double beta_bar_sum_oracle(double beta, std::size_t dtilde) {
    REQUIRE(dtilde % 2 == 0);
    long double sum = 0.0L, q = 1.0L;
    for (std::size_t i = 0; i <= dtilde / 2; ++i) {
        sum += q;
        q *= static_cast<long double>(beta) * beta;
    }
    return static_cast<double>(sum);
}

AlccParams make_params(std::size_t k, std::size_t t, std::uint32_t degree, double beta,
                       double sigma_n, double r, std::size_t m, std::size_t n) {
    AlccParams p;
    p.k = k;
    p.t = t;
    p.s = 0;
    p.degree = degree;
    p.beta = beta;
    p.sigma_n = sigma_n;
    p.theta = 3.0;
    p.r = r;
    p.m = m;
    p.n = n;
    return p;
}

std::vector<std::uint32_t> all_workers(const AlccParams& p) {
    std::vector<std::uint32_t> idx(p.workers());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
    return idx;
}

} // namespace

TEST_CASE("interpolation amplification factor matches its power-sum oracle") {
    for (const std::size_t dtilde : {std::size_t{2}, std::size_t{4}, std::size_t{14}}) {
        for (const double beta : {0.5, 1.0, 1.5, 2.0}) {
            const double got = beta_bar(beta, dtilde);
            const double want = beta_bar_sum_oracle(beta, dtilde);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }
    CHECK(beta_bar(1.0, 4) == doctest::Approx(3.0).epsilon(1e-15));
    // Odd spans fall back to the same closed form; sanity only.
    CHECK(beta_bar(2.0, 3) == doctest::Approx((std::pow(2.0, 5.0) - 1.0) / 3.0).epsilon(1e-12));
    CHECK_ERRC(beta_bar(0.0, 4), errc::invalid_argument);
}

TEST_CASE("straggler condition-number envelope") {
    CHECK(kappa_straggler_bound(15, 0) == doctest::Approx(24137569.0).epsilon(1e-15));
    CHECK(kappa_straggler_bound(16, 0) == doctest::Approx(24137569.0).epsilon(1e-15));
    CHECK(kappa_straggler_bound(15, 1) == doctest::Approx(std::pow(17.0, 7.0)).epsilon(1e-15));
    CHECK_ERRC(kappa_straggler_bound(0, 0), errc::invalid_argument);
}

TEST_CASE("error bound against a from-scratch evaluation at the unitary point") {
    // With no stragglers the interpolation matrix is unitary up to sqrt(N), so
    // every quantity in the bound has a closed form computable independently.
    const AlccParams p = make_params(2, 1, 2, 1.5, 10.0, 2.0, 6, 4);
    REQUIRE(p.dtilde() == 4);
    REQUIRE(p.workers() == 5);
    const PolyFn::Bounds fb{2, 1.0, 6.0};
    const std::uint32_t bits = 32;
    const AccuracyReport rep = alcc_error_bound(p, fb, all_workers(p), bits);

    CHECK(rep.bits == 32);
    CHECK(rep.mantissa_bits == 22);
    CHECK(rep.kappa_b == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.lambda_min == doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
    CHECK(rep.beta_bar == doctest::Approx(beta_bar_sum_oracle(1.5, 4)).epsilon(1e-12));

    const long double amp = 2.0L * 2.0L + 1.0L * 3.0L * 10.0L; // k r + t theta sigma
    const long double common = static_cast<long double>(rep.beta_bar) * 1.0L /
                               std::sqrt(5.0L) * std::sqrt(5.0L) * amp * amp *
                               std::exp2(-22.0L);
    CHECK(rep.alcc_upper_bound ==
          doctest::Approx(static_cast<double>(common * 36.0L)).epsilon(1e-9));
    CHECK(rep.alcc_upper_bound_loose ==
          doctest::Approx(static_cast<double>(common * std::pow(24.0L * std::numbers::e_v<long double>, 2.0L)))
              .epsilon(1e-9));
    CHECK(rep.alcc_upper_bound_loose > rep.alcc_upper_bound);
}

TEST_CASE("bound halves exactly per added mantissa bit") {
    const AlccParams p = make_params(4, 4, 2, 1.5, 1e23, 1e10, 1000, 1000);
    const PolyFn::Bounds fb{2, 1.0, 1000.0};
    const auto idx = all_workers(p);
    double prev = alcc_error_bound(p, fb, idx, 32).alcc_upper_bound;
    for (std::uint32_t b = 33; b < 37; ++b) {
        const double cur = alcc_error_bound(p, fb, idx, b).alcc_upper_bound;
        CHECK(cur / prev == doctest::Approx(0.5).epsilon(1e-12));
        prev = cur;
    }
}

TEST_CASE("bound grows with the support radius and with the noise level") {
    const PolyFn::Bounds fb{2, 1.0, 1000.0};
    double prev = 0.0;
    for (const double beta : {1.1, 1.4, 1.7, 2.0}) {
        const AlccParams p = make_params(4, 4, 2, beta, 1e23, 1e10, 1000, 1000);
        const double v = alcc_error_bound(p, fb, all_workers(p), 64).alcc_upper_bound;
        CHECK(v > prev);
        prev = v;
    }
    prev = 0.0;
    for (const double sigma : {1e22, 1e23, 1e24}) {
        const AlccParams p = make_params(4, 4, 2, 1.5, sigma, 1e10, 1000, 1000);
        const double v = alcc_error_bound(p, fb, all_workers(p), 64).alcc_upper_bound;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("polynomial-function overload derives its own coefficient bounds") {
    const AlccParams p = make_params(2, 1, 2, 1.5, 10.0, 2.0, 6, 4);
    const PolyFn gram = PolyFn::preset("gram");
    const AccuracyReport via_poly = alcc_error_bound(p, gram, all_workers(p), 32);
    const AccuracyReport via_bounds =
        alcc_error_bound(p, gram.degree_and_bounds(6, 4), all_workers(p), 32);
    CHECK(via_poly.alcc_upper_bound == via_bounds.alcc_upper_bound);
    CHECK(via_poly.alcc_upper_bound_loose == via_bounds.alcc_upper_bound_loose);
}

TEST_CASE("error bound validates its inputs") {
    const AlccParams p = make_params(2, 1, 2, 1.5, 10.0, 2.0, 6, 4);
    const PolyFn::Bounds fb{2, 1.0, 6.0};
    const auto idx = all_workers(p);
    CHECK_ERRC(alcc_error_bound(p, PolyFn::Bounds{1, 1.0, 1.0}, idx, 32),
               errc::invalid_argument);
    CHECK_ERRC(alcc_error_bound(p, fb, idx, 10), errc::invalid_argument);
    std::vector<std::uint32_t> thin(idx.begin(), idx.begin() + 3);
    CHECK_ERRC(alcc_error_bound(p, fb, thin, 32), errc::insufficient_workers);
    // Duplicates collapse: padding with repeats does not reach the quorum.
    std::vector<std::uint32_t> dup(p.dtilde() + 1, 0u);
    CHECK_ERRC(alcc_error_bound(p, fb, dup, 32), errc::insufficient_workers);
}

TEST_CASE("fixed-point quantization floor at the stated example point") {
    const LccDeltaBounds b = lcc_error_lower_bounds(1, 1.0, 1.0, 32);
    CHECK(b.modular == doctest::Approx(std::exp2(-7.5)).epsilon(1e-12));
    CHECK_ERRC(lcc_error_lower_bounds(0, 1.0, 1.0, 32), errc::invalid_argument);
    CHECK_ERRC(lcc_error_lower_bounds(1, 0.0, 1.0, 32), errc::invalid_argument);
    CHECK_ERRC(lcc_error_lower_bounds(1, 1.0, -1.0, 32), errc::invalid_argument);
}

TEST_CASE("quantization floors decay with the advertised exponents in bits") {
    for (const std::uint32_t d : {1u, 2u, 3u}) {
        const double dd = d;
        const LccDeltaBounds lo = lcc_error_lower_bounds(d, 7.0, 3.0, 40);
        const LccDeltaBounds hi = lcc_error_lower_bounds(d, 7.0, 3.0, 48);
        const double slope1 = (std::log2(hi.modular) - std::log2(lo.modular)) / 8.0;
        const double slope2 = (std::log2(hi.integer_once) - std::log2(lo.integer_once)) / 8.0;
        CHECK(slope1 == doctest::Approx(-1.0 / (2.0 * (dd + 1.0))).epsilon(1e-6));
        CHECK(slope2 == doctest::Approx(-1.0 / (dd * dd + dd + 1.0)).epsilon(1e-6));
    }
}

TEST_CASE("floating-point bound undercuts the fixed-point floors at high precision") {
    // Gram computation on 1000 x 1000 blocks, heavy noise: the exponential
    // decay of the analog bound wins once b clears the crossover.
    const AlccParams p = make_params(5, 3, 2, 1.5, 1e12, 100.0, 1000, 1000);
    const PolyFn::Bounds fb{2, 1.0, 1000.0};
    const auto idx = all_workers(p);
    const auto alcc_at = [&](std::uint32_t b) {
        return alcc_error_bound(p, fb, idx, b).alcc_upper_bound;
    };
    const auto lcc_at = [&](std::uint32_t b) { return lcc_error_lower_bounds(2, 1000.0, 100.0, b); };

    const LccDeltaBounds low = lcc_at(64);
    CHECK(alcc_at(64) > std::min(low.modular, low.integer_once));
    const LccDeltaBounds high = lcc_at(200);
    CHECK(alcc_at(200) < high.modular);
    CHECK(alcc_at(200) < high.integer_once);

    // Beyond the crossover the gap only widens.
    const LccDeltaBounds higher = lcc_at(240);
    CHECK(alcc_at(240) < higher.modular);
    CHECK(alcc_at(240) < higher.integer_once);
    CHECK(alcc_at(240) / alcc_at(200) < high.modular / higher.modular);
}

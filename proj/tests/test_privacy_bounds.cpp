#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "core/privacy_bounds.hpp"
#include "test_util.hpp"

using namespace alcc;

namespace {

using lcplx = std::complex<long double>;

AlccParams make_params(std::size_t k, std::size_t t, std::uint32_t degree, double beta,
                       double sigma_n, double r, double theta = 3.0) {
    AlccParams p;
    p.k = k;
    p.t = t;
    p.s = 0;
    p.degree = degree;
    p.beta = beta;
    p.sigma_n = sigma_n;
    p.theta = theta;
    p.r = r;
    p.m = 1;
    p.n = 1;
    return p;
}

// Determinant of a small complex matrix by partial-pivot elimination in
// extended precision.
lcplx det_small(std::vector<std::vector<lcplx>> a) {
    const std::size_t n = a.size();
    lcplx det(1.0L, 0.0L);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t rr = c + 1; rr < n; ++rr)
            if (std::abs(a[rr][c]) > std::abs(a[piv][c])) piv = rr;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        if (std::abs(a[c][c]) == 0.0L) return {0.0L, 0.0L};
        det *= a[c][c];
        for (std::size_t rr = c + 1; rr < n; ++rr) {
            const lcplx f = a[rr][c] / a[c][c];
            for (std::size_t cc = c; cc < n; ++cc) a[rr][cc] -= f * a[c][cc];
        }
    }
    return det;
}

// Leakage of one colluding subset straight from its mixing matrices:
// log2 det(Sigma~ + c Sigma) - log2 det(Sigma~), both Gram products formed
// and factored in extended precision. Independent of the library's whitened
// spectrum route.
double leakage_oracle(const CollusionContext& ctx, double c) {
    const std::size_t t = ctx.Ltilde.rows();
    auto gram = [&](const CMatrix& m) {
        std::vector<std::vector<lcplx>> g(t, std::vector<lcplx>(t));
        for (std::size_t a = 0; a < t; ++a)
            for (std::size_t b = 0; b < t; ++b) {
                lcplx acc(0.0L, 0.0L);
                for (std::size_t j = 0; j < m.cols(); ++j) {
                    const lcplx x(m(a, j).real(), m(a, j).imag());
                    const lcplx y(m(b, j).real(), -m(b, j).imag());
                    acc += x * y;
                }
                g[a][b] = acc;
            }
        return g;
    };
    const auto st = gram(ctx.Ltilde);
    const auto s = gram(ctx.L);
    std::vector<std::vector<lcplx>> sum = st;
    for (std::size_t a = 0; a < t; ++a)
        for (std::size_t b = 0; b < t; ++b) sum[a][b] += static_cast<long double>(c) * s[a][b];
    const long double num = det_small(sum).real();
    const long double den = det_small(st).real();
    return static_cast<double>((std::log(num) - std::log(den)) / std::log(2.0L));
}

std::vector<std::vector<std::uint32_t>> all_subsets(std::size_t n, std::size_t t) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    const auto rec = [&](auto&& self, std::uint32_t start) -> void {
        if (cur.size() == t) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

double signal_ratio(const AlccParams& p) {
    return p.r * p.r * static_cast<double>(p.t) / (p.sigma_n * p.sigma_n);
}

} // namespace

TEST_CASE("collusion context carries the basis values at the colluders' points") {
    const AlccParams p = make_params(3, 2, 1, 1.4, 2.0, 1.0);
    const std::vector<std::uint32_t> subset{1, 3};
    const CollusionContext ctx = collusion_context(p, subset);
    REQUIRE(ctx.L.rows() == 2);
    REQUIRE(ctx.L.cols() == 3);
    REQUIRE(ctx.Ltilde.rows() == 2);
    REQUIRE(ctx.Ltilde.cols() == 2);
    const auto alphas = p.alpha_points();
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(ctx.L(a, j) - lagrange_basis(p, j, alphas[subset[a]])) == 0.0);
        for (std::size_t b = 0; b < 2; ++b)
            CHECK(std::abs(ctx.Ltilde(a, b) - lagrange_basis(p, 3 + b, alphas[subset[a]])) == 0.0);
    }
    // Order of the input subset is irrelevant; the context sorts.
    const CollusionContext swapped = collusion_context(p, {3, 1});
    CHECK(testutil::max_abs_diff(swapped.L, ctx.L) == 0.0);

    CHECK_ERRC(collusion_context(p, {1}), errc::invalid_argument);
    CHECK_ERRC(collusion_context(p, {1, 99}), errc::invalid_argument);
    CHECK_ERRC(collusion_context(p, {1, 1}), errc::duplicate_index);
}

TEST_CASE("no colluders means a zero leakage report") {
    const AlccParams p = make_params(3, 0, 1, 1.5, 1.0, 1.0);
    const PrivacyReport rep = mis_bound(p);
    CHECK(rep.eta_c_bound == 0.0);
    CHECK(rep.eta_s_bound == 0.0);
    CHECK(rep.eta_c_trace_bound == 0.0);
    CHECK(rep.subsets_examined == 0);
    CHECK(rep.worst_subset.empty());
}

TEST_CASE("noiseless sharing with colluders present is rejected as unbounded") {
    const AlccParams p = make_params(3, 1, 1, 1.5, 0.0, 1.0);
    CHECK_ERRC(mis_bound(p), errc::invalid_argument);
    CHECK_ERRC(truncated_ds_bound(p, 0.5), errc::invalid_argument);
}

TEST_CASE("worst-subset search matches an exhaustive determinant oracle") {
    for (const std::size_t t : {std::size_t{1}, std::size_t{2}}) {
        const AlccParams p = make_params(4 - t, t, 1, 1.5, 2.0, 1.0);
        REQUIRE(p.workers() == 4);
        const double c = signal_ratio(p);
        double best = 0.0;
        for (const auto& subset : all_subsets(p.workers(), t))
            best = std::max(best, leakage_oracle(collusion_context(p, subset), c));
        const PrivacyReport rep = mis_bound(p);
        CHECK(rep.exhaustive);
        CHECK(rep.subsets_examined == (t == 1 ? 4 : 6));
        CHECK(rep.eta_c_bound == doctest::Approx(best).epsilon(1e-9));
        CHECK(rep.worst_subset.size() == t);
        // The reported argmax reproduces the reported maximum.
        CHECK(leakage_oracle(collusion_context(p, rep.worst_subset), c) ==
              doctest::Approx(rep.eta_c_bound).epsilon(1e-9));
    }
}

TEST_CASE("distinguishing bound is the square-root relation applied exactly") {
    const AlccParams p = make_params(2, 2, 1, 1.5, 2.0, 1.0);
    const PrivacyReport rep = mis_bound(p);
    CHECK(rep.eta_s_bound == std::sqrt(2.0 * rep.eta_c_bound));
    CHECK(ds_bound_from(0.0) == 0.0);
    CHECK(ds_bound_from(2.0) == 2.0);
    CHECK_ERRC(ds_bound_from(-1.0), errc::invalid_argument);
}

TEST_CASE("determinant and trace forms agree in the small-signal regime") {
    // r / sigma_n = 1e-6 keeps every eigenvalue term far inside the linear
    // range of log1p.
    AlccParams p = make_params(4, 4, 2, 1.5, 1e6, 1.0);
    REQUIRE(p.workers() == 15);
    const PrivacyReport rep = mis_bound(p);
    CHECK(rep.exhaustive);
    CHECK(rep.subsets_examined == 1365);
    CHECK(rep.eta_c_bound > 0.0);
    CHECK(std::abs(rep.eta_c_bound - rep.eta_c_trace_bound) <= 0.01 * rep.eta_c_trace_bound);
}

TEST_CASE("leakage bound decreases as the support radius grows") {
    // Exact parameter point used throughout the privacy discussion: fifteen
    // workers, four colluders, enormous noise.
    double prev = std::numeric_limits<double>::infinity();
    for (const double beta : {1.0, 1.25, 1.5, 1.75, 2.0}) {
        const AlccParams p = make_params(4, 4, 2, beta, 1e23, 1e10);
        REQUIRE(p.workers() == 15);
        const PrivacyReport rep = mis_bound(p);
        CHECK(rep.eta_c_bound > 0.0);
        CHECK(rep.eta_c_bound <= prev * (1.0 + 1e-12));
        CHECK(rep.eta_s_bound <= std::sqrt(2.0 * prev) * (1.0 + 1e-12));
        prev = rep.eta_c_bound;
    }
}

TEST_CASE("leakage bound decreases as the noise level grows") {
    double prev = std::numeric_limits<double>::infinity();
    for (const double sigma : {1e22, 3e22, 1e23, 3e23, 1e24}) {
        const AlccParams p = make_params(4, 4, 2, 1.5, sigma, 1e10);
        const PrivacyReport rep = mis_bound(p);
        CHECK(rep.eta_c_bound > 0.0);
        CHECK(rep.eta_c_bound <= prev * (1.0 + 1e-12));
        prev = rep.eta_c_bound;
    }
}

TEST_CASE("fifteen-worker search agrees with the oracle over all 1365 subsets") {
    const AlccParams p = make_params(4, 4, 2, 1.3, 2.0, 1.0);
    REQUIRE(p.workers() == 15);
    const double c = signal_ratio(p);
    double best = 0.0;
    for (const auto& subset : all_subsets(p.workers(), 4))
        best = std::max(best, leakage_oracle(collusion_context(p, subset), c));
    const PrivacyReport rep = mis_bound(p);
    CHECK(rep.exhaustive);
    CHECK(rep.subsets_examined == 1365);
    CHECK(rep.eta_c_bound == doctest::Approx(best).epsilon(1e-9));
    CHECK(leakage_oracle(collusion_context(p, rep.worst_subset), c) ==
          doctest::Approx(rep.eta_c_bound).epsilon(1e-9));
}

TEST_CASE("sampled search never exceeds the exhaustive maximum") {
    const AlccParams p = make_params(4, 4, 2, 1.5, 2.0, 1.0);
    const PrivacyReport full = mis_bound(p);
    REQUIRE(full.exhaustive);
    SubsetSearchSpec sampled;
    sampled.exhaustive_cap = 1;
    sampled.sample_count = 60;
    sampled.seed = 3;
    const PrivacyReport sub = mis_bound(p, sampled);
    CHECK_FALSE(sub.exhaustive);
    CHECK(sub.subsets_examined == 60);
    CHECK(sub.eta_c_bound <= full.eta_c_bound * (1.0 + 1e-12));
    CHECK(sub.eta_c_bound > 0.0);
}

TEST_CASE("mean-share-distance bound evaluates its geometric sum") {
    // Term-by-term extended-precision oracle.
    const auto oracle = [](std::size_t k, std::size_t t, double r, double beta) {
        long double sum = 0.0L, q = 1.0L;
        for (std::size_t l = 0; l < k + t; ++l) {
            sum += q;
            q /= beta;
        }
        return static_cast<double>(static_cast<long double>(k) * r / (k + t) * sum);
    };
    const AlccParams p = make_params(4, 4, 1, 1.5, 1.0, 1e10);
    const double v = d_mean_bound(p);
    CHECK(v == doctest::Approx(oracle(4, 4, 1e10, 1.5)).epsilon(1e-12));
    CHECK(v == doctest::Approx(1.4414723366e10).epsilon(1e-9));

    // Unit radius: every term is one, so the bound collapses to k*r.
    const AlccParams unit = make_params(4, 4, 1, 1.0, 1.0, 1e10);
    CHECK(d_mean_bound(unit) == doctest::Approx(4e10).epsilon(1e-15));

    // Huge radius: only the constant term survives.
    const AlccParams wide = make_params(4, 4, 1, 1e12, 1.0, 1e10);
    CHECK(d_mean_bound(wide) == doctest::Approx(0.5e10).epsilon(1e-11));
}

TEST_CASE("truncation correction vanishes for generous truncation levels") {
    AlccParams p = make_params(2, 10, 1, 1.5, 1e6, 1.0);
    p.theta = 10.0;
    const double eta_s = 0.5;
    const double adj = truncated_ds_bound(p, eta_s);
    CHECK(std::abs(adj - eta_s) <= 1e-6 * eta_s);

    p.theta = 50.0;
    CHECK(truncated_ds_bound(p, eta_s) == eta_s);

    // Zero colluders: passthrough by definition.
    const AlccParams none = make_params(3, 0, 1, 1.5, 1.0, 1.0);
    CHECK(truncated_ds_bound(none, 0.25) == 0.25);
}

TEST_CASE("truncation correction matches the closed-form plug-in") {
    // theta = 3, two noise blocks, mean-distance ratio pinned at 1e-6 by the
    // choice sigma_n = 2 sqrt(2) 1e6 with beta = 1 (share mean distance 2r).
    AlccParams p = make_params(2, 2, 1, 1.0, 2.0 * std::sqrt(2.0) * 1e6, 1.0);
    p.theta = 3.0;
    const double ratio = d_mean_bound(p) * std::sqrt(2.0) / p.sigma_n;
    REQUIRE(ratio == doctest::Approx(1e-6).epsilon(1e-12));
    const double eta_s = 1e-10;
    const long double w = std::pow(1.0L - 2.0L * std::exp(-4.5L), 2);
    const long double tail =
        std::pow(2.0L * std::exp(-0.5L * (3.0L - static_cast<long double>(ratio)) *
                                 (3.0L - static_cast<long double>(ratio))),
                 2);
    const long double want = (static_cast<long double>(eta_s) + tail) / w;
    CHECK(truncated_ds_bound(p, eta_s) ==
          doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
    // The adjusted bound can only exceed eta_s / w.
    CHECK(truncated_ds_bound(p, eta_s) >= eta_s / static_cast<double>(w));
}

TEST_CASE("truncation bound rejects levels inside the mean-distance shift") {
    // ratio = 2 sqrt(2) ~ 2.83 exceeds theta = 2.
    AlccParams p = make_params(2, 2, 1, 1.0, 1.0, 1.0);
    p.theta = 2.0;
    CHECK_ERRC(truncated_ds_bound(p, 0.1), errc::invalid_argument);

    // theta below the weight-positivity threshold sqrt(2 ln 2) with a single
    // noise block makes the renormalization weight negative.
    AlccParams q = make_params(3, 1, 1, 1.0, 1e6, 1.0);
    q.theta = 1.0;
    CHECK_ERRC(truncated_ds_bound(q, 0.1), errc::invalid_argument);

    CHECK_ERRC(truncated_ds_bound(q, -0.5), errc::invalid_argument);
}

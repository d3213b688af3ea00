#include "core/privacy_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "core/linalg.hpp"
#include "core/rng.hpp"
#include "core/transforms.hpp"

namespace alcc {

CollusionContext collusion_context(const AlccParams& p, const std::vector<std::uint32_t>& subset) {
    p.validate();
    if (subset.size() != p.t) fail(errc::invalid_argument, "collusion_context: subset size must equal t");
    const std::size_t nw = p.workers();
    std::vector<std::uint32_t> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= nw) fail(errc::invalid_argument, "collusion_context: worker index out of range");
        if (i > 0 && sorted[i] == sorted[i - 1])
            fail(errc::duplicate_index, "collusion_context: duplicate worker index");
    }

    CollusionContext ctx;
    ctx.subset = sorted;
    ctx.L = CMatrix(p.t, p.k);
    ctx.Ltilde = CMatrix(p.t, p.t);
    for (std::size_t a = 0; a < p.t; ++a) {
        const cplx alpha = root_of_unity(nw, sorted[a]);
        for (std::size_t j = 0; j < p.k; ++j) ctx.L(a, j) = lagrange_basis(p, j, alpha);
        for (std::size_t b = 0; b < p.t; ++b) ctx.Ltilde(a, b) = lagrange_basis(p, p.k + b, alpha);
    }
    return ctx;
}

namespace {

std::string subset_string(const std::vector<std::uint32_t>& s) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << "}";
    return os.str();
}

// Eigenvalues of inv(Sigma~) Sigma through the Cholesky-whitened mixing
// matrix; all nonnegative.
std::vector<double> whitened_spectrum(const CollusionContext& ctx) {
    CMatrix sigma_tilde(ctx.Ltilde.rows(), ctx.Ltilde.rows());
    for (std::size_t a = 0; a < ctx.Ltilde.rows(); ++a)
        for (std::size_t b = 0; b < ctx.Ltilde.rows(); ++b) {
            cplx acc(0.0, 0.0);
            for (std::size_t j = 0; j < ctx.Ltilde.cols(); ++j)
                acc += ctx.Ltilde(a, j) * std::conj(ctx.Ltilde(b, j));
            sigma_tilde(a, b) = acc;
        }
    CMatrix chol;
    try {
        chol = cholesky_lower(sigma_tilde);
    } catch (const Error&) {
        fail(errc::singular_system,
             "noise mixing matrix numerically singular for subset " + subset_string(ctx.subset));
    }
    const CMatrix g = forward_substitute(chol, ctx.L);
    auto sv = singular_values(g);
    for (auto& v : sv) v *= v;
    return sv;
}

struct SubsetLeakage {
    double det_bits;
    double trace_bits;
};

SubsetLeakage subset_leakage(const AlccParams& p, const std::vector<std::uint32_t>& subset) {
    const auto ctx = collusion_context(p, subset);
    const auto mu = whitened_spectrum(ctx);
    const double c = p.r * p.r * static_cast<double>(p.t) / (p.sigma_n * p.sigma_n);
    double det_ln = 0.0, trace = 0.0;
    for (const double m : mu) {
        det_ln += std::log1p(c * m);
        trace += c * m;
    }
    return {det_ln / std::numbers::ln2, trace / std::numbers::ln2};
}

} // namespace

PrivacyReport mis_bound(const AlccParams& p, const SubsetSearchSpec& search) {
    p.validate();
    PrivacyReport rep;
    if (p.t == 0) return rep; // no colluders, nothing leaks
    if (!(p.sigma_n > 0.0))
        fail(errc::invalid_argument, "unbounded leakage: sigma_n must be positive");

    const std::size_t nw = p.workers();
    // C(N, t) with an early stop once past the exhaustive cap.
    double count = 1.0;
    for (std::size_t i = 0; i < p.t; ++i) {
        count *= static_cast<double>(nw - i) / static_cast<double>(i + 1);
        if (count > 4e18) break;
    }
    const bool exhaustive = count <= static_cast<double>(search.exhaustive_cap);

    auto consider = [&](const std::vector<std::uint32_t>& subset) {
        const auto leak = subset_leakage(p, subset);
        if (rep.subsets_examined == 0 || leak.det_bits > rep.eta_c_bound) {
            rep.eta_c_bound = leak.det_bits;
            rep.worst_subset = subset;
        }
        rep.eta_c_trace_bound = std::max(rep.eta_c_trace_bound, leak.trace_bits);
        ++rep.subsets_examined;
    };

    if (exhaustive) {
        std::vector<std::uint32_t> subset(p.t);
        for (std::size_t i = 0; i < p.t; ++i) subset[i] = static_cast<std::uint32_t>(i);
        while (true) {
            consider(subset);
            // next combination in lexicographic order
            std::size_t i = p.t;
            while (i-- > 0) {
                if (subset[i] + (p.t - i) < nw) {
                    ++subset[i];
                    for (std::size_t j = i + 1; j < p.t; ++j) subset[j] = subset[j - 1] + 1;
                    break;
                }
                if (i == 0) goto done;
            }
        }
    done:;
    } else {
        std::mt19937_64 rng(mix_seed(search.seed, 0x737562736574ull));
        std::vector<std::uint32_t> pool(nw);
        for (std::size_t i = 0; i < nw; ++i) pool[i] = static_cast<std::uint32_t>(i);
        for (std::size_t it = 0; it < search.sample_count; ++it) {
            for (std::size_t i = 0; i < p.t; ++i) {
                std::uniform_int_distribution<std::size_t> d(i, nw - 1);
                std::swap(pool[i], pool[d(rng)]);
            }
            std::vector<std::uint32_t> subset(pool.begin(), pool.begin() + static_cast<long>(p.t));
            std::sort(subset.begin(), subset.end());
            consider(subset);
        }
    }

    rep.exhaustive = exhaustive;
    rep.eta_s_bound = ds_bound_from(rep.eta_c_bound);
    return rep;
}

double ds_bound_from(double eta_c_bits) {
    if (eta_c_bits < 0.0) fail(errc::invalid_argument, "ds_bound: negative leakage bound");
    return std::sqrt(2.0 * eta_c_bits);
}

double d_mean_bound(const AlccParams& p) {
    p.validate();
    const std::size_t kt = p.points();
    // Geometric sum evaluated term by term; exact at beta = 1.
    double sum = 0.0, q = 1.0;
    for (std::size_t l = 0; l < kt; ++l) {
        sum += q;
        q /= p.beta;
    }
    return static_cast<double>(p.k) * p.r / static_cast<double>(kt) * sum;
}

double truncated_ds_bound(const AlccParams& p, double eta_s_bits) {
    p.validate();
    if (p.t == 0) return eta_s_bits;
    if (!(p.sigma_n > 0.0))
        fail(errc::invalid_argument, "unbounded leakage: sigma_n must be positive");
    if (eta_s_bits < 0.0) fail(errc::invalid_argument, "truncated_ds_bound: negative eta_s");

    const double ratio = d_mean_bound(p) * std::sqrt(static_cast<double>(p.t)) / p.sigma_n;
    if (!(p.theta > ratio))
        fail(errc::invalid_argument, "truncation level too small for bound");
    const double w = std::pow(1.0 - 2.0 * std::exp(-0.5 * p.theta * p.theta),
                              static_cast<double>(p.t));
    if (!(w > 0.0))
        fail(errc::invalid_argument, "truncation level too small for bound");
    const double tail = std::pow(2.0 * std::exp(-0.5 * (p.theta - ratio) * (p.theta - ratio)),
                                 static_cast<double>(p.t));
    return (eta_s_bits + tail) / w;
}

} // namespace alcc

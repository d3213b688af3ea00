#include "core/alcc_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "core/linalg.hpp"
#include "core/rng.hpp"
#include "core/transforms.hpp"

namespace alcc {

void AlccParams::validate() const {
    if (k < 1) fail(errc::invalid_argument, "params: k must be at least 1");
    if (degree < 1) fail(errc::invalid_argument, "params: degree must be at least 1");
    if (!(beta > 0.0)) fail(errc::invalid_argument, "params: beta must be positive");
    if (sigma_n < 0.0) fail(errc::invalid_argument, "params: sigma_n must be nonnegative");
    if (!(theta > 0.0)) fail(errc::invalid_argument, "params: theta must be positive");
    if (!(r > 0.0)) fail(errc::invalid_argument, "params: r must be positive");
    if (m < 1 || n < 1) fail(errc::invalid_argument, "params: block shape must be nonempty");
}

std::vector<cplx> AlccParams::beta_points() const {
    const std::size_t kt = points();
    std::vector<cplx> b(kt);
    for (std::size_t j = 0; j < kt; ++j)
        b[j] = beta * root_of_unity(kt, static_cast<long long>(j));
    return b;
}

std::vector<cplx> AlccParams::alpha_points() const {
    const std::size_t nw = workers();
    std::vector<cplx> a(nw);
    for (std::size_t i = 0; i < nw; ++i) a[i] = root_of_unity(nw, static_cast<long long>(i));
    return a;
}

std::uint64_t AlccParams::fingerprint() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "k=%zu;t=%zu;s=%zu;d=%u;beta=%.17g;sn=%.17g;th=%.17g;r=%.17g;m=%zu;n=%zu;seed=%llu",
                  k, t, s, degree, beta, sigma_n, theta, r, m, n,
                  static_cast<unsigned long long>(seed));
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char* c = buf; *c; ++c) {
        h ^= static_cast<unsigned char>(*c);
        h *= 0x100000001b3ull;
    }
    return h;
}

cplx lagrange_basis(const AlccParams& p, std::size_t j, cplx z) {
    const std::size_t kt = p.points();
    if (j >= kt) fail(errc::invalid_argument, "lagrange_basis: index out of range");
    const cplx bj = p.beta * root_of_unity(kt, static_cast<long long>(j));
    const cplx q = z / bj;
    cplx acc(0.0, 0.0), pw(1.0, 0.0);
    for (std::size_t l = 0; l < kt; ++l) {
        acc += pw;
        pw *= q;
    }
    return acc / static_cast<double>(kt);
}

std::vector<CMatrix> encode_coefficient_stack(const AlccParams& p, const std::vector<CMatrix>& w) {
    const std::size_t kt = p.points();
    if (w.size() != kt) fail(errc::dimension_mismatch, "coefficient stack: need k+t blocks");
    auto coeffs = dft_entrywise(w);
    double bl = 1.0;
    for (std::size_t l = 0; l < kt; ++l) {
        coeffs[l].scale(cplx(1.0 / (static_cast<double>(kt) * bl), 0.0));
        bl *= p.beta;
    }
    return coeffs;
}

CMatrix horner_share(const std::vector<CMatrix>& coeffs, cplx alpha) {
    if (coeffs.empty()) fail(errc::invalid_argument, "horner_share: empty stack");
    const std::size_t kt = coeffs.size();
    const std::size_t sz = coeffs[0].size();
    CMatrix out(coeffs[0].rows(), coeffs[0].cols());
    const double ar = alpha.real(), ai = alpha.imag();

    const cplx* top = coeffs[kt - 1].data();
    cplx* dst = out.data();
    std::memcpy(dst, top, sz * sizeof(cplx));
    for (std::size_t l = kt - 1; l-- > 0;) {
        const cplx* add = coeffs[l].data();
        for (std::size_t e = 0; e < sz; ++e) {
            const double re = dst[e].real(), im = dst[e].imag();
            dst[e] = cplx(re * ar - im * ai + add[e].real(),
                          re * ai + im * ar + add[e].imag());
        }
    }
    return out;
}

ShareSet encode(const AlccParams& p, const MatrixBatch& data) {
    p.validate();
    if (data.size() != p.k) fail(errc::dimension_mismatch, "encode: batch must hold k blocks");
    for (const auto& x : data) {
        if (x.rows() != p.m || x.cols() != p.n)
            fail(errc::dimension_mismatch, "encode: block shape differs from params");
        for (std::size_t e = 0; e < x.size(); ++e) {
            const double v = x.data()[e];
            if (!std::isfinite(v)) fail(errc::nonfinite, "encode: nonfinite data entry");
            if (std::abs(v) > p.r) fail(errc::data_out_of_range, "data out of range");
        }
    }

    std::vector<CMatrix> w;
    w.reserve(p.points());
    for (const auto& x : data) w.push_back(to_complex(x));
    if (p.t > 0) {
        std::mt19937_64 rng(mix_seed(p.seed, 0x6e6f697365ull));
        const ComplexGaussianSpec spec{p.sigma_n / std::sqrt(static_cast<double>(p.t)), p.theta};
        for (std::size_t j = 0; j < p.t; ++j)
            w.push_back(sample_truncated_complex_gaussian(spec, p.m, p.n, rng));
    }

    const auto coeffs = encode_coefficient_stack(p, w);
    const auto alphas = p.alpha_points();

    ShareSet set;
    set.fingerprint = p.fingerprint();
    set.m = p.m;
    set.n = p.n;
    set.shares.reserve(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i)
        set.shares.emplace_back(static_cast<std::uint32_t>(i), horner_share(coeffs, alphas[i]));
    return set;
}

CMatrix decoding_matrix(const AlccParams& p, const std::vector<std::uint32_t>& worker_indices) {
    const std::size_t nw = p.workers();
    if (worker_indices.size() != p.dtilde() + 1)
        fail(errc::invalid_argument, "decoding_matrix: need exactly dtilde+1 worker indices");
    std::vector<cplx> nodes;
    nodes.reserve(worker_indices.size());
    for (const auto i : worker_indices) {
        if (i >= nw) fail(errc::invalid_argument, "decoding_matrix: worker index out of range");
        nodes.push_back(root_of_unity(nw, i));
    }
    for (std::size_t a = 0; a < worker_indices.size(); ++a)
        for (std::size_t b = a + 1; b < worker_indices.size(); ++b)
            if (worker_indices[a] == worker_indices[b])
                fail(errc::duplicate_index, "decoding_matrix: duplicate worker index");
    return vandermonde_matrix(nodes, p.dtilde() + 1);
}

DecodeResult decode(const AlccParams& p, const EvalSet& evals, bool use_all_evals) {
    p.validate();
    if (evals.poly_degree != p.degree)
        fail(errc::invalid_argument, "decode: result degree differs from params degree");
    const std::size_t need = p.dtilde() + 1;
    const std::size_t nw = p.workers();

    std::vector<std::size_t> order(evals.results.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return evals.results[a].first < evals.results[b].first;
    });
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        if (evals.results[order[i]].first == evals.results[order[i + 1]].first)
            fail(errc::duplicate_index, "decode: duplicate worker index");
    if (evals.results.size() < need) fail(errc::insufficient_workers, "insufficient workers");

    const std::size_t used = use_all_evals ? evals.results.size() : need;
    const std::size_t cols = evals.rows * evals.cols;

    std::vector<cplx> nodes(used);
    CMatrix rhs(used, cols);
    for (std::size_t a = 0; a < used; ++a) {
        const auto& [idx, val] = evals.results[order[a]];
        if (idx >= nw) fail(errc::invalid_argument, "decode: worker index out of range");
        if (val.rows() != evals.rows || val.cols() != evals.cols)
            fail(errc::dimension_mismatch, "decode: result shape mismatch");
        nodes[a] = root_of_unity(nw, idx);
        std::memcpy(rhs.data() + a * cols, val.data(), cols * sizeof(cplx));
    }

    const CMatrix coeff = solve_vandermonde(nodes, rhs, need);

    // Evaluate the interpolated polynomial at each beta point by Horner over
    // the coefficient rows.
    const auto betas = p.beta_points();
    DecodeResult out;
    out.blocks.reserve(p.k);
    for (std::size_t j = 0; j < p.k; ++j) {
        const cplx b = betas[j];
        std::vector<cplx> acc(cols);
        std::memcpy(acc.data(), coeff.data() + (need - 1) * cols, cols * sizeof(cplx));
        for (std::size_t l = need - 1; l-- > 0;) {
            const cplx* row = coeff.data() + l * cols;
            for (std::size_t e = 0; e < cols; ++e) acc[e] = acc[e] * b + row[e];
        }
        RMatrix block(evals.rows, evals.cols);
        for (std::size_t e = 0; e < cols; ++e) {
            out.max_imag_residue = std::max(out.max_imag_residue, std::abs(acc[e].imag()));
            block.data()[e] = acc[e].real();
            if (!std::isfinite(block.data()[e])) fail(errc::nonfinite, "decode: nonfinite output");
        }
        out.blocks.push_back(std::move(block));
    }
    return out;
}

CMatrix worker_eval(const PolyFn& f, const CMatrix& share) {
    return f.eval(share);
}

} // namespace alcc

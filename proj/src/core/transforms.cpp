#include "core/transforms.hpp"

#include <cmath>
#include <numbers>

namespace alcc {

bool is_power_of_two(std::size_t k) {
    return k > 0 && (k & (k - 1)) == 0;
}

cplx root_of_unity(std::size_t k, long long j) {
    if (k == 0) fail(errc::invalid_argument, "root_of_unity: order must be positive");
    long long r = j % static_cast<long long>(k);
    if (r < 0) r += static_cast<long long>(k);
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(k);
    return cplx(std::cos(ang), std::sin(ang));
}

std::vector<cplx> roots_of_unity(std::size_t k) {
    std::vector<cplx> w(k);
    for (std::size_t j = 0; j < k; ++j) w[j] = root_of_unity(k, static_cast<long long>(j));
    return w;
}

namespace {

// sign = -1 forward, +1 inverse (unscaled).
void fourier_pow2(cplx* v, std::size_t n, int sign) {
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wstep(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = v[i + j];
                const cplx t = v[i + j + len / 2] * w;
                v[i + j] = u + t;
                v[i + j + len / 2] = u - t;
                w *= wstep;
            }
        }
    }
}

std::vector<cplx> fourier_direct(const std::vector<cplx>& v, int sign) {
    const std::size_t n = v.size();
    std::vector<cplx> out(n);
    const auto w = roots_of_unity(n);
    for (std::size_t l = 0; l < n; ++l) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t idx = (j * l) % n;
            const cplx ph = sign < 0 ? std::conj(w[idx]) : w[idx];
            acc += v[j] * ph;
        }
        out[l] = acc;
    }
    return out;
}

std::vector<cplx> fourier(const std::vector<cplx>& v, int sign) {
    if (v.empty()) fail(errc::invalid_argument, "dft: empty input");
    if (is_power_of_two(v.size())) {
        std::vector<cplx> out(v);
        fourier_pow2(out.data(), out.size(), sign);
        return out;
    }
    return fourier_direct(v, sign);
}

} // namespace

std::vector<cplx> dft(const std::vector<cplx>& v) {
    return fourier(v, -1);
}

std::vector<cplx> idft(const std::vector<cplx>& v) {
    auto out = fourier(v, +1);
    const double inv = 1.0 / static_cast<double>(v.size());
    for (auto& x : out) x *= inv;
    return out;
}

std::vector<CMatrix> dft_entrywise(const std::vector<CMatrix>& in) {
    if (in.empty()) fail(errc::invalid_argument, "dft_entrywise: empty stack");
    const std::size_t k = in.size();
    for (const auto& m : in)
        if (!m.same_shape(in[0])) fail(errc::dimension_mismatch, "dft_entrywise: shape mismatch");

    std::vector<CMatrix> out(k, CMatrix(in[0].rows(), in[0].cols()));
    const std::size_t entries = in[0].size();
    const bool pow2 = is_power_of_two(k);
    const auto w = roots_of_unity(k);

    std::vector<cplx> buf(k);
    for (std::size_t e = 0; e < entries; ++e) {
        for (std::size_t j = 0; j < k; ++j) buf[j] = in[j].data()[e];
        if (pow2) {
            fourier_pow2(buf.data(), k, -1);
        } else {
            std::vector<cplx> tmp(k);
            for (std::size_t l = 0; l < k; ++l) {
                cplx acc(0.0, 0.0);
                for (std::size_t j = 0; j < k; ++j) acc += buf[j] * std::conj(w[(j * l) % k]);
                tmp[l] = acc;
            }
            buf.swap(tmp);
        }
        for (std::size_t l = 0; l < k; ++l) out[l].data()[e] = buf[l];
    }
    return out;
}

} // namespace alcc

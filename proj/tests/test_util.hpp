#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <doctest.h>

#include "core/cmatrix.hpp"
#include "core/errors.hpp"

// Raises-with-code assertion; doctest's CHECK_THROWS_AS cannot inspect the
// error code.
#define CHECK_ERRC(expr, code_)                                                \
    do {                                                                       \
        bool caught_ = false;                                                  \
        try {                                                                  \
            (void)(expr);                                                      \
        } catch (const alcc::Error& e_) {                                      \
            caught_ = true;                                                    \
            CHECK_MESSAGE(e_.code() == (code_), #expr ": wrong error code: ",  \
                          e_.what());                                          \
        }                                                                      \
        CHECK_MESSAGE(caught_, #expr " did not raise");                        \
    } while (0)

namespace testutil {

inline double rel_err(double got, double want) {
    const double den = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / den;
}

inline double rel_err(const alcc::CMatrix& got, const alcc::CMatrix& want) {
    REQUIRE(got.rows() == want.rows());
    REQUIRE(got.cols() == want.cols());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num += std::norm(got.data()[i] - want.data()[i]);
        den += std::norm(want.data()[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double rel_err(const alcc::RMatrix& got, const alcc::RMatrix& want) {
    REQUIRE(got.rows() == want.rows());
    REQUIRE(got.cols() == want.cols());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        const double d = got.data()[i] - want.data()[i];
        num += d * d;
        den += want.data()[i] * want.data()[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double max_abs_diff(const alcc::CMatrix& a, const alcc::CMatrix& b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline alcc::RMatrix random_rmatrix(std::size_t rows, std::size_t cols, double amp,
                                    std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-amp, amp);
    alcc::RMatrix out(rows, cols);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = d(rng);
    return out;
}

inline alcc::CMatrix random_cmatrix(std::size_t rows, std::size_t cols, double amp,
                                    std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-amp, amp);
    alcc::CMatrix out(rows, cols);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = alcc::cplx(d(rng), d(rng));
    return out;
}

inline std::vector<alcc::cplx> random_cvector(std::size_t len, double amp,
                                              std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-amp, amp);
    std::vector<alcc::cplx> out(len);
    for (auto& v : out) v = alcc::cplx(d(rng), d(rng));
    return out;
}

} // namespace testutil

#include "core/cmatrix.hpp"

#include <cmath>

namespace alcc {

CMatrix CMatrix::transpose() const {
    CMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

void CMatrix::add_scaled(const CMatrix& o, cplx w) {
    if (!same_shape(o)) fail(errc::dimension_mismatch, "add_scaled: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += w * o.data_[i];
}

void CMatrix::scale(cplx w) {
    for (auto& v : data_) v *= w;
}

double CMatrix::frobenius() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double CMatrix::max_abs_imag() const {
    double s = 0.0;
    for (const auto& v : data_) s = std::max(s, std::abs(v.imag()));
    return s;
}

bool CMatrix::all_finite() const {
    for (const auto& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double RMatrix::frobenius() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double RMatrix::max_abs() const {
    double s = 0.0;
    for (double v : data_) s = std::max(s, std::abs(v));
    return s;
}

bool RMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void RMatrix::add_scaled(const RMatrix& o, double w) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        fail(errc::dimension_mismatch, "add_scaled: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += w * o.data_[i];
}

CMatrix to_complex(const RMatrix& a) {
    CMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = cplx(a(i, j), 0.0);
    return c;
}

RMatrix real_part(const CMatrix& a) {
    RMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j).real();
    return r;
}

namespace {

// Split-plane rank-update kernel. Works on separate re/im arrays so the inner
// loops stay plain double arithmetic the compiler can vectorize.
void gram_planes(const double* are, const double* aim, std::size_t m, std::size_t n,
                 double* cre, double* cim) {
    for (std::size_t l = 0; l < m; ++l) {
        const double* br = are + l * n;
        const double* bi = aim + l * n;
        for (std::size_t i = 0; i < n; ++i) {
            const double ar = br[i], ai = bi[i];
            double* cr = cre + i * n;
            double* ci = cim + i * n;
            for (std::size_t j = i; j < n; ++j) {
                cr[j] += ar * br[j] - ai * bi[j];
                ci[j] += ar * bi[j] + ai * br[j];
            }
        }
    }
}

} // namespace

void gram_accumulate(CMatrix& c, const CMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (c.rows() != n || c.cols() != n) fail(errc::dimension_mismatch, "gram_accumulate: bad output shape");

    std::vector<double> are(m * n), aim(m * n), cre(n * n), cim(n * n);
    for (std::size_t i = 0; i < m * n; ++i) {
        are[i] = a.data()[i].real();
        aim[i] = a.data()[i].imag();
    }
    // Only the upper triangle of c carries state between calls.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            cre[i * n + j] = c(i, j).real();
            cim[i * n + j] = c(i, j).imag();
        }

    gram_planes(are.data(), aim.data(), m, n, cre.data(), cim.data());

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const cplx v(cre[i * n + j], cim[i * n + j]);
            c(i, j) = v;
            c(j, i) = v;
        }
}

void gram_accumulate(RMatrix& c, const RMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (c.rows() != n || c.cols() != n) fail(errc::dimension_mismatch, "gram_accumulate: bad output shape");
    for (std::size_t l = 0; l < m; ++l) {
        const double* row = a.data() + l * n;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = row[i];
            double* cr = c.data() + i * n;
            for (std::size_t j = i; j < n; ++j) cr[j] += v * row[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) c(j, i) = c(i, j);
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) fail(errc::dimension_mismatch, "matmul: inner dimension mismatch");
    CMatrix c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx* crow = c.data() + i * n;
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx v = a(i, k);
            const cplx* brow = b.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += v * brow[j];
        }
    }
    return c;
}

double frobenius_distance(const RMatrix& a, const RMatrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double frobenius_distance(const CMatrix& a, const CMatrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a.data()[i] - b.data()[i]);
    return std::sqrt(s);
}

} // namespace alcc

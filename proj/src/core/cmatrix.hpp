#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "core/errors.hpp"

namespace alcc {

using cplx = std::complex<double>;

// Dense row-major complex matrix. The storage layout (interleaved re/im pairs,
// row-major) is also the wire layout used by the share serializer.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx* data() noexcept { return data_.data(); }
    const cplx* data() const noexcept { return data_.data(); }

    bool same_shape(const CMatrix& o) const noexcept {
        return rows_ == o.rows_ && cols_ == o.cols_;
    }

    CMatrix transpose() const;

    void add_scaled(const CMatrix& o, cplx w); // *this += w * o
    void scale(cplx w);

    double frobenius() const;
    double max_abs_imag() const;
    bool all_finite() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

// Dense row-major real matrix.
class RMatrix {
public:
    RMatrix() = default;
    RMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    void add_scaled(const RMatrix& o, double w); // *this += w * o

    double frobenius() const;
    double max_abs() const;
    bool all_finite() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

CMatrix to_complex(const RMatrix& a);
RMatrix real_part(const CMatrix& a);

// c += a^T * a, upper triangle computed then mirrored; plain transpose, no
// conjugation, so the update is a polynomial in the entries of a.
void gram_accumulate(CMatrix& c, const CMatrix& a);
void gram_accumulate(RMatrix& c, const RMatrix& a);

CMatrix matmul(const CMatrix& a, const CMatrix& b);

double frobenius_distance(const RMatrix& a, const RMatrix& b);
double frobenius_distance(const CMatrix& a, const CMatrix& b);

} // namespace alcc

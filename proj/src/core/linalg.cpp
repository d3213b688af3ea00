#include "core/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace alcc {

CMatrix vandermonde_matrix(const std::vector<cplx>& nodes, std::size_t cols) {
    CMatrix b(nodes.size(), cols);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        cplx p(1.0, 0.0);
        for (std::size_t l = 0; l < cols; ++l) {
            b(i, l) = p;
            p *= nodes[i];
        }
    }
    return b;
}

CMatrix qr_least_squares(const CMatrix& a, const CMatrix& b) {
    const std::size_t m = a.rows(), n = a.cols(), r = b.cols();
    if (b.rows() != m) fail(errc::dimension_mismatch, "qr_least_squares: rhs row mismatch");
    if (m < n) fail(errc::invalid_argument, "qr_least_squares: underdetermined system");

    CMatrix w = a;
    CMatrix y = b;
    std::vector<std::size_t> perm(n);
    std::vector<double> colnorm(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        perm[j] = j;
        for (std::size_t i = 0; i < m; ++i) colnorm[j] += std::norm(w(i, j));
    }

    std::vector<cplx> v(m);
    double rmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        // Pivot on the column with the largest remaining norm.
        std::size_t piv = j;
        double best = -1.0;
        for (std::size_t c = j; c < n; ++c) {
            double s = 0.0;
            for (std::size_t i = j; i < m; ++i) s += std::norm(w(i, c));
            if (s > best) {
                best = s;
                piv = c;
            }
        }
        if (piv != j) {
            for (std::size_t i = 0; i < m; ++i) std::swap(w(i, j), w(i, piv));
            std::swap(perm[j], perm[piv]);
            std::swap(colnorm[j], colnorm[piv]);
        }

        double xnorm = std::sqrt(best);
        if (j == 0) rmax = xnorm;
        if (!(xnorm > rmax * 1e-13) || xnorm == 0.0)
            fail(errc::singular_system, "singular system");

        const cplx x0 = w(j, j);
        const double ax0 = std::abs(x0);
        const cplx phase = ax0 > 0.0 ? x0 / ax0 : cplx(1.0, 0.0);
        const cplx beta = -phase * xnorm;

        v[j] = x0 - beta;
        for (std::size_t i = j + 1; i < m; ++i) v[i] = w(i, j);
        double vsq = 0.0;
        for (std::size_t i = j; i < m; ++i) vsq += std::norm(v[i]);
        const double tau = 2.0 / vsq;

        w(j, j) = beta;
        for (std::size_t i = j + 1; i < m; ++i) w(i, j) = cplx(0.0, 0.0);
        for (std::size_t c = j + 1; c < n; ++c) {
            cplx dot(0.0, 0.0);
            for (std::size_t i = j; i < m; ++i) dot += std::conj(v[i]) * w(i, c);
            dot *= tau;
            for (std::size_t i = j; i < m; ++i) w(i, c) -= dot * v[i];
        }
        for (std::size_t c = 0; c < r; ++c) {
            cplx dot(0.0, 0.0);
            for (std::size_t i = j; i < m; ++i) dot += std::conj(v[i]) * y(i, c);
            dot *= tau;
            for (std::size_t i = j; i < m; ++i) y(i, c) -= dot * v[i];
        }
    }

    // Back substitution on the n x n upper triangle.
    CMatrix x(n, r);
    for (std::size_t c = 0; c < r; ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            cplx acc = y(ii, c);
            for (std::size_t jj = ii + 1; jj < n; ++jj) acc -= w(ii, jj) * x(jj, c);
            x(ii, c) = acc / w(ii, ii);
        }
    }

    CMatrix out(n, r);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t c = 0; c < r; ++c) out(perm[j], c) = x(j, c);
    return out;
}

CMatrix solve_vandermonde(const std::vector<cplx>& nodes, const CMatrix& rhs, std::size_t cols) {
    if (nodes.size() != rhs.rows())
        fail(errc::dimension_mismatch, "solve_vandermonde: node/rhs count mismatch");
    if (cols == 0 || cols > nodes.size())
        fail(errc::invalid_argument, "solve_vandermonde: bad coefficient count");
    return qr_least_squares(vandermonde_matrix(nodes, cols), rhs);
}

std::vector<double> singular_values(const CMatrix& a) {
    // One-sided Jacobi on columns; transpose first when wide so rows >= cols.
    CMatrix w = a.rows() >= a.cols() ? a : a.transpose();
    const std::size_t m = w.rows(), n = w.cols();

    const double tol = 1e-15;
    for (int sweep = 0; sweep < 64; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                cplx apq(0.0, 0.0);
                for (std::size_t i = 0; i < m; ++i) {
                    const cplx wp = w(i, p), wq = w(i, q);
                    app += std::norm(wp);
                    aqq += std::norm(wq);
                    apq += std::conj(wp) * wq;
                }
                const double off = std::abs(apq);
                if (off <= tol * std::sqrt(app * aqq) || off == 0.0) continue;
                rotated = true;

                const cplx ephi = apq / off;
                const double theta = (aqq - app) / (2.0 * off);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                const cplx ephic = std::conj(ephi);
                for (std::size_t i = 0; i < m; ++i) {
                    const cplx wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * ephic * wq;
                    w(i, q) = s * ephi * wp + c * wq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::norm(w(i, j));
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

double condition_number_matrix(const CMatrix& a) {
    const auto sv = singular_values(a);
    if (sv.empty() || sv.back() == 0.0) return std::numeric_limits<double>::infinity();
    return sv.front() / sv.back();
}

double condition_number(const std::vector<cplx>& nodes) {
    if (nodes.empty()) fail(errc::invalid_argument, "condition_number: no nodes");
    // Coincident nodes make the interpolation matrix exactly singular; the
    // iterative spectrum would only report a meaningless huge ratio.
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i] == nodes[j])
                fail(errc::singular_system, "condition_number: coincident nodes");
    return condition_number_matrix(vandermonde_matrix(nodes, nodes.size()));
}

namespace {

// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
CMatrix cholesky_factor(const CMatrix& a) {
    if (a.rows() != a.cols()) fail(errc::invalid_argument, "cholesky: matrix not square");
    const std::size_t n = a.rows();
    CMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0) || !std::isfinite(d))
            fail(errc::singular_system, "cholesky: matrix not positive definite");
        const double ljj = std::sqrt(d);
        l(j, j) = cplx(ljj, 0.0);
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx acc = a(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
            l(i, j) = acc / ljj;
        }
    }
    return l;
}

} // namespace

double cholesky_logdet(const CMatrix& a) {
    const CMatrix l = cholesky_factor(a);
    double s = 0.0;
    for (std::size_t j = 0; j < l.rows(); ++j) s += std::log(l(j, j).real());
    return 2.0 * s;
}

CMatrix cholesky_lower(const CMatrix& a) {
    return cholesky_factor(a);
}

CMatrix forward_substitute(const CMatrix& l, const CMatrix& b) {
    if (l.rows() != b.rows()) fail(errc::dimension_mismatch, "forward_substitute: shape mismatch");
    const std::size_t n = l.rows(), r = b.cols();
    CMatrix x(n, r);
    for (std::size_t c = 0; c < r; ++c)
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = b(i, c);
            for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * x(k, c);
            x(i, c) = acc / l(i, i);
        }
    return x;
}

CMatrix solve_hermitian_pd(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows()) fail(errc::dimension_mismatch, "solve_hermitian_pd: shape mismatch");
    const CMatrix l = cholesky_factor(a);
    const std::size_t n = a.rows(), r = b.cols();
    CMatrix y(n, r), x(n, r);
    for (std::size_t c = 0; c < r; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = b(i, c);
            for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * y(k, c);
            y(i, c) = acc / l(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            cplx acc = y(i, c);
            for (std::size_t k = i + 1; k < n; ++k) acc -= std::conj(l(k, i)) * x(k, c);
            x(i, c) = acc / l(i, i);
        }
    }
    return x;
}

} // namespace alcc

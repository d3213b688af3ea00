#pragma once

#include <cstdint>
#include <vector>

#include "core/cmatrix.hpp"
#include "core/polyfun.hpp"

namespace alcc {

// Protocol parameters. Interpolation support points sit on the circle of
// radius beta (beta_j = beta * omega^j, omega of order k+t); worker evaluation
// points are the N-th roots of unity with N derived as (k+t-1)*degree + s + 1.
// Worker indices are 0-based: alpha_i = gamma^i.
struct AlccParams {
    std::size_t k = 1;          // data blocks
    std::size_t t = 0;          // noise blocks tolerated as colluders
    std::size_t s = 0;          // stragglers tolerated
    std::uint32_t degree = 1;   // total degree of the evaluated polynomial
    double beta = 1.5;          // support circle radius
    double sigma_n = 0.0;       // total noise standard deviation
    double theta = 3.0;         // truncation level in noise standard deviations
    double r = 1.0;             // entrywise data magnitude bound
    std::size_t m = 1, n = 1;   // block shape
    std::uint64_t seed = 0;

    void validate() const;
    std::size_t points() const noexcept { return k + t; }
    std::size_t dtilde() const noexcept { return (k + t - 1) * degree; }
    std::size_t workers() const noexcept { return dtilde() + s + 1; } // N
    std::vector<cplx> beta_points() const;
    std::vector<cplx> alpha_points() const;
    std::uint64_t fingerprint() const;
};

using MatrixBatch = std::vector<RMatrix>;

struct ShareSet {
    std::uint64_t fingerprint = 0;
    std::size_t m = 0, n = 0;
    std::vector<std::pair<std::uint32_t, CMatrix>> shares; // (worker index, u(alpha_i))
};

struct EvalSet {
    std::size_t rows = 0, cols = 0;  // per-result shape
    std::uint32_t poly_degree = 1;   // degree of the function the workers applied
    std::vector<std::pair<std::uint32_t, CMatrix>> results;
};

struct DecodeResult {
    std::vector<RMatrix> blocks;   // recovered f(X_j), j in [k]
    double max_imag_residue = 0.0; // largest imaginary part discarded
};

// Value of the j-th Lagrange basis polynomial through the beta constellation,
// computed by the geometric-sum closed form (1/(k+t)) * sum_l (z/beta_j)^l.
cplx lagrange_basis(const AlccParams& p, std::size_t j, cplx z);

// Interpolation-side coefficient stack: entrywise DFT of the k data blocks
// followed by the t noise blocks, slot l scaled by 1/((k+t) * beta^l).
// Row count of the stack is free so callers can stream row slabs.
std::vector<CMatrix> encode_coefficient_stack(const AlccParams& p, const std::vector<CMatrix>& w);

// Polynomial evaluation of a coefficient stack at one point.
CMatrix horner_share(const std::vector<CMatrix>& coeffs, cplx alpha);

// Full share production: validates the batch, draws the noise blocks from the
// params seed (fresh generator per call, so repeated calls agree bitwise),
// and evaluates the share polynomial at every worker point.
ShareSet encode(const AlccParams& p, const MatrixBatch& data);

// Vandermonde system matrix rows (1, gamma^i, gamma^(2i), ...) over the given
// worker indices, dtilde+1 columns.
CMatrix decoding_matrix(const AlccParams& p, const std::vector<std::uint32_t>& worker_indices);

// Interpolates the worker results and reads the k data evaluations off the
// beta points. Uses the first dtilde+1 results by worker index; with
// use_all_evals every result enters a least-squares fit instead.
DecodeResult decode(const AlccParams& p, const EvalSet& evals, bool use_all_evals = false);

CMatrix worker_eval(const PolyFn& f, const CMatrix& share);

} // namespace alcc

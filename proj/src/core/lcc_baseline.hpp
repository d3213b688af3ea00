#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/cmatrix.hpp"
#include "core/field.hpp"
#include "core/polyfun.hpp"

namespace alcc {

// Row-major matrix of field residues (or raw machine words in the
// reduce-once worker mode).
struct FMatrix {
    FMatrix() = default;
    FMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return a_.size(); }
    field::u64* data() noexcept { return a_.data(); }
    const field::u64* data() const noexcept { return a_.data(); }
    field::u64& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * cols_ + j]; }
    field::u64 operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<field::u64> a_;
};

// How a worker's machine arithmetic is modeled. `modular` reduces mod p after
// every operation (word must hold p^2). `integer_once` runs plain integer
// arithmetic that wraps at the word size and reduces mod p a single time at
// the end.
enum class LccMode { modular, integer_once };

LccMode lcc_mode_from_string(const std::string& name);
std::string to_string(LccMode mode);

struct LccParams {
    std::size_t k = 1;
    std::size_t t = 0;
    std::size_t s = 0;
    std::uint32_t degree = 1;
    field::u64 p = 0;
    std::uint32_t bits = 64;    // machine word size
    double delta = 1.0;         // quantization step
    LccMode mode = LccMode::modular;
    std::size_t m = 1;
    std::size_t n = 1;
    std::uint64_t seed = 1;

    void validate() const;
    std::size_t points() const noexcept { return k + t; }
    std::size_t dtilde() const noexcept { return std::size_t{degree} * (points() - 1); }
    std::size_t workers() const noexcept { return dtilde() + s + 1; }

    // Interpolation nodes are the first k+t nonzero field elements; shares
    // are evaluated at the next N.
    field::u64 beta_point(std::size_t j) const noexcept { return j + 1; }
    field::u64 alpha_point(std::size_t i) const noexcept { return points() + 1 + i; }

    std::uint64_t fingerprint() const;
};

struct LccShareSet {
    std::uint64_t fingerprint = 0;
    std::size_t m = 0, n = 0;
    bool input_overflow = false; // some |round(x/delta)| reached p/2
    std::vector<std::pair<std::uint32_t, FMatrix>> shares;
};

struct LccEvalSet {
    std::size_t rows = 0, cols = 0;
    std::uint32_t poly_degree = 1;
    std::vector<std::pair<std::uint32_t, FMatrix>> results;
};

// Nearest-integer quantization, halfway cases away from zero; negatives map
// to p - |q|. A quantized magnitude reaching p/2 aliases under the signed
// lift; that sets input_overflow rather than failing, since overflow is the
// behavior under study.
field::u64 quantize_value(double x, double delta, field::u64 p, bool& input_overflow);
FMatrix quantize_matrix(const RMatrix& x, double delta, field::u64 p, bool& input_overflow);

// Centered representative of v mod p, in (-p/2, p/2].
double lift_signed(field::u64 v, field::u64 p);

LccShareSet lcc_encode(const LccParams& p, const std::vector<RMatrix>& blocks);

// Evaluate a matrix expression tree on one share with the mode's machine
// arithmetic. Only integer-coefficient homogeneous trees are supported.
FMatrix lcc_worker_eval(const LccParams& p, const PolyFn& f, const FMatrix& share);

// Interpolate the needed-degree polynomial through the first dtilde+1
// responding workers (by index) and read off the k data evaluations:
// signed lift then delta^degree rescale.
std::vector<RMatrix> lcc_decode(const LccParams& p, const LccEvalSet& evals);

// Streaming building blocks, for callers that synthesize shares and Gram
// results slab by slab. lcc_worker_weights gives the combination weights a
// worker's share applies to the k+t interpolation blocks; lcc_combine forms
// the weighted sum; lcc_gram_accumulate folds acc <- acc + transpose(x)*x in
// the mode's machine arithmetic, where mod-p (and likewise mod-2^bits)
// associativity makes slabbed accumulation equal the one-shot result exactly.
// Reduce-once accumulators stay raw until lcc_finalize_eval applies the
// single mod-p reduction; it is a no-op for modular accumulators.
std::vector<field::u64> lcc_worker_weights(const LccParams& p, std::size_t worker);
FMatrix lcc_combine(const std::vector<const FMatrix*>& blocks,
                    const std::vector<field::u64>& weights, field::u64 p);
void lcc_gram_accumulate(const LccParams& p, FMatrix& acc, const FMatrix& x);
void lcc_finalize_eval(const LccParams& p, FMatrix& acc);

// Worst-case overflow predicate (s_a/delta)*(r/delta)^degree > p/2; raised
// conservatively before actual wraparound can occur.
bool lcc_overflow_predicted(const LccParams& p, const PolyFn::Bounds& fb, double r);

// Word-capacity criterion of the machine model: modular needs p^2 <= 2^bits,
// reduce-once needs (s_a/delta)*p^degree <= 2^bits.
bool lcc_capacity_ok(const LccParams& p, const PolyFn::Bounds& fb);

// Largest prime whose square fits in `bits` bits, the natural modulus for
// the modular mode.
field::u64 lcc_modular_prime(std::uint32_t bits);

} // namespace alcc

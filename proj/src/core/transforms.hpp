#pragma once

#include <vector>

#include "core/cmatrix.hpp"

namespace alcc {

// exp(2*pi*i*j/k) with j reduced mod k so the angle stays in [0, 2*pi).
cplx root_of_unity(std::size_t k, long long j);

std::vector<cplx> roots_of_unity(std::size_t k);

// Forward transform: out[l] = sum_j v[j] * exp(-2*pi*i*j*l/K).
// Direct O(K^2) summation; a radix-2 path takes over when K is a power of two.
std::vector<cplx> dft(const std::vector<cplx>& v);

// Inverse of dft: applies the conjugate kernel and divides by K.
std::vector<cplx> idft(const std::vector<cplx>& v);

// Entrywise DFT across a stack of same-shape matrices: slot l of the result
// holds sum_j in[j] * exp(-2*pi*i*j*l/K) computed per entry position.
std::vector<CMatrix> dft_entrywise(const std::vector<CMatrix>& in);

bool is_power_of_two(std::size_t k);

} // namespace alcc

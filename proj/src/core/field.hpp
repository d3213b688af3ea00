#pragma once

#include <cstddef>
#include <cstdint>

namespace alcc::field {

using u64 = std::uint64_t;

inline u64 addmod(u64 a, u64 b, u64 p) {
    u64 s = a + b;
    return s >= p ? s - p : s;
}

inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

u64 mulmod(u64 a, u64 b, u64 p);
u64 powmod(u64 a, u64 e, u64 p);

// Inverse by Fermat; p must be prime and a nonzero mod p.
u64 invmod(u64 a, u64 p);

bool is_prime(u64 n);

// Largest prime <= bound; fails below 2.
u64 largest_prime_at_most(u64 bound);

// How many products of residues below p fit in a 64-bit accumulator
// before one reduction is needed.
std::size_t lazy_chunk_terms(u64 p);

} // namespace alcc::field

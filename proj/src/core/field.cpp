#include "core/field.hpp"

#include <bit>

#include "core/errors.hpp"

namespace alcc::field {

u64 mulmod(u64 a, u64 b, u64 p) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p);
}

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) {
    a %= p;
    if (a == 0) fail(errc::invalid_argument, "invmod: zero has no inverse");
    return powmod(a, p - 2, p);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // Deterministic witness set for all 64-bit integers.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < r - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

u64 largest_prime_at_most(u64 bound) {
    if (bound < 2) fail(errc::invalid_argument, "largest_prime_at_most: no prime below 2");
    for (u64 n = bound;; --n) {
        if (is_prime(n)) return n;
    }
}

std::size_t lazy_chunk_terms(u64 p) {
    if (p < 2) fail(errc::invalid_argument, "lazy_chunk_terms: modulus must be at least 2");
    const int pb = std::bit_width(p - 1); // residues fit in pb bits
    if (2 * pb >= 64) return 1;
    return std::size_t{1} << (64 - 2 * pb);
}

} // namespace alcc::field

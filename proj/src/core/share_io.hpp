#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/alcc_core.hpp"

namespace alcc {

// File layout: 8-byte magic, little-endian u64 header length, JSON header,
// raw payload. Complex payload is interleaved (re, im) doubles row-major per
// share, in the order the header lists worker indices.
void save_shares(const ShareSet& s, const std::string& path);
ShareSet load_shares(const std::string& path);

// Fixed-point share container: one word per entry, ceil(bits/8) bytes each,
// little-endian, values already reduced into [0, p).
struct LccShareFile {
    std::uint64_t p = 0;
    std::uint32_t bits = 0;
    double delta = 0.0;
    std::string mode; // "modular" | "integer_once"
    std::size_t m = 0, n = 0;
    std::vector<std::pair<std::uint32_t, std::vector<std::uint64_t>>> shares;
};

void save_lcc_shares(const LccShareFile& s, const std::string& path);
LccShareFile load_lcc_shares(const std::string& path);

} // namespace alcc

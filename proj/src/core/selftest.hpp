#pragma once

#include <cstddef>
#include <string>

namespace alcc {

struct SelftestResult {
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::string report; // one PASS/FAIL line per check plus a summary line
    bool ok() const noexcept { return failed == 0; }
};

// Battery of closed-form cases every correct build must satisfy. Cheap enough
// to run on any install; the CLI exposes it as the selftest subcommand.
SelftestResult run_selftest();

} // namespace alcc

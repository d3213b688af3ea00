#pragma once

#include <stdexcept>
#include <string>

namespace alcc {

enum class errc {
    ok = 0,
    invalid_argument,
    config,
    dimension_mismatch,
    data_out_of_range,
    singular_system,
    insufficient_workers,
    duplicate_index,
    io,
    nonfinite,
    runtime,
};

// Library-level failure carrying a stable code for the C boundary.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace alcc

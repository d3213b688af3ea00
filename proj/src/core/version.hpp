#pragma once

namespace alcc {

inline constexpr const char* kLibraryVersion = "1.0.0";

} // namespace alcc

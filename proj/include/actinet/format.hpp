#pragma once

#include <charconv>
#include <string>

namespace actinet {

// Shortest round-trip decimal form. Used for every number written to CSV so
// repeated runs produce byte-identical files.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace actinet

#ifndef HISTFUSE_FORMAT_HPP
#define HISTFUSE_FORMAT_HPP

#include <cstdio>
#include <cstdlib>
#include <string>

namespace histfuse {

// Shortest decimal representation that round-trips to the same double, so
// emitted tables and JSON preserve full precision without trailing noise.
inline std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace histfuse

#endif

#include "aperiodic/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace aperiodic {

std::string format_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round_for_output(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format_real(x).c_str(), nullptr);
}

}  // namespace aperiodic

#include "qrlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "qrlab/errors.hpp"

namespace qrlab {

WilsonInterval wilson99(std::int64_t hits, std::int64_t trials) {
    if (trials <= 0) throw ValidationError("Wilson interval needs trials > 0");
    if (hits < 0 || hits > trials) throw ValidationError("hits out of [0, trials]");

    constexpr double z = 2.5758; // 99% two-sided normal quantile
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = (p + z2 / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;

    WilsonInterval w;
    w.low = std::max(0.0, center - half);
    w.high = std::min(1.0, center + half);
    w.half_width = half;
    return w;
}

} // namespace qrlab

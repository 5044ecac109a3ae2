#pragma once

#include <cstdint>

namespace qrlab {

// Wilson score interval for a binomial proportion at 99% confidence
// (z = 2.5758). Preferred over the normal interval because it stays inside
// [0, 1] and behaves at extreme counts.
struct WilsonInterval {
    double low = 0;
    double high = 0;
    double half_width = 0;
};

WilsonInterval wilson99(std::int64_t hits, std::int64_t trials);

} // namespace qrlab

#pragma once

#include <cstdint>
#include <optional>

#include "qrlab/moments.hpp"
#include "qrlab/rational.hpp"

namespace qrlab {

// A guaranteed lower bound on the tail P(|T| / sqrt(n) > threshold) of the
// character-sum statistic, derived from the 2k-th and 4k-th moments alone.
struct TailBound {
    long double threshold = 0; // deviation size t
    long double floor = 0;     // guaranteed P(|T|/sqrt(n) > t) >= floor
    long double c_k = 0;       // truncation parameter c^k realizing the bound

    // Populated by the small-probability route only.
    long double epsilon = 0;
    long double eta = 0;
    long double lambda = 0;
    long double gap = 0; // E_2k^{1/2k} - threshold
};

// Second-moment route: for delta in (0, 1/2) with delta^{2k} < E_2k,
//   P(|T|/sqrt(n) > delta) >= (E_2k - delta^{2k})^2
//                             / (E_4k - 2 delta^{2k} E_2k + delta^{4k}),
// realized at the truncation c^k = (E_4k - delta^{2k} E_2k)/(E_2k - delta^{2k}).
TailBound markov_tail_bound(const MomentTable& t, long double delta);

// Small-probability route: pick a target tail mass epsilon in (0, 1), set
// c^k = eta / epsilon (eta defaults to epsilon^{1/4}), and solve
//   lambda = (c^{2k} - 2 c^k E_2k + E_4k) / (1 - epsilon),
//   threshold = (c^k - sqrt(lambda))^{1/2k}.
// Then P(|T|/sqrt(n) > threshold) >= epsilon. Requires eta < 2 E_2k and
// lambda < c^{2k}; violations raise ValidationError naming the inequality.
TailBound small_prob_threshold(const MomentTable& t, long double epsilon,
                               std::optional<long double> eta = std::nullopt);

// Limiting constants of the two fixed-k guarantees: the probability floor
// 4 pi^{3/2} e^{-3} 2^{-2k} that the moment-ratio route approaches for large
// n, q, and the deviation coefficient 0.8577 sqrt(k) (a hair below the
// moment-root limit sqrt(2k/e)) used by the threshold-style guarantee.
struct LimitConstants {
    long double probability_floor;
    long double threshold_coefficient;
};
LimitConstants limit_constants(unsigned k);

// Finds the working parameters that realize the probability_floor guarantee
// within slack eps at finite scale: the largest delta in (0, 0.49] whose
// moment-ratio floor is within (eps/3) * (E_4k / E_2k^2) of the limit value
// E_2k^2 / E_4k, and the smallest trial-count threshold N with 2/N < eps/3.
// eps is exact so the N threshold is decided in integers; eps = 1/10 gives
// N = 61, not 60, because 2/60 equals eps/3 instead of beating it.
struct FloorParameters {
    long double delta;
    std::uint64_t min_n; // smallest admissible evaluation-set size N
};
FloorParameters floor_parameters(unsigned k, const Rational& eps, const MomentTable& t);

// Converts an all-polynomials tail floor into a curve-family floor by
// subtracting the failing-vector mass (2 - 1/q)/q, clamped at zero.
long double probability_floor_assembled(long double raw_floor, std::uint64_t q, unsigned k);

} // namespace qrlab

#include "qrlab/bounds.hpp"

#include <cmath>
#include <limits>

#include "qrlab/poly.hpp"

namespace qrlab {

namespace {

void check_table(const MomentTable& t) {
    if (t.k == 0 || t.values.size() < 4 * t.k)
        throw ValidationError("moment table must cover orders 1..4k with k >= 1");
}

} // namespace

TailBound markov_tail_bound(const MomentTable& t, long double delta) {
    check_table(t);
    if (!(delta > 0.0L && delta < 0.5L)) throw ValidationError("delta out of (0, 1/2)");

    const unsigned k = t.k;
    const long double e2k = to_float(t.e2k());
    const long double e4k = to_float(t.e4k());
    const long double d2k = std::pow(delta, 2.0L * k);

    if (d2k >= e2k) throw ValidationError("delta^(2k) >= E_2k");

    TailBound b;
    b.threshold = delta;
    b.c_k = (e4k - d2k * e2k) / (e2k - d2k);
    const long double num = e2k - d2k;
    b.floor = num * num / (e4k - 2.0L * d2k * e2k + d2k * d2k);
    return b;
}

TailBound small_prob_threshold(const MomentTable& t, long double epsilon,
                               std::optional<long double> eta_opt) {
    check_table(t);
    if (!(epsilon > 0.0L && epsilon < 1.0L)) throw ValidationError("epsilon out of (0, 1)");

    const unsigned k = t.k;
    const long double e2k = to_float(t.e2k());
    const long double e4k = to_float(t.e4k());
    const long double eta = eta_opt.value_or(std::pow(epsilon, 0.25L));
    if (!(eta > 0.0L)) throw ValidationError("eta must be > 0");
    if (eta >= 2.0L * e2k) throw ValidationError("eta >= 2*E2k");

    TailBound b;
    b.epsilon = epsilon;
    b.eta = eta;
    b.c_k = eta / epsilon;
    const long double c2k = b.c_k * b.c_k;
    b.lambda = (c2k - 2.0L * b.c_k * e2k + e4k) / (1.0L - epsilon);
    if (b.lambda >= c2k) throw ValidationError("lambda >= c^(2k)");
    b.threshold = std::pow(b.c_k - std::sqrt(b.lambda), 1.0L / (2.0L * k));
    b.floor = epsilon;
    b.gap = std::pow(e2k, 1.0L / (2.0L * k)) - b.threshold;
    return b;
}

LimitConstants limit_constants(unsigned k) {
    if (k == 0) throw ValidationError("k must be >= 1");
    const long double e = std::exp(1.0L);
    const long double pi = std::acos(-1.0L);
    LimitConstants c{};
    c.probability_floor = 4.0L * std::pow(pi, 1.5L) * std::pow(e, -3.0L) *
                          std::pow(2.0L, -2.0L * static_cast<long double>(k));
    c.threshold_coefficient = 0.8577L * std::sqrt(static_cast<long double>(k));
    return c;
}

FloorParameters floor_parameters(unsigned k, const Rational& eps, const MomentTable& t) {
    check_table(t);
    if (t.k != k) throw ValidationError("moment table k does not match requested k");
    if (!(eps > 0 && eps < 1)) throw ValidationError("eps out of (0, 1)");

    const long double e2k = to_float(t.e2k());
    const long double e4k = to_float(t.e4k());
    const long double limit_floor = e2k * e2k / e4k; // delta -> 0 value
    const long double tol = (to_float(eps) / 3.0L) * (e4k / (e2k * e2k));

    // The floor decays monotonically as delta grows, so the admissible set
    // is an interval (0, delta*]; bisect for its right edge.
    auto admissible = [&](long double delta) {
        const long double d2k = std::pow(delta, 2.0L * k);
        if (d2k >= e2k) return false;
        const long double num = e2k - d2k;
        const long double floor = num * num / (e4k - 2.0L * d2k * e2k + d2k * d2k);
        return std::fabs(floor / limit_floor - 1.0L) < tol;
    };

    FloorParameters p{};
    const long double hi_cap = 0.49L;
    if (admissible(hi_cap)) {
        p.delta = hi_cap;
    } else {
        long double lo = 0.0L, hi = hi_cap;
        for (int i = 0; i < 200; ++i) {
            const long double mid = 0.5L * (lo + hi);
            (admissible(mid) ? lo : hi) = mid;
        }
        p.delta = lo;
    }
    if (!(p.delta > 0.0L)) throw ValidationError("no admissible delta for the requested eps");

    // Smallest N with 2/N < eps/3, i.e. N > 6/eps, decided exactly: integer
    // division already floors, and the +1 enforces strictness when 6/eps is
    // itself an integer.
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    const BigInt bound = 6 * denominator(eps) / numerator(eps) + 1;
    if (bound > std::numeric_limits<std::uint64_t>::max())
        throw ValidationError("eps too small: the minimum n overflows");
    p.min_n = bound.convert_to<std::uint64_t>();
    return p;
}

long double probability_floor_assembled(long double raw_floor, std::uint64_t q, unsigned k) {
    if (!(raw_floor >= 0.0L && raw_floor <= 1.0L)) throw ValidationError("raw floor out of [0, 1]");
    const long double correction = to_float(census_failing_rate(q, k)) / static_cast<long double>(q);
    const long double f = raw_floor - correction;
    return f > 0.0L ? f : 0.0L;
}

} // namespace qrlab

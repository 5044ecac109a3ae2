#include "qrlab/moments.hpp"

#include <cmath>
#include <string>

namespace qrlab {

namespace {

constexpr unsigned kMaxJ = 512; // generous cap; keeps the memo table bounded

} // namespace

BigInt composition_weight(unsigned j, unsigned m) {
    if (j > kMaxJ) throw ValidationError("moment order too large");
    if (m > j / 2) return 0; // needs m parts of size >= 2
    static thread_local std::map<std::pair<unsigned, unsigned>, BigInt> memo;
    if (j == 0) return m == 0 ? 1 : 0;
    if (m == 0) return 0;
    auto it = memo.find({j, m});
    if (it != memo.end()) return it->second;
    // Split off the first part: h of the j labels form it (h even >= 2),
    // the rest split into m - 1 parts. This is the multinomial identity
    // multinomial(j; h, rest) = C(j, h) * multinomial(j - h; rest).
    BigInt r = 0;
    for (unsigned h = 2; h <= j; h += 2) r += binomial(j, h) * composition_weight(j - h, m - 1);
    memo[{j, m}] = r;
    return r;
}

BigInt gaussian_moment(unsigned j) {
    if (j % 2 == 1) return 0;
    return factorial(j) / (ipow(2, j / 2) * factorial(j / 2));
}

Rational exact_moment(unsigned j, std::uint64_t n, std::uint64_t q, unsigned k) {
    if (k == 0) throw ValidationError("k must be >= 1");
    if (j == 0 || j > 4 * k)
        throw ValidationError("moment order j must satisfy 1 <= j <= 4k (j=" + std::to_string(j) +
                              ", k=" + std::to_string(k) + ")");
    if (n == 0) throw ValidationError("n must be >= 1");
    if (n > q) throw ValidationError("n cannot exceed q (the set is a subset of the field)");
    if (q < 3) throw ValidationError("q must be an odd prime power >= 3");
    if (j % 2 == 1) return 0;

    const Rational w(q - 1, q); // 1 - 1/q per surviving group
    Rational sum = 0;
    for (unsigned m = 1; m <= j / 2; ++m)
        sum += rational_pow(w, m) * Rational(binomial(n, m)) * Rational(composition_weight(j, m));
    return sum / Rational(ipow(n, j / 2));
}

MomentTable MomentTable::compute(std::uint64_t n, std::uint64_t q, unsigned k) {
    MomentTable t;
    t.n = n;
    t.q = q;
    t.k = k;
    t.values.reserve(4 * k);
    for (unsigned j = 1; j <= 4 * k; ++j) t.values.push_back(exact_moment(j, n, q, k));
    return t;
}

const Rational& MomentTable::at(unsigned j) const {
    if (j == 0 || j > values.size())
        throw ValidationError("moment order " + std::to_string(j) + " not in table (1..4k)");
    return values[j - 1];
}

AsymptoticConstants asymptotic_constants(unsigned k) {
    if (k == 0) throw ValidationError("k must be >= 1");
    const long double e = std::exp(1.0L);
    const long double pi = std::acos(-1.0L);
    AsymptoticConstants c{};
    c.root_bound = std::sqrt(2.0L * k / e);
    c.ratio_bound = std::pow(std::sqrt(2.0L * pi) / e, 3.0L) * std::pow(2.0L, 0.5L - 2.0L * static_cast<long double>(k));
    return c;
}

std::map<unsigned, Rational> brute_force_moments(const Field& F, unsigned k,
                                                 std::span<const elem> S, unsigned j_max,
                                                 unsigned jobs) {
    THist h = exhaustive_t_histogram(F, k, S, Conditioning::AllPolys, jobs);
    std::map<unsigned, Rational> out;
    for (unsigned j = 1; j <= j_max; ++j) out[j] = h.moment(j);
    return out;
}

} // namespace qrlab

#include "qrlab/scan.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "qrlab/poly.hpp"

namespace qrlab {

namespace {

constexpr std::uint64_t kScanBudget = 10'000'000;

} // namespace

void validate_subset(const Field& F, std::span<const elem> S) {
    std::vector<elem> sorted(S.begin(), S.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= F.q())
            throw ValidationError("subset entry " + std::to_string(sorted[i]) + " out of range for q=" +
                                  std::to_string(F.q()));
        if (i > 0 && sorted[i] == sorted[i - 1])
            throw ValidationError("subset entries must be distinct (repeated " + std::to_string(sorted[i]) + ")");
    }
}

std::int64_t THist::hits_above(const Rational& t) const {
    if (t < 0) return included;
    const BigInt num = numerator(t), den = denominator(t);
    const BigInt rhs = num * num * n;
    std::int64_t hits = 0;
    for (std::int64_t T = -n; T <= n; ++T) {
        if (BigInt(T) * T * den * den > rhs) hits += count_t(T);
    }
    return hits;
}

Rational THist::tail_probability(const Rational& t) const {
    if (included == 0) throw ValidationError("empty ensemble");
    return Rational(hits_above(t), included);
}

Rational THist::moment(unsigned j) const {
    if (included == 0) throw ValidationError("empty ensemble");
    BigInt acc = 0;
    for (std::int64_t T = -n; T <= n; ++T) {
        if (counts[static_cast<std::size_t>(T + n)] == 0) continue;
        acc += ipow(T, j) * counts[static_cast<std::size_t>(T + n)];
    }
    if (j % 2 == 1) {
        if (acc != 0) throw InternalError("odd-moment symmetry violated in exhaustive histogram");
        return 0;
    }
    return Rational(acc, BigInt(included) * ipow(n, j / 2));
}

THist exhaustive_t_histogram(const Field& F, unsigned k, std::span<const elem> S,
                             Conditioning cond, unsigned jobs) {
    if (k == 0) throw ValidationError("k must be >= 1");
    validate_subset(F, S);
    const std::size_t n = S.size();
    if (n == 0) throw ValidationError("evaluation set must be nonempty");

    const std::uint64_t q = F.q();
    const unsigned ncoef = 4 * k;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < ncoef; ++i) {
        if (total > kScanBudget / q) throw BudgetError("exhaustive scan requires q^(4k) <= 1e7");
        total *= q;
    }

    const std::int8_t* chi = F.chi_data();
    if (!chi) throw InternalError("exhaustive scan requires a materialized chi table");

    // delta[j][i] = S[i]^j: when coefficient a_j changes by the field element
    // d, the value at S[i] changes by d * S[i]^j. Stepping a_j's index by one
    // (including the wrap q-1 -> 0) gives d = 1 in a prime field, so the
    // common case is a plain row addition; extension fields occasionally see
    // a different d at digit carries and take the multiply path.
    std::vector<std::vector<elem>> delta(ncoef, std::vector<elem>(n));
    for (std::size_t i = 0; i < n; ++i) {
        elem pw = 1;
        for (unsigned j = 0; j < ncoef; ++j) {
            delta[j][i] = pw;
            pw = F.mul(pw, S[i]);
        }
    }

    const unsigned nworkers = std::max(1u, jobs);
    std::vector<THist> parts(nworkers);

    auto worker = [&](unsigned w) {
        const std::uint64_t chunk = total / nworkers, extra = total % nworkers;
        const std::uint64_t lo = chunk * w + std::min<std::uint64_t>(w, extra);
        const std::uint64_t hi = lo + chunk + (w < extra ? 1 : 0);
        if (lo >= hi) return;

        THist& h = parts[w];
        h.n = static_cast<std::int64_t>(n);
        h.counts.assign(2 * n + 1, 0);

        std::vector<elem> digits(ncoef);
        {
            std::uint64_t t = lo;
            for (unsigned j = 0; j < ncoef; ++j) {
                digits[ncoef - 1 - j] = t % q;
                t /= q;
            }
        }
        std::vector<elem> vals(n);
        Poly f;
        f.c.assign(digits.begin(), digits.end());
        while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
        for (std::size_t i = 0; i < n; ++i) vals[i] = evaluate(F, f, S[i]);

        detail::PolyScratch scratch;
        const int lead = static_cast<int>(ncoef) - 1;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            ++h.scanned;
            bool include = true;
            if (cond == Conditioning::Hyperelliptic)
                include = digits[lead] != 0 && detail::squarefree_scan(F, digits.data(), lead, scratch);
            if (include) {
                std::int64_t T = 0;
                for (std::size_t i = 0; i < n; ++i) T += chi[vals[i]];
                ++h.counts[static_cast<std::size_t>(T + static_cast<std::int64_t>(n))];
                ++h.included;
            }
            if (idx + 1 == hi) break;
            for (unsigned j = ncoef; j-- > 0;) {
                const elem old_c = digits[j];
                const elem new_c = old_c + 1 == q ? 0 : old_c + 1;
                digits[j] = new_c;
                const elem d = F.sub(new_c, old_c);
                const std::vector<elem>& row = delta[j];
                if (d == 1) {
                    for (std::size_t i = 0; i < n; ++i) vals[i] = F.add(vals[i], row[i]);
                } else {
                    for (std::size_t i = 0; i < n; ++i) vals[i] = F.add(vals[i], F.mul(d, row[i]));
                }
                if (new_c != 0) break;
            }
        }
    };

    if (nworkers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }

    THist out;
    out.n = static_cast<std::int64_t>(n);
    out.counts.assign(2 * n + 1, 0);
    for (const THist& h : parts) {
        if (h.counts.empty()) continue;
        out.included += h.included;
        out.scanned += h.scanned;
        for (std::size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += h.counts[i];
    }
    return out;
}

} // namespace qrlab

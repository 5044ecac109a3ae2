#include "qrlab/sampler.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

namespace qrlab {

namespace {

constexpr int kRejectionCap = 10'000;
constexpr std::int64_t kMinTrials = 100;
constexpr std::uint64_t kDirectCountBudget = 100'000'000;

// Shared by the Monte Carlo estimators: draws one vector per trial from its
// own stream and reports T into a per-worker histogram. Partitioning the
// trial range across workers cannot change any draw, so the merged counts
// are identical for every jobs value.
std::vector<std::int64_t> mc_t_histogram(const Field& F, unsigned k, std::span<const elem> S,
                                         Conditioning cond, std::int64_t trials,
                                         const RngSpec& rng, unsigned jobs) {
    const std::size_t n = S.size();
    const unsigned nworkers = std::max(1u, jobs);
    std::vector<std::vector<std::int64_t>> parts(nworkers, std::vector<std::int64_t>(2 * n + 1, 0));

    auto worker = [&](unsigned w) {
        const std::int64_t chunk = trials / nworkers, extra = trials % nworkers;
        const std::int64_t lo = chunk * w + std::min<std::int64_t>(w, extra);
        const std::int64_t hi = lo + chunk + (w < static_cast<unsigned>(extra) ? 1 : 0);
        std::vector<std::int64_t>& h = parts[w];
        for (std::int64_t i = lo; i < hi; ++i) {
            SplitMix64 g = rng.stream(static_cast<std::uint64_t>(i));
            const Poly f = cond == Conditioning::Hyperelliptic ? sample_curve(F, k, g)
                                                               : sample_poly(F, k, g);
            std::int64_t T = 0;
            for (elem s : S) T += F.chi(evaluate(F, f, s));
            ++h[static_cast<std::size_t>(T + static_cast<std::int64_t>(n))];
        }
    };

    if (nworkers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }

    std::vector<std::int64_t> out(2 * n + 1, 0);
    for (const auto& h : parts)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += h[i];
    return out;
}

} // namespace

CharProfile char_profile(const Field& F, const Poly& f, std::span<const elem> S) {
    validate_subset(F, S);
    CharProfile p;
    for (elem s : S) {
        const int c = F.chi(evaluate(F, f, s));
        if (c > 0)
            ++p.n_qr;
        else if (c < 0)
            ++p.n_nr;
        else
            ++p.n_zero;
    }
    p.t_sum = p.n_qr - p.n_nr;
    return p;
}

Poly sample_poly(const Field& F, unsigned k, SplitMix64& g) {
    if (k == 0) throw ValidationError("k must be >= 1");
    std::vector<elem> c(4 * k);
    for (elem& v : c) v = g.next_below(F.q());
    while (!c.empty() && c.back() == 0) c.pop_back();
    return Poly{std::move(c)};
}

Poly sample_curve(const Field& F, unsigned k, SplitMix64& g, int* attempts_out) {
    for (int attempt = 1; attempt <= kRejectionCap; ++attempt) {
        Poly f = sample_poly(F, k, g);
        if (is_hyperelliptic(F, f, k)) {
            if (attempts_out) *attempts_out = attempt;
            return f;
        }
    }
    throw InternalError("curve rejection sampler exceeded 1e4 attempts");
}

std::int64_t point_count(const Field& F, const Poly& f, std::span<const elem> S,
                         PointCountMethod method) {
    validate_subset(F, S);
    if (method == PointCountMethod::CharacterSum) {
        std::int64_t count = 0;
        for (elem s : S) count += 1 + F.chi(evaluate(F, f, s));
        return count;
    }
    if (S.size() > kDirectCountBudget / F.q())
        throw BudgetError("direct point count requires |S| * q <= 1e8");
    std::int64_t count = 0;
    for (elem s : S) {
        const elem v = evaluate(F, f, s);
        for (elem y = 0; y < F.q(); ++y)
            if (F.mul(y, y) == v) ++count;
    }
    return count;
}

std::int64_t discrepancy(const Field& F, const Poly& f, std::span<const elem> S) {
    const std::int64_t c = point_count(F, f, S, PointCountMethod::CharacterSum);
    const std::int64_t n = static_cast<std::int64_t>(S.size());
    return c >= n ? c - n : n - c;
}

TailEstimate tail_estimate(const Field& F, unsigned k, std::span<const elem> S,
                           const Rational& t, Conditioning cond, EstimateMode mode,
                           std::int64_t trials, const RngSpec& rng, unsigned jobs) {
    if (k == 0) throw ValidationError("k must be >= 1");
    validate_subset(F, S);
    if (S.empty()) throw ValidationError("evaluation set must be nonempty");

    TailEstimate est;
    est.mode = mode;
    est.conditioning = cond;
    est.threshold = t;

    if (mode == EstimateMode::Exhaustive) {
        const THist h = exhaustive_t_histogram(F, k, S, cond, jobs);
        est.hits = h.hits_above(t);
        est.trials = h.included;
        est.p_hat = h.tail_probability(t);
        return est;
    }

    if (trials < kMinTrials) throw ValidationError("Monte Carlo estimation needs trials >= 100");
    const std::vector<std::int64_t> hist = mc_t_histogram(F, k, S, cond, trials, rng, jobs);

    const std::int64_t n = static_cast<std::int64_t>(S.size());
    THist h;
    h.n = n;
    h.counts = hist;
    h.included = trials;
    h.scanned = trials;
    est.hits = h.hits_above(t);
    est.trials = trials;
    est.p_hat = Rational(est.hits, est.trials);
    est.ci = wilson99(est.hits, est.trials);
    return est;
}

std::map<std::int64_t, std::int64_t> distribution_histogram(const Field& F, unsigned k,
                                                            std::span<const elem> S,
                                                            Conditioning cond, EstimateMode mode,
                                                            std::int64_t trials, const RngSpec& rng,
                                                            unsigned jobs) {
    if (k == 0) throw ValidationError("k must be >= 1");
    validate_subset(F, S);
    if (S.empty()) throw ValidationError("evaluation set must be nonempty");

    const std::int64_t n = static_cast<std::int64_t>(S.size());
    std::vector<std::int64_t> counts;
    if (mode == EstimateMode::Exhaustive) {
        counts = exhaustive_t_histogram(F, k, S, cond, jobs).counts;
    } else {
        if (trials < kMinTrials) throw ValidationError("Monte Carlo estimation needs trials >= 100");
        counts = mc_t_histogram(F, k, S, cond, trials, rng, jobs);
    }

    std::map<std::int64_t, std::int64_t> out;
    for (std::int64_t T = -n; T <= n; ++T) {
        const std::int64_t c = counts[static_cast<std::size_t>(T + n)];
        if (c != 0) out[T] = c;
    }
    return out;
}

std::vector<elem> seeded_subset(const Field& F, std::uint64_t n, const RngSpec& rng) {
    if (n == 0) throw ValidationError("subset size must be >= 1");
    if (n > F.q()) throw ValidationError("subset size exceeds field size");

    SplitMix64 g = rng.stream(0);
    std::vector<elem> out;
    out.reserve(n);
    if (F.q() <= (1ull << 26)) {
        std::vector<bool> seen(F.q(), false);
        while (out.size() < n) {
            const elem v = g.next_below(F.q());
            if (!seen[v]) {
                seen[v] = true;
                out.push_back(v);
            }
        }
    } else {
        std::unordered_set<elem> seen;
        while (out.size() < n) {
            const elem v = g.next_below(F.q());
            if (seen.insert(v).second) out.push_back(v);
        }
    }
    return out;
}

} // namespace qrlab

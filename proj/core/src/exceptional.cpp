#include "qrlab/exceptional.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "qrlab/scan.hpp"

namespace qrlab {

namespace {

constexpr std::uint64_t kSampleBudget = 1'000'000'000; // p * trials cap for audits

void require_prime_field(const Field& F) {
    if (F.rep() != FieldRep::PrimeModular)
        throw ValidationError("cubic-family operations are defined over prime fields");
}

void require_family_budget(std::uint64_t p) {
    if (p > 1000) throw BudgetError("cubic-family pass requires p^3 <= 1e9"); // 1000^3 = 1e9
}

// chi doubled to length 2p: a cyclic shift of the chi row is a contiguous
// read at the shift offset.
std::vector<std::int16_t> doubled_chi(const Field& F) {
    const std::int8_t* chi = F.chi_data();
    if (!chi) throw InternalError("cubic-family kernels need a materialized chi table");
    const std::uint64_t p = F.q();
    std::vector<std::int16_t> chi2(2 * p);
    for (std::uint64_t i = 0; i < p; ++i) chi2[i] = chi2[i + p] = chi[i];
    return chi2;
}

// Discriminant of x^3 + a x^2 + b x + c viewed as a quadratic in c:
// -27 c^2 + (18ab - 4a^3) c + (a^2 b^2 - 4 b^3). Walking c with the two
// running differences costs two modular additions per step.
struct DiscWalk {
    std::uint64_t p;
    std::uint64_t d, d1, d2;

    DiscWalk(const Field& F, elem a, elem b) : p(F.q()) {
        const elem a2 = F.mul(a, a), b2 = F.mul(b, b);
        const elem lead = F.neg(F.from_int(27));
        const elem lin = F.sub(F.mul(F.from_int(18), F.mul(a, b)), F.mul(F.from_int(4), F.mul(a2, a)));
        d = F.sub(F.mul(a2, b2), F.mul(F.from_int(4), F.mul(b2, b))); // value at c = 0
        d1 = F.add(lead, lin);                                       // d(c+1) - d(c) at c = 0
        d2 = F.add(lead, lead);                                      // constant second difference
    }

    bool separable() const { return d != 0; }

    void step() {
        d += d1;
        if (d >= p) d -= p;
        d1 += d2;
        if (d1 >= p) d1 -= p;
    }
};

// Counts cubics whose rotated character sums over S clear |T| >= threshold,
// using precomputed squarefree bytes when provided and the discriminant walk
// otherwise. Single-threaded; callers parallelize over samples or rows.
std::int64_t subset_degree_kernel(const Field& F, const std::vector<std::int16_t>& chi2,
                                  std::span<const elem> S, std::int64_t threshold,
                                  const std::uint8_t* sf_mask) {
    const std::uint64_t p = F.q();
    const std::size_t n = S.size();
    std::vector<std::uint64_t> s1(n), s2(n), s3(n), base(n);
    for (std::size_t i = 0; i < n; ++i) {
        s1[i] = S[i];
        s2[i] = F.mul(S[i], S[i]);
        s3[i] = F.mul(s2[i], S[i]);
    }

    const std::int16_t thr = static_cast<std::int16_t>(threshold);
    std::vector<std::int16_t> acc(p);
    std::int64_t count = 0;
    for (std::uint64_t a = 0; a < p; ++a) {
        for (std::size_t i = 0; i < n; ++i) base[i] = (s3[i] + a * s2[i]) % p;
        for (std::uint64_t b = 0; b < p; ++b) {
            if (b > 0) {
                // f(s) gains s when b steps by one.
                for (std::size_t i = 0; i < n; ++i) {
                    base[i] += s1[i];
                    if (base[i] >= p) base[i] -= p;
                }
            }
            std::fill(acc.begin(), acc.end(), std::int16_t{0});
            std::int16_t* __restrict__ ap = acc.data();
            for (std::size_t i = 0; i < n; ++i) {
                const std::int16_t* __restrict__ row = chi2.data() + base[i];
                for (std::uint64_t c = 0; c < p; ++c) ap[c] += row[c];
            }
            if (sf_mask) {
                const std::uint8_t* __restrict__ mrow = sf_mask + (a * p + b) * p;
                for (std::uint64_t c = 0; c < p; ++c) {
                    if (mrow[c] && (ap[c] >= thr || -ap[c] >= thr)) ++count;
                }
            } else {
                DiscWalk dw(F, a, b);
                for (std::uint64_t c = 0; c < p; ++c) {
                    if (dw.d != 0 && (ap[c] >= thr || -ap[c] >= thr)) ++count;
                    dw.step();
                }
            }
        }
    }
    return count;
}

// One squarefree byte per (a, b, c), laid out as (a * p + b) * p + c.
std::vector<std::uint8_t> squarefree_mask(const Field& F, unsigned jobs) {
    const std::uint64_t p = F.q();
    std::vector<std::uint8_t> mask(p * p * p);
    const unsigned nworkers = std::max(1u, jobs);
    auto worker = [&](unsigned w) {
        for (std::uint64_t a = w; a < p; a += nworkers) {
            for (std::uint64_t b = 0; b < p; ++b) {
                std::uint8_t* row = mask.data() + (a * p + b) * p;
                DiscWalk dw(F, a, b);
                for (std::uint64_t c = 0; c < p; ++c) {
                    row[c] = dw.d != 0;
                    dw.step();
                }
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
    return mask;
}

std::vector<elem> subset_from_stream(const Field& F, unsigned n, SplitMix64& g) {
    std::vector<elem> out;
    out.reserve(n);
    std::vector<bool> seen(F.q(), false);
    while (out.size() < n) {
        const elem v = g.next_below(F.q());
        if (!seen[v]) {
            seen[v] = true;
            out.push_back(v);
        }
    }
    return out;
}

} // namespace

BigInt cubic_family_size(std::uint64_t p) {
    if (p < 3) throw ValidationError("p must be an odd prime >= 3");
    const BigInt bp = p;
    return bp * bp * (bp - 1);
}

bool is_separable_cubic(const Field& F, elem a, elem b, elem c) {
    require_prime_field(F);
    const elem a2 = F.mul(a, a), b2 = F.mul(b, b), c2 = F.mul(c, c);
    elem d = F.mul(F.from_int(18), F.mul(a, F.mul(b, c)));
    d = F.sub(d, F.mul(F.from_int(4), F.mul(F.mul(a2, a), c)));
    d = F.add(d, F.mul(a2, b2));
    d = F.sub(d, F.mul(F.from_int(4), F.mul(b2, b)));
    d = F.sub(d, F.mul(F.from_int(27), c2));
    return d != 0;
}

void for_each_cubic(const Field& F, const std::function<void(elem, elem, elem)>& fn) {
    require_prime_field(F);
    const std::uint64_t p = F.q();
    require_family_budget(p);
    for (elem a = 0; a < p; ++a) {
        for (elem b = 0; b < p; ++b) {
            DiscWalk dw(F, a, b);
            for (elem c = 0; c < p; ++c) {
                if (dw.d != 0) fn(a, b, c);
                dw.step();
            }
        }
    }
}

CubicProfile cubic_profile(const Field& F, const Poly& f) {
    require_prime_field(F);
    if (f.degree() != 3 || f.c[3] != 1)
        throw ValidationError("profile requires a monic cubic");
    if (!is_separable_cubic(F, f.coeff(2), f.coeff(1), f.coeff(0)))
        throw ValidationError("profile requires a separable cubic");

    CubicProfile prof;
    for (elem x = 0; x < F.q(); ++x) {
        const int c = F.chi(evaluate(F, f, x));
        if (c > 0)
            ++prof.n_qr;
        else if (c < 0)
            ++prof.n_nr;
        else
            ++prof.n_zero;
    }
    if (prof.n_zero > 3) throw InternalError("cubic with more than three roots");
    return prof;
}

std::int64_t ProfileCensus::count(unsigned z, std::int64_t s) const {
    if (z > 3 || s < -static_cast<std::int64_t>(p) || s > static_cast<std::int64_t>(p))
        throw ValidationError("profile bucket out of range");
    return counts[z * (2 * p + 1) + static_cast<std::size_t>(s + static_cast<std::int64_t>(p))];
}

CubicProfile ProfileCensus::profile_at(unsigned z, std::int64_t s) const {
    const std::int64_t nz = static_cast<std::int64_t>(p) - static_cast<std::int64_t>(z);
    if (z > 3 || (nz + s) % 2 != 0 || nz + s < 0 || nz - s < 0)
        throw ValidationError("no profile has this (z, s) pair");
    CubicProfile prof;
    prof.n_qr = (nz + s) / 2;
    prof.n_nr = (nz - s) / 2;
    prof.n_zero = z;
    return prof;
}

BigInt ProfileCensus::total_exact_degree(unsigned n, unsigned m) const {
    BigInt total = 0;
    for (unsigned z = 0; z <= 3; ++z) {
        for (std::int64_t s = -static_cast<std::int64_t>(p); s <= static_cast<std::int64_t>(p); ++s) {
            const std::int64_t c = count(z, s);
            if (c == 0) continue;
            total += BigInt(c) * exact_degree(profile_at(z, s), n, m);
        }
    }
    return total;
}

BigInt ProfileCensus::total_degree_lower_bound(unsigned n, unsigned m) const {
    BigInt total = 0;
    for (unsigned z = 0; z <= 3; ++z) {
        for (std::int64_t s = -static_cast<std::int64_t>(p); s <= static_cast<std::int64_t>(p); ++s) {
            const std::int64_t c = count(z, s);
            if (c == 0) continue;
            total += BigInt(c) * degree_lower_bound(profile_at(z, s), n, m);
        }
    }
    return total;
}

ProfileCensus profile_census(const Field& F, unsigned jobs) {
    require_prime_field(F);
    const std::uint64_t p = F.q();
    require_family_budget(p);
    const std::vector<std::int16_t> chi2 = doubled_chi(F);

    std::vector<elem> x2(p), x3(p);
    for (elem x = 0; x < p; ++x) {
        x2[x] = F.mul(x, x);
        x3[x] = F.mul(x2[x], x);
    }

    const std::size_t nbuckets = 4 * (2 * p + 1);
    const unsigned nworkers = std::max(1u, jobs);
    std::vector<std::vector<std::int64_t>> parts(nworkers, std::vector<std::int64_t>(nbuckets, 0));

    auto worker = [&](unsigned w) {
        std::vector<std::int64_t>& bucket = parts[w];
        std::vector<std::uint64_t> base(p);
        std::vector<std::int16_t> acc(p);
        std::vector<std::uint8_t> zh(p);
        for (std::uint64_t a = w; a < p; a += nworkers) {
            for (std::uint64_t x = 0; x < p; ++x) base[x] = (x3[x] + a * x2[x]) % p;
            for (std::uint64_t b = 0; b < p; ++b) {
                if (b > 0) {
                    for (std::uint64_t x = 0; x < p; ++x) {
                        base[x] += x;
                        if (base[x] >= p) base[x] -= p;
                    }
                }
                std::fill(acc.begin(), acc.end(), std::int16_t{0});
                std::fill(zh.begin(), zh.end(), std::uint8_t{0});
                std::int16_t* __restrict__ ap = acc.data();
                for (std::uint64_t x = 0; x < p; ++x) {
                    const std::int16_t* __restrict__ row = chi2.data() + base[x];
                    for (std::uint64_t c = 0; c < p; ++c) ap[c] += row[c];
                    // x is a root of x^3 + ax^2 + bx + c exactly at c = -base.
                    ++zh[base[x] == 0 ? 0 : p - base[x]];
                }
                DiscWalk dw(F, a, b);
                for (std::uint64_t c = 0; c < p; ++c) {
                    if (dw.d != 0)
                        ++bucket[zh[c] * (2 * p + 1) + static_cast<std::size_t>(acc[c] + static_cast<std::int64_t>(p))];
                    dw.step();
                }
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

    ProfileCensus pc;
    pc.p = p;
    pc.counts.assign(nbuckets, 0);
    for (const auto& part : parts)
        for (std::size_t i = 0; i < nbuckets; ++i) pc.counts[i] += part[i];
    for (std::int64_t c : pc.counts) pc.total += c;
    return pc;
}

namespace {

void audit_bucket(std::uint64_t p, unsigned z, std::int64_t s, HasseAudit& a) {
    const std::int64_t abs_s = s < 0 ? -s : s;
    if (abs_s * abs_s > 4 * static_cast<std::int64_t>(p))
        throw InternalError("character-sum bound violated: |s| > 2 sqrt(p) at p=" + std::to_string(p));
    const std::int64_t excess2 = abs_s - static_cast<std::int64_t>(z); // 2 * majority_excess
    if (excess2 > 0 && excess2 * excess2 > 4 * static_cast<std::int64_t>(p))
        throw InternalError("majority-excess bound violated at p=" + std::to_string(p));
    const double sp = std::sqrt(static_cast<double>(p));
    a.max_char_sum_ratio = std::max(a.max_char_sum_ratio, static_cast<double>(abs_s) / (2.0 * sp));
    a.max_majority_ratio = std::max(a.max_majority_ratio, static_cast<double>(excess2) / (2.0 * sp));
}

} // namespace

HasseAudit hasse_audit_all(const Field& F, unsigned jobs) {
    const ProfileCensus pc = profile_census(F, jobs);
    HasseAudit a;
    a.audited = pc.total;
    a.max_majority_ratio = -1.0;
    for (unsigned z = 0; z <= 3; ++z) {
        for (std::int64_t s = -static_cast<std::int64_t>(pc.p); s <= static_cast<std::int64_t>(pc.p); ++s) {
            if (pc.count(z, s) != 0) audit_bucket(pc.p, z, s, a);
        }
    }
    return a;
}

HasseAudit hasse_audit_sample(const Field& F, std::int64_t trials, const RngSpec& rng,
                              unsigned jobs) {
    require_prime_field(F);
    const std::uint64_t p = F.q();
    if (trials < 1) throw ValidationError("audit needs trials >= 1");
    if (static_cast<std::uint64_t>(trials) > kSampleBudget / p)
        throw BudgetError("sampled audit requires trials * p <= 1e9");

    const unsigned nworkers = std::max(1u, jobs);
    std::vector<HasseAudit> parts(nworkers);

    auto worker = [&](unsigned w) {
        HasseAudit& a = parts[w];
        a.max_majority_ratio = -1.0;
        const std::int64_t chunk = trials / nworkers, extra = trials % nworkers;
        const std::int64_t lo = chunk * w + std::min<std::int64_t>(w, extra);
        const std::int64_t hi = lo + chunk + (w < static_cast<unsigned>(extra) ? 1 : 0);
        for (std::int64_t i = lo; i < hi; ++i) {
            SplitMix64 g = rng.stream(static_cast<std::uint64_t>(i));
            elem ca = 0, cb = 0, cc = 0;
            int attempts = 0;
            do {
                if (++attempts > 10'000) throw InternalError("separable-cubic rejection exceeded 1e4 attempts");
                ca = g.next_below(p);
                cb = g.next_below(p);
                cc = g.next_below(p);
            } while (!is_separable_cubic(F, ca, cb, cc));

            unsigned z = 0;
            std::int64_t s = 0;
            for (elem x = 0; x < p; ++x) {
                const elem v = F.add(F.mul(F.add(F.mul(F.add(x, ca), x), cb), x), cc);
                const int c = F.chi(v);
                s += c;
                if (c == 0) ++z;
            }
            ++a.audited;
            audit_bucket(p, z, s, a);
        }
    };

    if (nworkers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }

    HasseAudit a;
    a.max_majority_ratio = -1.0;
    for (const HasseAudit& part : parts) {
        a.audited += part.audited;
        a.max_char_sum_ratio = std::max(a.max_char_sum_ratio, part.max_char_sum_ratio);
        a.max_majority_ratio = std::max(a.max_majority_ratio, part.max_majority_ratio);
    }
    return a;
}

BigInt exact_degree(const CubicProfile& profile, unsigned n, unsigned m) {
    if (profile.n_qr < 0 || profile.n_nr < 0 || profile.n_zero < 0)
        throw ValidationError("malformed profile");
    const std::uint64_t p = static_cast<std::uint64_t>(profile.n_qr + profile.n_nr + profile.n_zero);
    if (n > p) throw ValidationError("n cannot exceed p");
    if (2ull * m > n) throw ValidationError("m must satisfy 2m <= n");

    const std::int64_t need = static_cast<std::int64_t>(n) - 2 * static_cast<std::int64_t>(m);
    BigInt total = 0;
    for (unsigned a = 0; a <= n && a <= profile.n_qr; ++a) {
        for (unsigned b = 0; a + b <= n && b <= profile.n_nr; ++b) {
            const std::int64_t diff = static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b);
            if (diff < need && -diff < need) continue;
            const unsigned c = n - a - b;
            if (c > profile.n_zero) continue;
            total += binomial(profile.n_qr, a) * binomial(profile.n_nr, b) * binomial(profile.n_zero, c);
        }
    }
    return total;
}

BigInt degree_lower_bound(const CubicProfile& profile, unsigned n, unsigned m) {
    if (profile.n_qr < 0 || profile.n_nr < 0 || profile.n_zero < 0)
        throw ValidationError("malformed profile");
    const std::uint64_t p = static_cast<std::uint64_t>(profile.n_qr + profile.n_nr + profile.n_zero);
    if (n > p) throw ValidationError("n cannot exceed p");
    if (2ull * m > n) throw ValidationError("m must satisfy 2m <= n");

    const std::uint64_t major = static_cast<std::uint64_t>(std::max(profile.n_qr, profile.n_nr));
    return binomial(p - major, m) * binomial(major, n - m);
}

std::int64_t subset_degree(const Field& F, std::span<const elem> S, unsigned m) {
    require_prime_field(F);
    validate_subset(F, S);
    const std::uint64_t p = F.q();
    require_family_budget(p);
    if (2ull * m > S.size()) throw ValidationError("m must satisfy 2m <= n");

    if (S.empty()) return static_cast<std::int64_t>(p * p * (p - 1));
    const std::vector<std::int16_t> chi2 = doubled_chi(F);
    const std::int64_t threshold = static_cast<std::int64_t>(S.size()) - 2 * static_cast<std::int64_t>(m);
    return subset_degree_kernel(F, chi2, S, threshold, nullptr);
}

Rational all_residue_event_probability(const Field& F, std::span<const elem> S) {
    return Rational(subset_degree(F, S, 0), cubic_family_size(F.q()));
}

BetaEstimate beta_estimate(const Field& F, unsigned n, unsigned m, const Rational& alpha,
                           std::int64_t samples, const RngSpec& rng, unsigned jobs) {
    require_prime_field(F);
    const std::uint64_t p = F.q();
    if (n == 0 || n > p) throw ValidationError("need 1 <= n <= p");
    if (2ull * m > n) throw ValidationError("m must satisfy 2m <= n");
    const std::int64_t spread = static_cast<std::int64_t>(n) - 2 * static_cast<std::int64_t>(m);
    if (spread * spread <= static_cast<std::int64_t>(n))
        throw ValidationError("graph regime needs n - 2m > sqrt(n)");
    if (samples < 100) throw ValidationError("beta estimation needs samples >= 100");
    if (p > 316) throw BudgetError("beta estimation requires p^4 <= 1e10"); // 316^4 < 1e10 < 317^4

    const std::vector<std::int16_t> chi2 = doubled_chi(F);
    const std::vector<std::uint8_t> mask = squarefree_mask(F, jobs);

    // Qualification is decided exactly: degree * den(alpha) >= num(alpha) * #family.
    const BigInt family = cubic_family_size(p);
    const BigInt lhs_scale = denominator(alpha);
    const BigInt rhs = numerator(alpha) * family;

    const unsigned nworkers = std::max(1u, jobs);
    std::vector<std::int64_t> quals(nworkers, 0);
    auto worker = [&](unsigned w) {
        const std::int64_t chunk = samples / nworkers, extra = samples % nworkers;
        const std::int64_t lo = chunk * w + std::min<std::int64_t>(w, extra);
        const std::int64_t hi = lo + chunk + (w < static_cast<unsigned>(extra) ? 1 : 0);
        std::int64_t count = 0;
        for (std::int64_t i = lo; i < hi; ++i) {
            SplitMix64 g = rng.stream(static_cast<std::uint64_t>(i));
            const std::vector<elem> S = subset_from_stream(F, n, g);
            const std::int64_t deg = subset_degree_kernel(F, chi2, S, spread, mask.data());
            if (BigInt(deg) * lhs_scale >= rhs) ++count;
        }
        quals[w] = count;
    };

    if (nworkers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }

    BetaEstimate est;
    est.samples = samples;
    for (std::int64_t qc : quals) est.qualifying += qc;
    est.beta_hat = Rational(est.qualifying, est.samples);
    est.ci = wilson99(est.qualifying, est.samples);
    est.alpha = alpha;
    // Smallest integer degree that qualifies: ceil(alpha * family).
    BigInt t = numerator(alpha) * family;
    BigInt den = denominator(alpha);
    est.degree_threshold = t / den + (t % den != 0 && t > 0 ? 1 : 0);
    return est;
}

Rational beta_lower_bound(unsigned n, unsigned m, const Rational& alpha) {
    if (n == 0) throw ValidationError("need n >= 1");
    if (2ull * m > n) throw ValidationError("m must satisfy 2m <= n");
    const Rational mass = Rational(binomial(n, m), ipow(2, n));
    if (!(alpha > 0) || alpha >= mass)
        throw ValidationError("alpha must lie in (0, C(n,m)/2^n) for a nonvacuous bound");
    return (mass - alpha) / (1 - alpha);
}

} // namespace qrlab

#include "qrlab/poly.hpp"

#include <string>
#include <thread>

namespace qrlab {

namespace {

constexpr std::int64_t kEnumBudget = 10'000'000;

Poly normalized(std::vector<elem> c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
    return Poly{std::move(c)};
}

// q^count if it stays within limit, otherwise 0.
std::uint64_t checked_pow(std::uint64_t q, unsigned count, std::uint64_t limit) {
    std::uint64_t total = 1;
    for (unsigned i = 0; i < count; ++i) {
        if (total > limit / q) return 0;
        total *= q;
    }
    return total;
}

} // namespace

Poly make_poly(const Field& F, std::span<const elem> coeffs) {
    for (elem v : coeffs) {
        if (v >= F.q())
            throw ValidationError("coefficient index " + std::to_string(v) + " out of range for q=" +
                                  std::to_string(F.q()));
    }
    return normalized(std::vector<elem>(coeffs.begin(), coeffs.end()));
}

elem evaluate(const Field& F, const Poly& f, elem x) {
    elem r = 0;
    for (std::size_t j = f.c.size(); j-- > 0;) r = F.add(F.mul(r, x), f.c[j]);
    return r;
}

Poly derivative(const Field& F, const Poly& f) {
    if (f.c.size() <= 1) return Poly{};
    std::vector<elem> d(f.c.size() - 1);
    for (std::size_t j = 1; j < f.c.size(); ++j)
        d[j - 1] = F.mul(F.from_int(static_cast<std::int64_t>(j)), f.c[j]);
    return normalized(std::move(d));
}

std::pair<Poly, Poly> poly_divmod(const Field& F, const Poly& a, const Poly& b) {
    if (b.is_zero()) throw ValidationError("polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly{}, a};
    std::vector<elem> rem = a.c;
    std::vector<elem> quo(a.degree() - b.degree() + 1, 0);
    const elem lead_inv = F.inv(b.c.back());
    for (int j = a.degree(); j >= b.degree(); --j) {
        elem coef = F.mul(rem[j], lead_inv);
        if (coef == 0) continue;
        quo[j - b.degree()] = coef;
        for (int i = 0; i <= b.degree(); ++i)
            rem[j - b.degree() + i] = F.sub(rem[j - b.degree() + i], F.mul(coef, b.c[i]));
    }
    return {normalized(std::move(quo)), normalized(std::move(rem))};
}

Poly poly_mul(const Field& F, const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly{};
    std::vector<elem> c(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            c[i + j] = F.add(c[i + j], F.mul(a.c[i], b.c[j]));
    return normalized(std::move(c));
}

Poly poly_gcd(const Field& F, Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = poly_divmod(F, a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    const elem lead_inv = F.inv(a.c.back());
    for (elem& v : a.c) v = F.mul(v, lead_inv);
    return a;
}

bool is_squarefree(const Field& F, const Poly& f) {
    if (f.is_zero()) throw ValidationError("squarefree test on the zero polynomial");
    if (f.degree() == 0) return true;
    Poly d = derivative(F, f);
    if (d.is_zero()) return false; // p-th power
    return poly_gcd(F, f, d).degree() == 0;
}

bool is_hyperelliptic(const Field& F, const Poly& f, unsigned k) {
    if (k == 0) throw ValidationError("k must be >= 1");
    if (f.degree() != static_cast<int>(4 * k - 1)) return false;
    return is_squarefree(F, f);
}

namespace detail {

bool squarefree_scan(const Field& F, const elem* c, int deg, PolyScratch& s) {
    if (deg <= 0) return true;

    // Derivative; a vanishing one means a p-th power (not squarefree).
    int db = -1;
    for (int j = 1; j <= deg; ++j) {
        elem v = F.mul(F.from_int(j), c[j]);
        s.b[j - 1] = v;
        if (v != 0) db = j - 1;
    }
    if (db < 0) return false;

    for (int j = 0; j <= deg; ++j) s.a[j] = c[j];
    int da = deg;
    elem* A = s.a.data();
    elem* B = s.b.data();

    // Cross-multiplied remainder steps: A <- lead(B)*A - lead(A)*x^shift*B
    // kills A's leading term while only rescaling the rest, so the degree
    // sequence (hence the gcd degree) matches the monic Euclidean one.
    while (db > 0) {
        while (da >= db) {
            const elem la = A[da], lb = B[db];
            const int shift = da - db;
            for (int j = 0; j < shift; ++j) A[j] = F.mul(A[j], lb);
            for (int j = shift; j < da; ++j)
                A[j] = F.sub(F.mul(A[j], lb), F.mul(la, B[j - shift]));
            --da;
            while (da >= 0 && A[da] == 0) --da;
            if (da < 0) return false; // B divides A: gcd has positive degree
        }
        std::swap(A, B);
        std::swap(da, db);
    }
    return true; // remainder hit a nonzero constant
}

} // namespace detail

Rational census_failing_rate(std::uint64_t q, unsigned k) {
    if (k == 0) throw ValidationError("k must be >= 1");
    if (q < 3) throw ValidationError("q must be an odd prime power >= 3");
    return Rational(2) - Rational(1, q);
}

CensusReport hyperelliptic_census(const Field& F, unsigned k) {
    if (k == 0) throw ValidationError("k must be >= 1");
    CensusReport r;
    r.q = F.q();
    r.k = k;
    const BigInt q = F.q();
    r.total_count = ipow(q, 4 * k);
    // Valid vectors factor as (leading coefficient) x (squarefree lower part):
    // q-1 choices of nonzero lead times q^{4k-1} - q^{4k-2} squarefree counts.
    r.valid_count = (q - 1) * (ipow(q, 4 * k - 1) - ipow(q, 4 * k - 2));
    r.failing_count = r.total_count - r.valid_count;
    r.failing_fraction = Rational(r.failing_count, r.total_count);
    r.scaled_failing_rate = r.failing_fraction * q;
    r.enumerated = false;
    return r;
}

CensusReport hyperelliptic_census_enumerate(const Field& F, unsigned k, unsigned jobs) {
    if (k == 0) throw ValidationError("k must be >= 1");
    const unsigned ncoef = 4 * k;
    const std::uint64_t total = checked_pow(F.q(), ncoef, kEnumBudget);
    if (total == 0)
        throw BudgetError("census enumeration requires q^(4k) <= 1e7");

    const unsigned nworkers = std::max(1u, jobs);
    std::vector<std::uint64_t> valid(nworkers, 0);
    auto worker = [&](unsigned w) {
        const std::uint64_t lo = total / nworkers * w + std::min<std::uint64_t>(w, total % nworkers);
        const std::uint64_t hi = lo + total / nworkers + (w < total % nworkers ? 1 : 0);
        detail::PolyScratch scratch;
        std::vector<elem> digits(ncoef, 0);
        // digits[j] = coefficient of x^j; the leading digit varies fastest.
        {
            std::uint64_t t = lo;
            for (unsigned j = 0; j < ncoef; ++j) {
                digits[ncoef - 1 - j] = t % F.q();
                t /= F.q();
            }
        }
        std::uint64_t count = 0;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            if (digits[ncoef - 1] != 0 &&
                detail::squarefree_scan(F, digits.data(), static_cast<int>(ncoef) - 1, scratch))
                ++count;
            for (unsigned j = ncoef; j-- > 0;) {
                if (++digits[j] < F.q()) break;
                digits[j] = 0;
            }
        }
        valid[w] = count;
    };

    if (nworkers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }

    std::uint64_t total_valid = 0;
    for (std::uint64_t v : valid) total_valid += v;

    // Report the enumerated counts as found; comparing them against the
    // closed form is the caller's (and the test suite's) job.
    CensusReport r;
    r.q = F.q();
    r.k = k;
    r.total_count = total;
    r.valid_count = total_valid;
    r.failing_count = r.total_count - r.valid_count;
    r.failing_fraction = Rational(r.failing_count, r.total_count);
    r.scaled_failing_rate = r.failing_fraction * F.q();
    r.enumerated = true;
    return r;
}

void enumerate_polys(const Field& F, unsigned max_deg,
                     const std::function<void(const Poly&)>& fn,
                     bool override_budget) {
    const std::uint64_t total = checked_pow(F.q(), max_deg + 1, override_budget ? UINT64_MAX / 2 : kEnumBudget);
    if (total == 0) throw BudgetError("enumeration over q^(max_deg+1) vectors exceeds the 1e7 budget");

    std::vector<elem> digits(max_deg + 1, 0); // digits[j] = coefficient of x^j
    Poly f;
    for (std::uint64_t idx = 0;; ++idx) {
        f.c.assign(digits.begin(), digits.end());
        while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
        fn(f);
        if (idx + 1 == total) break;
        for (unsigned j = max_deg + 1; j-- > 0;) {
            if (++digits[j] < F.q()) break;
            digits[j] = 0;
        }
    }
}

} // namespace qrlab

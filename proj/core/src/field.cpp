#include "qrlab/field.hpp"

#include <algorithm>
#include <string>

namespace qrlab {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t mod) {
    std::uint64_t r = 1 % mod;
    a %= mod;
    while (e) {
        if (e & 1) r = mulmod(r, a, mod);
        a = mulmod(a, a, mod);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // Deterministic Miller-Rabin witness set for the full uint64 range.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

Field Field::make(std::uint64_t p, unsigned m) {
    if (m == 0) throw ValidationError("extension degree must be >= 1");
    if (p == 2) throw ValidationError("characteristic 2 is not supported: p must be an odd prime");
    if (!is_prime_u64(p)) throw ValidationError("p = " + std::to_string(p) + " is not prime");

    Field F;
    F.p_ = p;
    F.m_ = m;

    if (m == 1) {
        if (p >= kPrimeMaxP) throw ValidationError("prime field too large: p must be < 2^62");
        F.q_ = p;
        F.rep_ = FieldRep::PrimeModular;
        if (p < kChiTableMaxQ) F.build_chi_table_prime();
        return F;
    }

    std::uint64_t q = 1;
    for (unsigned i = 0; i < m; ++i) {
        if (q > kLogTableMaxQ / p) throw ValidationError("extension field too large: p^m must be <= 2^20");
        q *= p;
    }
    if (q > kLogTableMaxQ) throw ValidationError("extension field too large: p^m must be <= 2^20");
    F.q_ = q;
    F.rep_ = FieldRep::LogTable;
    F.build_log_tables();
    return F;
}

void Field::build_chi_table_prime() {
    chi_.assign(q_, -1);
    chi_[0] = 0;
    for (std::uint64_t b = 1; b <= (q_ - 1) / 2; ++b) chi_[mulmod(b, b, q_)] = 1;
}

void Field::build_log_tables() {
    const std::uint64_t q = q_, p = p_;
    const unsigned m = m_;
    exp_.assign(q - 1, 0);
    log_.assign(q, 0);
    std::vector<std::uint32_t> mc(m); // candidate modulus coefficients c_0..c_{m-1}
    std::vector<std::uint32_t> e(m);  // digits of the current power of x

    for (std::uint64_t cand = 1; cand < q; ++cand) {
        if (cand % p == 0) continue; // c_0 = 0: x divides the candidate
        {
            std::uint64_t t = cand;
            for (unsigned i = 0; i < m; ++i) {
                mc[i] = static_cast<std::uint32_t>(t % p);
                t /= p;
            }
        }

        // Walk x, x^2, ... reducing by the candidate. Multiplying by x shifts
        // the digits up and folds the overflow t via x^m = -(sum c_i x^i).
        std::fill(e.begin(), e.end(), 0);
        e[0] = 1;
        exp_[0] = 1;
        bool primitive = false;
        for (std::uint64_t s = 1;; ++s) {
            std::uint32_t t = e[m - 1];
            for (unsigned i = m; i-- > 1;) e[i] = e[i - 1];
            e[0] = 0;
            if (t) {
                for (unsigned i = 0; i < m; ++i)
                    e[i] = static_cast<std::uint32_t>((e[i] + static_cast<std::uint64_t>(t) * (p - mc[i])) % p);
            }
            std::uint64_t packed = 0;
            for (unsigned i = m; i-- > 0;) packed = packed * p + e[i];
            if (packed == 1) {
                primitive = s == q - 1;
                break;
            }
            if (s >= q - 1) break; // unreachable for a unit x; defensive
            exp_[s] = static_cast<std::uint32_t>(packed);
        }
        if (!primitive) continue;

        for (std::uint64_t s = 0; s < q - 1; ++s) log_[exp_[s]] = static_cast<std::uint32_t>(s);
        mod_coeffs_.assign(mc.begin(), mc.end());
        chi_.assign(q, 0);
        for (std::uint64_t s = 0; s < q - 1; ++s) chi_[exp_[s]] = (s & 1) ? -1 : 1;
        return;
    }
    throw InternalError("no primitive modulus found for p=" + std::to_string(p) + " m=" + std::to_string(m));
}

elem Field::add_ext(elem a, elem b) const {
    elem r = 0, pw = 1;
    for (unsigned i = 0; i < m_; ++i) {
        elem s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        r += s * pw;
        pw *= p_;
        a /= p_;
        b /= p_;
    }
    return r;
}

elem Field::neg_ext(elem a) const {
    elem r = 0, pw = 1;
    for (unsigned i = 0; i < m_; ++i) {
        elem d = a % p_;
        r += (d ? p_ - d : 0) * pw;
        pw *= p_;
        a /= p_;
    }
    return r;
}

elem Field::inv(elem a) const {
    if (a == 0) throw ValidationError("inversion of zero");
    if (rep_ == FieldRep::PrimeModular) return powmod(a, q_ - 2, q_);
    return exp_[mod_order(q_ - 1 - log_[a])];
}

elem Field::pow(elem a, std::uint64_t e) const {
    if (rep_ == FieldRep::PrimeModular) return e == 0 ? 1 % q_ : powmod(a, e, q_);
    if (e == 0) return 1;
    if (a == 0) return 0;
    std::uint64_t s = log_[a] * (e % (q_ - 1)) % (q_ - 1);
    return exp_[s];
}

int Field::chi_euler(elem a) const {
    if (rep_ != FieldRep::PrimeModular)
        throw ValidationError("Euler-criterion chi is defined for prime fields only");
    if (a == 0) return 0;
    std::uint64_t r = powmod(a, (q_ - 1) / 2, q_);
    return r == 1 ? 1 : -1;
}

} // namespace qrlab

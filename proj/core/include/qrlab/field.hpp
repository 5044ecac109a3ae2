#pragma once

#include <cstdint>
#include <vector>

#include "qrlab/errors.hpp"

namespace qrlab {

// Canonical index of a field element, always in [0, q). Index 0 is the
// additive identity. In a prime field the index is the least nonnegative
// residue. In an extension field F_{p^m} an element is a residue polynomial
// sum c_i x^i (0 <= c_i < p) and its index packs the coefficient vector in
// base p with the constant term least significant: sum c_i p^i. Under this
// packing the integers 0..p-1 are exactly the prime-subfield constants in
// both representations.
using elem = std::uint64_t;

enum class FieldRep { PrimeModular, LogTable };

bool is_prime_u64(std::uint64_t n);

// Arithmetic in an odd finite field F_q, q = p^m, plus its quadratic
// character chi (0 at 0, +1 on nonzero squares, -1 otherwise).
//
// Prime fields use modular arithmetic directly; chi comes from a precomputed
// square table when q < 2^24 and from the Euler criterion a^((q-1)/2)
// otherwise. Extension fields (m > 1, q <= 2^20) are backed by discrete
// log/antilog tables for a fixed primitive modulus, and chi is the parity of
// the discrete log.
//
// Modulus selection is deterministic: candidates
// x^m + c_{m-1} x^{m-1} + ... + c_0 are tried in increasing order of the
// packed index sum c_i p^i (candidates with c_0 = 0 are skipped since x
// would divide them), and the first one for which the powers of x cycle
// through all q-1 nonzero residues is kept. Hitting the full cycle length
// certifies irreducibility and the primitivity of x in one pass, because a
// residue ring modulo a reducible polynomial has fewer than q-1 units.
//
// Instances are immutable after construction; all operations are const and
// safe to share across threads.
class Field {
public:
    // Extension fields are table-backed, so their size is capped.
    static constexpr std::uint64_t kLogTableMaxQ = 1ull << 20;
    // Prime fields precompute a chi table below this bound.
    static constexpr std::uint64_t kChiTableMaxQ = 1ull << 24;
    // Largest supported prime (keeps sums and Euler exponents in uint64).
    static constexpr std::uint64_t kPrimeMaxP = 1ull << 62;

    static Field make(std::uint64_t p, unsigned m = 1);

    std::uint64_t p() const { return p_; }
    unsigned m() const { return m_; }
    std::uint64_t q() const { return q_; }
    FieldRep rep() const { return rep_; }

    // Multiplicative generator used by the log tables (the class of x).
    // Only meaningful in LogTable mode.
    elem generator() const { return p_; }

    // Non-leading coefficients c_0..c_{m-1} of the selected modulus
    // (LogTable mode; empty for prime fields).
    const std::vector<std::uint32_t>& modulus_coeffs() const { return mod_coeffs_; }

    elem add(elem a, elem b) const {
        if (rep_ == FieldRep::PrimeModular) {
            elem s = a + b;
            return s >= q_ ? s - q_ : s;
        }
        return add_ext(a, b);
    }

    elem neg(elem a) const {
        if (rep_ == FieldRep::PrimeModular) return a ? q_ - a : 0;
        return neg_ext(a);
    }

    elem sub(elem a, elem b) const { return add(a, neg(b)); }

    elem mul(elem a, elem b) const {
        if (rep_ == FieldRep::PrimeModular)
            return static_cast<elem>(static_cast<unsigned __int128>(a) * b % q_);
        if (a == 0 || b == 0) return 0;
        return exp_[mod_order(log_[a] + log_[b])];
    }

    elem inv(elem a) const;
    elem pow(elem a, std::uint64_t e) const;

    // Embeds an integer through the prime subfield (v mod p).
    elem from_int(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        if (r < 0) r += static_cast<std::int64_t>(p_);
        return static_cast<elem>(r);
    }

    int chi(elem a) const {
        if (!chi_.empty()) return chi_[a];
        return chi_euler(a);
    }

    // Euler-criterion evaluation a^((q-1)/2); prime fields only. Kept as a
    // distinct entry point so the table and the power route can be checked
    // against each other.
    int chi_euler(elem a) const;

    bool has_chi_table() const { return !chi_.empty(); }

    // Borrowed view of the chi table for scan kernels; null when absent.
    const std::int8_t* chi_data() const { return chi_.empty() ? nullptr : chi_.data(); }

private:
    Field() = default;

    std::uint64_t mod_order(std::uint64_t s) const {
        return s >= q_ - 1 ? s - (q_ - 1) : s;
    }

    elem add_ext(elem a, elem b) const;
    elem neg_ext(elem a) const;
    void build_chi_table_prime();
    void build_log_tables();

    std::uint64_t p_ = 0;
    std::uint64_t q_ = 0;
    unsigned m_ = 1;
    FieldRep rep_ = FieldRep::PrimeModular;

    std::vector<std::uint32_t> exp_;        // exp_[s] = index of g^s, s in [0, q-1)
    std::vector<std::uint32_t> log_;        // inverse of exp_ on nonzero indices
    std::vector<std::int8_t> chi_;          // chi by index, when materialized
    std::vector<std::uint32_t> mod_coeffs_; // modulus c_0..c_{m-1} (LogTable)
};

} // namespace qrlab

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qrlab/field.hpp"
#include "qrlab/poly.hpp"
#include "qrlab/rational.hpp"
#include "qrlab/rng.hpp"
#include "qrlab/scan.hpp"
#include "qrlab/stats.hpp"

namespace qrlab {

enum class EstimateMode { Exhaustive, MonteCarlo };

// Residue census of f over an evaluation set S: how many values are nonzero
// squares, non-squares, or zero, and the character sum T.
struct CharProfile {
    std::int64_t n_qr = 0;
    std::int64_t n_nr = 0;
    std::int64_t n_zero = 0;
    std::int64_t t_sum = 0; // n_qr - n_nr
};

CharProfile char_profile(const Field& F, const Poly& f, std::span<const elem> S);

// Uniform coefficient vector (a_0, ..., a_{4k-1}), coefficients drawn in
// index order from the given stream.
Poly sample_poly(const Field& F, unsigned k, SplitMix64& g);

// Rejection-samples until the vector lands in the squarefree degree-(4k-1)
// family. The cap of 10^4 attempts is unreachable for real parameters
// (acceptance is about 1 - 2/q), so hitting it raises InternalError.
// attempts_out, when given, receives the number of draws used.
Poly sample_curve(const Field& F, unsigned k, SplitMix64& g, int* attempts_out = nullptr);

enum class PointCountMethod { Direct, CharacterSum };

// Number of affine points (x, y) in S x F_q with y^2 = f(x). Direct counts
// solutions y per x (budgeted to |S| * q <= 10^8); CharacterSum uses
// #solutions(x) = 1 + chi(f(x)).
std::int64_t point_count(const Field& F, const Poly& f, std::span<const elem> S,
                         PointCountMethod method);

// |point_count - n|, the deviation of the point count from its n baseline.
std::int64_t discrepancy(const Field& F, const Poly& f, std::span<const elem> S);

// Tail estimate for P(|T| / sqrt(n) > t). Exhaustive mode is exact (counts
// over all q^{4k} vectors); Monte Carlo mode samples `trials` independent
// vectors (trials >= 100) and attaches a 99% Wilson interval. The threshold
// comparison |T| > t sqrt(n) is decided exactly in integers from the exact
// rational t, so boundary cases cannot be misclassified by rounding.
struct TailEstimate {
    EstimateMode mode = EstimateMode::Exhaustive;
    Conditioning conditioning = Conditioning::AllPolys;
    Rational threshold;
    std::int64_t hits = 0;
    std::int64_t trials = 0; // included vectors (exhaustive) or samples (MC)
    Rational p_hat;
    std::optional<WilsonInterval> ci; // Monte Carlo only
};

TailEstimate tail_estimate(const Field& F, unsigned k, std::span<const elem> S,
                           const Rational& t, Conditioning cond, EstimateMode mode,
                           std::int64_t trials, const RngSpec& rng, unsigned jobs = 1);

// Histogram of T over the ensemble, keyed by T value. Exhaustive mode scans
// everything; Monte Carlo mode accumulates sampled counts.
std::map<std::int64_t, std::int64_t> distribution_histogram(const Field& F, unsigned k,
                                                            std::span<const elem> S,
                                                            Conditioning cond, EstimateMode mode,
                                                            std::int64_t trials, const RngSpec& rng,
                                                            unsigned jobs = 1);

// Deterministic random n-subset of the field: rejection-samples indices from
// stream 0 of the given seed, keeping first occurrences, in draw order.
std::vector<elem> seeded_subset(const Field& F, std::uint64_t n, const RngSpec& rng);

} // namespace qrlab

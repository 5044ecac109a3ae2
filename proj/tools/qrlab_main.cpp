// qrlab command line: exact moments, tail estimates, analytic floors, and
// cubic-family experiments over odd finite fields. One JSON document goes to
// stdout; CSV artifacts go to files passed via --*-out flags.
//
// Exit codes: 0 success, 2 invalid input, 3 budget exceeded, 4 internal
// invariant failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrlab/bounds.hpp"
#include "qrlab/exceptional.hpp"
#include "qrlab/field.hpp"
#include "qrlab/moments.hpp"
#include "qrlab/poly.hpp"
#include "qrlab/sampler.hpp"

using json = nlohmann::ordered_json;
using namespace qrlab;

namespace {

// Reals are serialized as decimal strings with 12 significant digits so the
// output bytes are stable and the precision contract is explicit. Exact
// quantities use "num/den" strings instead.
std::string fmt_real(long double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12Lg", v);
    return buf;
}

std::string fmt_real(double v) { return fmt_real(static_cast<long double>(v)); }

struct FieldArgs {
    std::uint64_t q = 0; // prime power, or 0 when (p, m) given directly
    std::uint64_t p = 0;
    unsigned m = 1;

    Field resolve() const {
        if (q == 0 && p == 0) throw ValidationError("a field is required: pass --q or --p [--m]");
        if (q != 0 && p != 0) throw ValidationError("pass either --q or --p, not both");
        if (p != 0) return Field::make(p, m);
        if (is_prime_u64(q)) return Field::make(q, 1);
        // Prime-power split: q = r^e for the smallest prime r dividing q.
        for (unsigned e = 2; e <= 20; ++e) {
            const double root = std::pow(static_cast<double>(q), 1.0 / e);
            for (std::int64_t cand = std::max<std::int64_t>(2, llround(root) - 1);
                 cand <= llround(root) + 1; ++cand) {
                std::uint64_t pw = 1;
                bool ok = true;
                for (unsigned i = 0; i < e; ++i) {
                    if (pw > q / static_cast<std::uint64_t>(cand)) {
                        ok = false;
                        break;
                    }
                    pw *= static_cast<std::uint64_t>(cand);
                }
                if (ok && pw == q && is_prime_u64(static_cast<std::uint64_t>(cand)))
                    return Field::make(static_cast<std::uint64_t>(cand), e);
            }
        }
        throw ValidationError("q = " + std::to_string(q) + " is not an odd prime power");
    }
};

void add_field_flags(CLI::App* cmd, FieldArgs& fa) {
    cmd->add_option("--q", fa.q, "field size q (prime or prime power)");
    cmd->add_option("--p", fa.p, "field characteristic (prime)");
    cmd->add_option("--m", fa.m, "extension degree (with --p)");
}

unsigned resolve_jobs(std::optional<unsigned> flag) {
    if (flag) {
        if (*flag == 0) throw ValidationError("--jobs must be >= 1");
        return *flag;
    }
    if (const char* env = std::getenv("QRLAB_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw ValidationError("QRLAB_JOBS must be a positive integer");
        return static_cast<unsigned>(v);
    }
    return 1;
}

std::vector<elem> read_subset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open subset file: " + path);
    std::vector<elem> S;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Tolerate surrounding whitespace and blank lines only.
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(b, e - b + 1);
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            S.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError("subset file " + path + " line " + std::to_string(lineno) +
                                  ": not a nonnegative integer: " + tok);
        }
    }
    if (S.empty()) throw ValidationError("subset file " + path + " is empty");
    return S;
}

void write_histogram_csv(const std::string& path, const std::map<std::int64_t, std::int64_t>& hist) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write histogram file: " + path);
    out << "t_value,count\n";
    for (const auto& [t, c] : hist) out << t << "," << c << "\n";
}

json field_config(const Field& F) {
    json j;
    j["q"] = F.q();
    j["p"] = F.p();
    j["m"] = F.m();
    return j;
}

// ---------------------------------------------------------------- moments --

struct MomentsArgs {
    FieldArgs field;
    unsigned k = 1;
    std::uint64_t n = 0;
    bool verify = false;
    std::optional<unsigned> jobs;
};

int cmd_moments(const MomentsArgs& a) {
    const Field F = a.field.resolve();
    const unsigned jobs = resolve_jobs(a.jobs);
    const MomentTable table = MomentTable::compute(a.n, F.q(), a.k);

    json out;
    out["command"] = "moments";
    out["config"] = {{"field", field_config(F)}, {"k", a.k}, {"n", a.n}, {"verify", a.verify}};

    json moments;
    for (unsigned j = 1; j <= 4 * a.k; ++j) moments[std::to_string(j)] = rational_str(table.at(j));
    out["results"]["moments"] = moments;
    out["results"]["asymptotic_regime"] = table.asymptotic_regime();

    json gauss;
    for (unsigned j = 2; j <= 4 * a.k; j += 2) gauss[std::to_string(j)] = gaussian_moment(j).str() + "/1";
    out["results"]["gaussian_reference"] = gauss;

    if (a.verify) {
        if (a.n > F.q()) throw ValidationError("verification needs n <= q");
        std::vector<elem> S(a.n);
        for (std::uint64_t i = 0; i < a.n; ++i) S[i] = i;
        const auto brute = brute_force_moments(F, a.k, S, 4 * a.k, jobs);
        json match;
        bool all = true;
        for (unsigned j = 1; j <= 4 * a.k; ++j) {
            const bool ok = brute.at(j) == table.at(j);
            match[std::to_string(j)] = ok;
            all = all && ok;
        }
        out["results"]["oracle_match"] = match;
        out["results"]["oracle_match_all"] = all;
    }

    std::cout << out.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------- tail --

struct TailArgs {
    FieldArgs field;
    unsigned k = 1;
    bool full_field = false;
    std::string subset_file;
    std::uint64_t random_n = 0;
    std::string threshold;
    std::string conditioning = "all";
    bool exhaustive = false;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::string hist_out;
    std::optional<unsigned> jobs;
};

int cmd_tail(const TailArgs& a) {
    const Field F = a.field.resolve();
    const unsigned jobs = resolve_jobs(a.jobs);
    const RngSpec rng{a.seed};

    const int sources = (a.full_field ? 1 : 0) + (!a.subset_file.empty() ? 1 : 0) + (a.random_n > 0 ? 1 : 0);
    if (sources != 1)
        throw ValidationError("pick exactly one subset source: --full-field, --subset-file, or --random-subset");

    std::vector<elem> S;
    json subset_cfg;
    if (a.full_field) {
        S.resize(F.q());
        for (std::uint64_t i = 0; i < F.q(); ++i) S[i] = i;
        subset_cfg = {{"source", "full-field"}, {"n", S.size()}};
    } else if (!a.subset_file.empty()) {
        S = read_subset_file(a.subset_file);
        subset_cfg = {{"source", "file"}, {"path", a.subset_file}, {"n", S.size()}};
    } else {
        S = seeded_subset(F, a.random_n, rng);
        subset_cfg = {{"source", "seeded"}, {"n", S.size()}};
    }
    validate_subset(F, S);

    Conditioning cond;
    if (a.conditioning == "all")
        cond = Conditioning::AllPolys;
    else if (a.conditioning == "hyperelliptic")
        cond = Conditioning::Hyperelliptic;
    else
        throw ValidationError("--conditioning must be 'all' or 'hyperelliptic'");

    if (a.threshold.empty()) throw ValidationError("--threshold is required");
    const Rational t = parse_rational(a.threshold);

    EstimateMode mode;
    if (a.exhaustive) {
        if (a.trials != 0) throw ValidationError("--exhaustive and --trials are mutually exclusive");
        mode = EstimateMode::Exhaustive;
    } else {
        if (a.trials == 0) throw ValidationError("pass --exhaustive or --trials N");
        mode = EstimateMode::MonteCarlo;
    }

    const TailEstimate est = tail_estimate(F, a.k, S, t, cond, mode, a.trials, rng, jobs);

    json out;
    out["command"] = "tail";
    out["config"] = {{"field", field_config(F)},
                     {"k", a.k},
                     {"subset", subset_cfg},
                     {"threshold", rational_str(t)},
                     {"conditioning", a.conditioning},
                     {"mode", a.exhaustive ? "exhaustive" : "monte-carlo"},
                     {"seed", a.seed}};
    if (!a.exhaustive) out["config"]["trials"] = a.trials;

    out["results"]["hits"] = est.hits;
    out["results"]["trials"] = est.trials;
    out["results"]["p_hat"] = rational_str(est.p_hat);
    if (est.ci) {
        out["results"]["ci_low"] = fmt_real(est.ci->low);
        out["results"]["ci_high"] = fmt_real(est.ci->high);
    }

    if (!a.hist_out.empty()) {
        const auto hist = distribution_histogram(F, a.k, S, cond, mode, a.trials, rng, jobs);
        write_histogram_csv(a.hist_out, hist);
        out["results"]["histogram_file"] = a.hist_out;
    }

    std::cout << out.dump(2) << "\n";
    return 0;
}

// ----------------------------------------------------------------- bounds --

struct BoundsArgs {
    FieldArgs field;
    unsigned k = 1;
    std::uint64_t n = 0;
    std::optional<double> delta;
    std::optional<double> epsilon;
    std::optional<double> eta;
    bool constants = false;
    std::optional<Rational> floor_eps; // exact so the min-n cutoff is sharp
    bool assemble = false;
    std::optional<unsigned> jobs;
};

int cmd_bounds(const BoundsArgs& a) {
    // Every subcommand takes --jobs so callers can set it uniformly; the
    // analytic routes have no parallel work, but the value is still checked.
    resolve_jobs(a.jobs);
    json out;
    out["command"] = "bounds";
    json cfg;
    cfg["k"] = a.k;

    std::optional<MomentTable> table;
    std::optional<Field> F;
    if (a.field.q != 0 || a.field.p != 0) {
        F = a.field.resolve();
        if (a.n == 0) throw ValidationError("--n is required alongside a field");
        table = MomentTable::compute(a.n, F->q(), a.k);
        cfg["field"] = field_config(*F);
        cfg["n"] = a.n;
        out["results"]["e2k"] = rational_str(table->e2k());
        out["results"]["e4k"] = rational_str(table->e4k());
    }

    if (a.delta) {
        if (!table) throw ValidationError("--delta needs --q/--p and --n");
        cfg["delta"] = fmt_real(*a.delta);
        const TailBound b = markov_tail_bound(*table, *a.delta);
        json jb;
        jb["threshold"] = fmt_real(b.threshold);
        jb["floor"] = fmt_real(b.floor);
        jb["c_k"] = fmt_real(b.c_k);
        if (a.assemble) jb["curve_floor"] = fmt_real(probability_floor_assembled(b.floor, F->q(), a.k));
        out["results"]["moment_ratio_bound"] = jb;
    }

    if (a.epsilon) {
        if (!table) throw ValidationError("--epsilon needs --q/--p and --n");
        cfg["epsilon"] = fmt_real(*a.epsilon);
        std::optional<long double> eta;
        if (a.eta) eta = *a.eta;
        const TailBound b = small_prob_threshold(*table, *a.epsilon, eta);
        cfg["eta"] = fmt_real(b.eta);
        json jb;
        jb["threshold"] = fmt_real(b.threshold);
        jb["floor"] = fmt_real(b.floor);
        jb["c_k"] = fmt_real(b.c_k);
        jb["lambda"] = fmt_real(b.lambda);
        jb["gap"] = fmt_real(b.gap);
        if (a.assemble) jb["curve_floor"] = fmt_real(probability_floor_assembled(b.floor, F->q(), a.k));
        out["results"]["small_probability_bound"] = jb;
    }

    if (a.constants) {
        const LimitConstants c = limit_constants(a.k);
        out["results"]["limit_constants"] = {{"probability_floor", fmt_real(c.probability_floor)},
                                             {"threshold_coefficient", fmt_real(c.threshold_coefficient)}};
    }

    if (a.floor_eps) {
        if (!table) throw ValidationError("--floor-search needs --q/--p and --n");
        cfg["floor_eps"] = rational_str(*a.floor_eps);
        const FloorParameters fp = floor_parameters(a.k, *a.floor_eps, *table);
        out["results"]["floor_parameters"] = {{"delta", fmt_real(fp.delta)}, {"min_n", fp.min_n}};
    }

    if (!a.delta && !a.epsilon && !a.constants && !a.floor_eps && !table)
        throw ValidationError("nothing to do: pass --delta, --epsilon, --constants, or --floor-search");

    out["config"] = cfg;
    // Keep config before results in the emitted document.
    json ordered;
    ordered["command"] = out["command"];
    ordered["config"] = out["config"];
    ordered["results"] = out["results"];
    std::cout << ordered.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------ exceptional --

struct ExceptionalArgs {
    std::uint64_t p = 0;
    bool census = false;
    std::string audit; // "", "all", or "sample"
    std::int64_t trials = 10'000;
    std::optional<unsigned> n;
    std::optional<unsigned> m;
    bool degree_stats = false;
    bool verify_degrees = false;
    std::string alpha;
    std::int64_t samples = 0;
    std::string subset_file;
    std::string per_cubic_out;
    std::uint64_t seed = 0;
    std::optional<unsigned> jobs;
};

// Direct subset-enumeration oracle for exact_degree: for one cubic's chi
// row, count the size-n subsets with |sum chi| >= n - 2m by walking all
// combinations with a running sum.
std::int64_t degree_by_subsets(const std::vector<int>& chi_row, unsigned n, unsigned m) {
    const std::size_t P = chi_row.size();
    std::vector<unsigned> idx(n);
    for (unsigned i = 0; i < n; ++i) idx[i] = i;
    const std::int64_t need = static_cast<std::int64_t>(n) - 2 * static_cast<std::int64_t>(m);
    std::int64_t count = 0;
    while (true) {
        std::int64_t T = 0;
        for (unsigned i = 0; i < n; ++i) T += chi_row[idx[i]];
        if (T >= need || -T >= need) ++count;
        // next combination
        int i = static_cast<int>(n) - 1;
        while (i >= 0 && idx[i] == P - n + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (unsigned j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return count;
}

int cmd_exceptional(const ExceptionalArgs& a) {
    if (a.p == 0) throw ValidationError("--p is required");
    const Field F = Field::make(a.p, 1);
    const unsigned jobs = resolve_jobs(a.jobs);
    const RngSpec rng{a.seed};

    json out;
    out["command"] = "exceptional";
    json cfg;
    cfg["p"] = a.p;
    cfg["seed"] = a.seed;
    json results;

    if (a.census) {
        const ProfileCensus pc = profile_census(F, jobs);
        std::int64_t distinct = 0;
        for (std::int64_t c : pc.counts)
            if (c != 0) ++distinct;
        results["census"] = {{"family_size", cubic_family_size(a.p).str()},
                             {"enumerated", pc.total},
                             {"distinct_profiles", distinct}};
    }

    if (!a.audit.empty()) {
        HasseAudit audit;
        if (a.audit == "all") {
            audit = hasse_audit_all(F, jobs);
        } else if (a.audit == "sample") {
            audit = hasse_audit_sample(F, a.trials, rng, jobs);
            cfg["trials"] = a.trials;
        } else {
            throw ValidationError("--audit must be 'all' or 'sample'");
        }
        results["audit"] = {{"scope", a.audit},
                            {"audited", audit.audited},
                            {"violations", 0},
                            {"max_char_sum_ratio", fmt_real(audit.max_char_sum_ratio)},
                            {"max_majority_ratio", fmt_real(audit.max_majority_ratio)}};
    }

    if (a.degree_stats || a.verify_degrees || !a.per_cubic_out.empty()) {
        if (!a.n || !a.m) throw ValidationError("degree operations need --n and --m");
        cfg["n"] = *a.n;
        cfg["m"] = *a.m;
    }

    if (a.degree_stats) {
        const ProfileCensus pc = profile_census(F, jobs);
        const BigInt sum_exact = pc.total_exact_degree(*a.n, *a.m);
        const BigInt sum_bound = pc.total_degree_lower_bound(*a.n, *a.m);
        const BigInt subsets = binomial(a.p, *a.n);
        const Rational mean_rate(sum_exact, BigInt(pc.total) * subsets);
        const Rational heuristic(binomial(*a.n, *a.m), ipow(2, *a.n));
        results["degree_stats"] = {{"sum_exact_degree", sum_exact.str()},
                                   {"sum_lower_bound", sum_bound.str()},
                                   {"bound_le_exact", sum_bound <= sum_exact},
                                   {"subsets", subsets.str()},
                                   {"mean_event_rate", rational_str(mean_rate)},
                                   {"heuristic_mass", rational_str(heuristic)},
                                   {"rate_over_heuristic", fmt_real(to_float(mean_rate / heuristic))}};
    }

    if (a.verify_degrees) {
        const unsigned n = *a.n, m = *a.m;
        const BigInt work = binomial(a.p, n) * cubic_family_size(a.p);
        if (work > BigInt(1'000'000'000)) throw BudgetError("degree verification requires C(p,n) * p^3 <= 1e9");
        std::int64_t checked = 0, mismatches = 0;
        for_each_cubic(F, [&](elem ca, elem cb, elem cc) {
            const Poly f = make_poly(F, std::vector<elem>{cc, cb, ca, 1});
            std::vector<int> chi_row(a.p);
            CubicProfile prof;
            for (elem x = 0; x < a.p; ++x) {
                const int c = F.chi(evaluate(F, f, x));
                chi_row[x] = c;
                if (c > 0)
                    ++prof.n_qr;
                else if (c < 0)
                    ++prof.n_nr;
                else
                    ++prof.n_zero;
            }
            const BigInt lhs = exact_degree(prof, n, m);
            const std::int64_t rhs = degree_by_subsets(chi_row, n, m);
            if (lhs != BigInt(rhs)) ++mismatches;
            ++checked;
        });
        results["verify_degrees"] = {{"checked", checked}, {"mismatches", mismatches}};
        if (mismatches != 0) throw InternalError("combinatorial degree disagrees with subset enumeration");
    }

    if (!a.subset_file.empty()) {
        const std::vector<elem> S = read_subset_file(a.subset_file);
        const unsigned m = a.m.value_or(0);
        cfg["subset"] = {{"source", "file"}, {"path", a.subset_file}, {"n", S.size()}};
        const std::int64_t deg = subset_degree(F, S, m);
        results["subset_degree"] = {{"m", m},
                                    {"degree", deg},
                                    {"all_residue_probability", rational_str(all_residue_event_probability(F, S))}};
    }

    if (!a.alpha.empty()) {
        if (!a.n || !a.m) throw ValidationError("beta estimation needs --n and --m");
        if (a.samples <= 0) throw ValidationError("beta estimation needs --samples");
        const Rational alpha = parse_rational(a.alpha);
        cfg["alpha"] = rational_str(alpha);
        cfg["samples"] = a.samples;
        const BetaEstimate est = beta_estimate(F, *a.n, *a.m, alpha, a.samples, rng, jobs);
        json jb;
        jb["samples"] = est.samples;
        jb["qualifying"] = est.qualifying;
        jb["beta_hat"] = rational_str(est.beta_hat);
        jb["ci_low"] = fmt_real(est.ci.low);
        jb["ci_high"] = fmt_real(est.ci.high);
        jb["degree_threshold"] = est.degree_threshold.str();
        try {
            jb["beta_lower_bound"] = rational_str(beta_lower_bound(*a.n, *a.m, alpha));
        } catch (const ValidationError&) {
            jb["beta_lower_bound"] = nullptr; // alpha outside the nonvacuous range
        }
        results["beta"] = jb;
    }

    if (!a.per_cubic_out.empty()) {
        if (a.p > 100) throw BudgetError("per-cubic listing requires p <= 100");
        std::ofstream csv(a.per_cubic_out);
        if (!csv) throw ValidationError("cannot write per-cubic file: " + a.per_cubic_out);
        csv << "n_q,n_n,z,a_f,exact_degree\n";
        std::map<std::pair<std::int64_t, std::int64_t>, BigInt> memo;
        for_each_cubic(F, [&](elem ca, elem cb, elem cc) {
            const Poly f = make_poly(F, std::vector<elem>{cc, cb, ca, 1});
            const CubicProfile prof = cubic_profile(F, f);
            const auto key = std::make_pair(prof.char_sum(), prof.n_zero);
            auto it = memo.find(key);
            if (it == memo.end()) it = memo.emplace(key, exact_degree(prof, *a.n, *a.m)).first;
            csv << prof.n_qr << "," << prof.n_nr << "," << prof.n_zero << ","
                << fmt_real(prof.majority_excess()) << "," << it->second.str() << "\n";
        });
        results["per_cubic_file"] = a.per_cubic_out;
    }

    if (results.empty())
        throw ValidationError("nothing to do: pass --census, --audit, --degree-stats, --verify-degrees, "
                              "--subset-file, --alpha, or --per-cubic-out");

    out["config"] = cfg;
    out["results"] = results;
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadratic-character statistics over odd finite fields"};
    app.require_subcommand(1);

    MomentsArgs ma;
    CLI::App* moments = app.add_subcommand("moments", "exact moments of the normalized character sum");
    add_field_flags(moments, ma.field);
    moments->add_option("--k", ma.k, "curve parameter k (degree 4k-1 family)")->required();
    moments->add_option("--n", ma.n, "evaluation-set size")->required();
    moments->add_flag("--verify", ma.verify, "cross-check against exhaustive enumeration");
    unsigned ma_jobs = 0;
    moments->add_option("--jobs", ma_jobs, "worker threads (default $QRLAB_JOBS or 1)");

    TailArgs ta;
    CLI::App* tail = app.add_subcommand("tail", "tail probability of |T|/sqrt(n) over the ensemble");
    add_field_flags(tail, ta.field);
    tail->add_option("--k", ta.k, "curve parameter k")->required();
    tail->add_flag("--full-field", ta.full_field, "evaluate over every field element");
    tail->add_option("--subset-file", ta.subset_file, "file with one element index per line");
    tail->add_option("--random-subset", ta.random_n, "seeded random subset of this size");
    tail->add_option("--threshold", ta.threshold, "deviation threshold t (exact: '0.1' means 1/10)")->required();
    tail->add_option("--conditioning", ta.conditioning, "'all' or 'hyperelliptic'");
    tail->add_flag("--exhaustive", ta.exhaustive, "exact scan over all q^(4k) vectors");
    tail->add_option("--trials", ta.trials, "Monte Carlo sample count");
    tail->add_option("--seed", ta.seed, "master seed");
    tail->add_option("--hist-out", ta.hist_out, "write the T histogram as CSV");
    unsigned ta_jobs = 0;
    tail->add_option("--jobs", ta_jobs, "worker threads (default $QRLAB_JOBS or 1)");

    BoundsArgs ba;
    CLI::App* bounds = app.add_subcommand("bounds", "analytic tail floors from the moment table");
    add_field_flags(bounds, ba.field);
    bounds->add_option("--k", ba.k, "curve parameter k")->required();
    bounds->add_option("--n", ba.n, "evaluation-set size");
    double ba_delta = 0, ba_eps = 0, ba_eta = 0;
    std::string ba_floor;
    CLI::Option* od = bounds->add_option("--delta", ba_delta, "moment-ratio route threshold");
    CLI::Option* oe = bounds->add_option("--epsilon", ba_eps, "small-probability route target mass");
    CLI::Option* oh = bounds->add_option("--eta", ba_eta, "override eta (default epsilon^(1/4))");
    bounds->add_flag("--constants", ba.constants, "limiting guarantee constants for this k");
    CLI::Option* of = bounds->add_option("--floor-search", ba_floor,
                                         "find (delta, N) within this slack (exact rational)");
    bounds->add_flag("--assemble", ba.assemble, "also report the curve-family floor");
    unsigned ba_jobs = 0;
    bounds->add_option("--jobs", ba_jobs, "worker threads (default $QRLAB_JOBS or 1)");

    ExceptionalArgs ea;
    CLI::App* exceptional = app.add_subcommand("exceptional", "monic separable cubic family experiments");
    exceptional->add_option("--p", ea.p, "prime field size")->required();
    exceptional->add_flag("--census", ea.census, "family size and profile census");
    exceptional->add_option("--audit", ea.audit, "'all' or 'sample': square-root bound audit");
    exceptional->add_option("--trials", ea.trials, "sampled-audit size (default 10000)");
    unsigned ea_n = 0, ea_m = 0;
    CLI::Option* on = exceptional->add_option("--n", ea_n, "evaluation-set size");
    CLI::Option* om = exceptional->add_option("--m", ea_m, "unanimity slack m");
    exceptional->add_flag("--degree-stats", ea.degree_stats, "family-wide degree statistics");
    exceptional->add_flag("--verify-degrees", ea.verify_degrees,
                          "check the combinatorial degree against subset enumeration");
    exceptional->add_option("--alpha", ea.alpha, "qualification fraction for beta (exact rational)");
    exceptional->add_option("--samples", ea.samples, "subset samples for beta");
    exceptional->add_option("--subset-file", ea.subset_file, "degree of one explicit subset");
    exceptional->add_option("--per-cubic-out", ea.per_cubic_out, "write per-cubic CSV");
    exceptional->add_option("--seed", ea.seed, "master seed");
    unsigned ea_jobs = 0;
    exceptional->add_option("--jobs", ea_jobs, "worker threads (default $QRLAB_JOBS or 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (moments->parsed()) {
            if (moments->count("--jobs")) ma.jobs = ma_jobs;
            return cmd_moments(ma);
        }
        if (tail->parsed()) {
            if (tail->count("--jobs")) ta.jobs = ta_jobs;
            return cmd_tail(ta);
        }
        if (bounds->parsed()) {
            if (od->count()) ba.delta = ba_delta;
            if (oe->count()) ba.epsilon = ba_eps;
            if (oh->count()) ba.eta = ba_eta;
            if (of->count()) ba.floor_eps = parse_rational(ba_floor);
            if (bounds->count("--jobs")) ba.jobs = ba_jobs;
            return cmd_bounds(ba);
        }
        if (exceptional->parsed()) {
            if (on->count()) ea.n = ea_n;
            if (om->count()) ea.m = ea_m;
            if (exceptional->count("--jobs")) ea.jobs = ea_jobs;
            return cmd_exceptional(ea);
        }
        throw ValidationError("no subcommand given");
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "internal invariant failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

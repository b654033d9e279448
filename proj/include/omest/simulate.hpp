#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <omest/classical.hpp>
#include <omest/errors.hpp>
#include <omest/moments.hpp>
#include <omest/posterior.hpp>
#include <omest/rng.hpp>
#include <omest/scenario.hpp>
#include <omest/search_counts.hpp>

namespace omest {

enum class SimMode { full_search, fixed_sample };

inline std::string sim_mode_name(SimMode m) {
    return m == SimMode::full_search ? "full-search" : "fixed-sample";
}

struct SimConfig {
    SimMode mode = SimMode::fixed_sample;
    long long true_n = 0;

    // full_search: every item is independently caught by each searcher.
    double p_a = 0.5;
    double p_b = 0.5;

    // fixed_sample: each searcher returns a fixed-size uniform sample.
    long long n_a = 0;
    long long n_b = 0;

    long long replicates = 1000;
    uint64_t seed = 42;
    std::vector<std::string> estimators = {"exact", "chapman", "lp"};
    double interval_mass = 0.68;  // used by the "credible" estimator
    // Deliberately analyse each replicate under the wrong scenario family
    // (full-search data as fixed-sample and vice versa).
    bool mismatched_scenario = false;
    bool record_replicates = false;
};

struct Replicate {
    SearchCounts counts;
    long long true_missed = 0;
};

struct ReplicateRow {
    long long index = 0;
    long long na = 0, nb = 0, nab = 0;
    long long true_missed = 0;
    // Point estimates aligned with SimConfig::estimators; NaN when undefined.
    std::vector<double> estimates;
};

struct EstimatorStats {
    std::string name;
    long long replicates = 0;
    long long defined = 0;           // point estimate exists
    long long interval_defined = 0;  // an uncertainty interval exists too
    double fraction_undefined = 0.0;
    double mean_bias = std::numeric_limits<double>::quiet_NaN();
    double rmse = std::numeric_limits<double>::quiet_NaN();
    double coverage_1sd = std::numeric_limits<double>::quiet_NaN();
    double coverage_2sd = std::numeric_limits<double>::quiet_NaN();
    // Credible-interval estimator only.
    double coverage_interval = std::numeric_limits<double>::quiet_NaN();
};

struct SimResult {
    SimConfig config;
    std::string rng_algorithm = "splitmix64";
    Scenario analysis_scenario = Scenario::fixed_sample();
    std::vector<EstimatorStats> estimators;
    std::vector<ReplicateRow> rows;  // populated only when record_replicates
};

namespace detail {

inline void validate_sim_config(const SimConfig& cfg) {
    if (cfg.true_n < 1) throw ValidationError("simulation requires true_n >= 1");
    if (cfg.replicates < 1) throw ValidationError("simulation requires replicates >= 1");
    if (cfg.mode == SimMode::full_search) {
        if (!(cfg.p_a > 0.0 && cfg.p_a <= 1.0) || !(cfg.p_b > 0.0 && cfg.p_b <= 1.0))
            throw ValidationError("full-search simulation requires capture probabilities in (0, 1]");
    } else {
        if (cfg.n_a < 0 || cfg.n_b < 0 || cfg.n_a > cfg.true_n || cfg.n_b > cfg.true_n)
            throw ValidationError("fixed-sample simulation requires 0 <= n_a, n_b <= true_n");
    }
    if (!(cfg.interval_mass > 0.0 && cfg.interval_mass < 1.0))
        throw ValidationError("interval_mass must lie strictly between 0 and 1");
    for (const auto& e : cfg.estimators)
        if (e != "exact" && e != "chapman" && e != "lp" && e != "credible")
            throw ValidationError("unknown estimator \"" + e +
                                  "\" (expected exact, chapman, lp, or credible)");
}

}  // namespace detail

// The scenario the "exact" and "credible" estimators analyse each replicate
// under. Matched: full-search data uses the full-search family, fixed-sample
// data the fixed-sample family. The mismatch flag swaps them.
inline Scenario analysis_scenario(const SimConfig& cfg) {
    const bool full = (cfg.mode == SimMode::full_search) != cfg.mismatched_scenario;
    return full ? Scenario::full_search() : Scenario::fixed_sample();
}

inline Replicate simulate_replicate(const SimConfig& cfg, long long index) {
    SplitMix64 rng(SplitMix64::stream_seed(cfg.seed, static_cast<uint64_t>(index)));
    long long na = 0, nb = 0, nab = 0;
    if (cfg.mode == SimMode::full_search) {
        for (long long i = 0; i < cfg.true_n; ++i) {
            const bool a = rng.uniform01() < cfg.p_a;
            const bool b = rng.uniform01() < cfg.p_b;
            na += a;
            nb += b;
            nab += a && b;
        }
    } else {
        // Sample B's n_b items without replacement and count how many land in
        // A; by exchangeability A can be any fixed n_a-subset.
        na = cfg.n_a;
        nb = cfg.n_b;
        long long remaining = cfg.true_n;
        long long remaining_in_a = cfg.n_a;
        for (long long i = 0; i < cfg.n_b; ++i) {
            const uint64_t r = rng.below(static_cast<uint64_t>(remaining));
            if (r < static_cast<uint64_t>(remaining_in_a)) {
                ++nab;
                --remaining_in_a;
            }
            --remaining;
        }
    }
    SearchCounts counts(na, nb, nab);
    return Replicate{counts, cfg.true_n - counts.nf()};
}

inline SimResult run_simulation(const SimConfig& cfg) {
    detail::validate_sim_config(cfg);

    const Scenario sc = analysis_scenario(cfg);
    const std::size_t ne = cfg.estimators.size();

    struct Acc {
        long long defined = 0, interval_defined = 0;
        double sum_bias = 0.0, sum_sq = 0.0;
        long long hits1 = 0, hits2 = 0, hits_interval = 0;
    };
    std::vector<Acc> acc(ne);

    SimResult result;
    result.config = cfg;
    result.analysis_scenario = sc;
    if (cfg.record_replicates) result.rows.reserve(static_cast<std::size_t>(cfg.replicates));

    // Capped so one awkward replicate cannot eat unbounded memory; tables the
    // cap refuses count as undefined for that replicate.
    const TableOptions credible_opts{1e-9, 2'000'000};

    for (long long r = 0; r < cfg.replicates; ++r) {
        const Replicate rep = simulate_replicate(cfg, r);
        const double truth = static_cast<double>(rep.true_missed);

        ReplicateRow row;
        if (cfg.record_replicates) {
            row.index = r;
            row.na = rep.counts.na();
            row.nb = rep.counts.nb();
            row.nab = rep.counts.nab();
            row.true_missed = rep.true_missed;
            row.estimates.assign(ne, std::numeric_limits<double>::quiet_NaN());
        }

        for (std::size_t e = 0; e < ne; ++e) {
            const std::string& name = cfg.estimators[e];
            double est = std::numeric_limits<double>::quiet_NaN();
            double sd = std::numeric_limits<double>::quiet_NaN();
            bool interval_hit = false;
            bool has_interval = false;

            if (name == "exact") {
                const Moment m = mean_exact(rep.counts, sc);
                if (m.defined()) est = m.value();
                const Moment s = sd_exact(rep.counts, sc);
                if (s.defined()) sd = s.value();
            } else if (name == "chapman") {
                est = chapman(rep.counts).missed;
                sd = std::sqrt(seber_variance(rep.counts));
            } else if (name == "lp") {
                const LincolnPetersen lp = lincoln_petersen(rep.counts);
                if (lp.missed.defined()) est = lp.missed.value();
            } else {  // credible
                try {
                    const PosteriorTable table = build_table(rep.counts, sc, credible_opts);
                    const TableMoment m = table_moment(table, 1);
                    if (!m.divergent) est = m.value;
                    const CredibleInterval ci = credible_interval(table, cfg.interval_mass);
                    has_interval = true;
                    interval_hit = rep.true_missed >= ci.lower && rep.true_missed <= ci.upper;
                } catch (const DivergentSeriesError&) {
                } catch (const BudgetExceededError&) {
                }
            }

            if (std::isfinite(est)) {
                acc[e].defined += 1;
                const double bias = est - truth;
                acc[e].sum_bias += bias;
                acc[e].sum_sq += bias * bias;
                if (std::isfinite(sd)) {
                    acc[e].interval_defined += 1;
                    if (std::fabs(bias) <= sd) acc[e].hits1 += 1;
                    if (std::fabs(bias) <= 2.0 * sd) acc[e].hits2 += 1;
                }
                if (cfg.record_replicates) row.estimates[e] = est;
            }
            // The credible estimator's sd stays NaN, so interval_defined is
            // bumped here and only here for it.
            if (has_interval) {
                acc[e].interval_defined += 1;
                if (interval_hit) acc[e].hits_interval += 1;
            }
        }

        if (cfg.record_replicates) result.rows.push_back(std::move(row));
    }

    result.estimators.reserve(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        EstimatorStats s;
        s.name = cfg.estimators[e];
        s.replicates = cfg.replicates;
        s.defined = acc[e].defined;
        s.interval_defined = acc[e].interval_defined;
        s.fraction_undefined =
            static_cast<double>(cfg.replicates - acc[e].defined) / static_cast<double>(cfg.replicates);
        if (acc[e].defined > 0) {
            const double n = static_cast<double>(acc[e].defined);
            s.mean_bias = acc[e].sum_bias / n;
            s.rmse = std::sqrt(acc[e].sum_sq / n);
        }
        if (acc[e].interval_defined > 0) {
            const double n = static_cast<double>(acc[e].interval_defined);
            if (s.name == "credible") {
                s.coverage_interval = static_cast<double>(acc[e].hits_interval) / n;
            } else {
                s.coverage_1sd = static_cast<double>(acc[e].hits1) / n;
                s.coverage_2sd = static_cast<double>(acc[e].hits2) / n;
            }
        }
        result.estimators.push_back(std::move(s));
    }
    return result;
}

}  // namespace omest

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <omest/classical.hpp>
#include <omest/moment.hpp>
#include <omest/moments.hpp>
#include <omest/posterior.hpp>
#include <omest/scenario.hpp>
#include <omest/search_counts.hpp>
#include <omest/simulate.hpp>

namespace omest {

inline constexpr int kDefaultPrecision = 4;

// Significant digits for text output: OMEST_PRECISION overrides the default,
// an explicit CLI flag overrides both (handled by the caller).
inline int default_precision() {
    if (const char* env = std::getenv("OMEST_PRECISION")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 17) return static_cast<int>(v);
    }
    return kDefaultPrecision;
}

inline std::string format_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// %.17g round-trips doubles exactly; used for machine-facing CSV.
inline std::string format_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Undefined moments always render as a threshold statement, never 0 or NaN.
inline std::string render_undefined(long long min_nab) {
    std::ostringstream os;
    os << "undefined (requires n_ab >= " << min_nab << ")";
    return os.str();
}

inline std::string render_moment(const Moment& m, int digits) {
    return m.defined() ? format_sig(m.value(), digits) : render_undefined(m.min_nab());
}

inline nlohmann::json moment_json(const Moment& m) {
    if (m.defined()) return nlohmann::json{{"defined", true}, {"value", m.value()}};
    return nlohmann::json{{"defined", false}, {"requires_min_nab", m.min_nab()}};
}

inline nlohmann::json finite_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return nlohmann::json("infinity");
    return nlohmann::json(v);
}

struct PosteriorSummary {
    long long mode = 0;
    CredibleInterval interval;
    double interval_mass = 0.0;  // requested mass
    double tail_mass_bound = 0.0;
    long long table_size = 0;  // entries stored, i.e. x_max + 1
};

struct EstimateView {
    SearchCounts counts{0, 0, 0};
    Scenario scenario = Scenario::full_search();
    MomentReport moments;
    bool include_classical = false;
    ClassicalReport classical;
    bool include_posterior = false;
    PosteriorSummary posterior;
};

inline nlohmann::json counts_json(const SearchCounts& c) {
    return {{"na", c.na()}, {"nb", c.nb()}, {"nab", c.nab()},
            {"xa", c.xa()}, {"xb", c.xb()}, {"nf", c.nf()}};
}

inline nlohmann::json scenario_json(const Scenario& sc) {
    return {{"name", sc.name()}, {"shift", sc.shift()}};
}

inline nlohmann::json classical_json(const ClassicalReport& r) {
    return {
        {"lincoln_petersen",
         {{"total", moment_json(r.lp.total)}, {"missed", moment_json(r.lp.missed)}}},
        {"chapman", {{"total", r.chapman.total}, {"missed", r.chapman.missed}}},
        {"seber_variance", r.seber_variance},
        {"seber_sd", r.seber_sd},
        {"poisson",
         {{"mode_x_star", r.poisson.mode_x_star},
          {"validity_ratio_a", finite_or_null(r.poisson.validity_ratio_a)},
          {"validity_ratio_b", finite_or_null(r.poisson.validity_ratio_b)},
          {"exponent_rate", finite_or_null(r.poisson.exponent_rate)},
          {"reliable", r.poisson.reliable}}},
    };
}

inline nlohmann::json estimate_json(const EstimateView& v) {
    nlohmann::json j;
    j["counts"] = counts_json(v.counts);
    j["scenario"] = scenario_json(v.scenario);
    j["missed"] = {{"mean", moment_json(v.moments.mean)},
                   {"sd", moment_json(v.moments.sd)},
                   {"variance", moment_json(v.moments.variance)},
                   {"skewness", moment_json(v.moments.skewness)},
                   {"kurtosis", moment_json(v.moments.kurtosis)}};
    Moment total_mean = v.moments.mean;
    if (total_mean.defined())
        total_mean = Moment::of(total_mean.value() + static_cast<double>(v.counts.nf()));
    j["total_mean"] = moment_json(total_mean);
    if (v.moments.has_error_bounds) {
        j["error_bounds"] = {{"mean", v.moments.mean_error_bound},
                             {"variance", v.moments.variance_error_bound}};
    }
    if (v.include_classical) j["classical"] = classical_json(v.classical);
    if (v.include_posterior) {
        j["posterior"] = {{"mode", v.posterior.mode},
                          {"interval_mass", v.posterior.interval_mass},
                          {"credible_interval",
                           {{"lower", v.posterior.interval.lower},
                            {"upper", v.posterior.interval.upper},
                            {"mass_covered", v.posterior.interval.mass_covered}}},
                          {"tail_mass_bound", v.posterior.tail_mass_bound},
                          {"table_size", v.posterior.table_size}};
    }
    return j;
}

inline std::string render_estimate_text(const EstimateView& v, int digits) {
    std::ostringstream os;
    const SearchCounts& c = v.counts;
    os << "counts: n_a=" << c.na() << " n_b=" << c.nb() << " n_ab=" << c.nab()
       << "  (x_a=" << c.xa() << ", x_b=" << c.xb() << ", n_f=" << c.nf() << ")\n";
    os << "scenario: " << v.scenario.name() << " (shift " << v.scenario.shift() << ")\n";
    os << "missed items X:\n";
    const auto line = [&](const char* label, const Moment& m, double bound, bool has_bound) {
        os << "  " << label << render_moment(m, digits);
        if (has_bound && m.defined())
            os << "  (error bound " << format_sig(bound, digits) << ")";
        os << "\n";
    };
    line("mean      ", v.moments.mean, v.moments.mean_error_bound, v.moments.has_error_bounds);
    line("sd        ", v.moments.sd, 0.0, false);
    line("variance  ", v.moments.variance, v.moments.variance_error_bound,
         v.moments.has_error_bounds);
    line("skewness  ", v.moments.skewness, 0.0, false);
    line("kurtosis  ", v.moments.kurtosis, 0.0, false);
    if (v.moments.mean.defined()) {
        os << "total items N = n_f + X:\n  mean      "
           << format_sig(v.moments.mean.value() + static_cast<double>(c.nf()), digits) << "\n";
    }
    if (v.include_classical) {
        const ClassicalReport& r = v.classical;
        os << "classical estimators:\n";
        os << "  lincoln-petersen  total " << render_moment(r.lp.total, digits) << "  missed "
           << render_moment(r.lp.missed, digits) << "\n";
        os << "  chapman           total " << format_sig(r.chapman.total, digits) << "  missed "
           << format_sig(r.chapman.missed, digits) << "  (seber sd "
           << format_sig(r.seber_sd, digits) << ")\n";
        const auto ratio_str = [&](double x) {
            return std::isinf(x) ? std::string("infinity") : format_sig(x, digits);
        };
        os << "  poisson           mode " << format_sig(r.poisson.mode_x_star, digits)
           << "  validity x_a/n_ab=" << ratio_str(r.poisson.validity_ratio_a)
           << " x_b/n_ab=" << ratio_str(r.poisson.validity_ratio_b)
           << (r.poisson.reliable ? "  (reliable)" : "  (not reliable)") << "\n";
    }
    if (v.include_posterior) {
        os << "posterior:\n";
        os << "  mode      " << v.posterior.mode << "\n";
        os << "  interval  [" << v.posterior.interval.lower << ", " << v.posterior.interval.upper
           << "] covers " << format_sig(v.posterior.interval.mass_covered, digits)
           << " (target " << format_sig(v.posterior.interval_mass, digits) << ")\n";
        os << "  tail mass bound " << format_sig(v.posterior.tail_mass_bound, digits) << "\n";
    }
    return os.str();
}

// Posterior table as CSV: full-precision pmf with a running cdf.
inline void write_posterior_csv(std::ostream& os, const PosteriorTable& t) {
    os << "x,pmf,cdf\n";
    double cdf = 0.0;
    for (long long x = 0; x <= t.x_max; ++x) {
        const double p = t.pmf(x);
        cdf += p;
        os << x << ',' << format_exact(p) << ',' << format_exact(cdf) << '\n';
    }
}

inline nlohmann::json posterior_json(const PosteriorTable& t) {
    nlohmann::json entries = nlohmann::json::array();
    double cdf = 0.0;
    for (long long x = 0; x <= t.x_max; ++x) {
        const double p = t.pmf(x);
        cdf += p;
        entries.push_back({{"x", x}, {"pmf", p}, {"cdf", cdf}});
    }
    return {{"counts", counts_json(t.counts)},
            {"scenario", scenario_json(t.scenario)},
            {"x_max", t.x_max},
            {"tail_mass_bound", t.tail_mass_bound},
            {"entries", std::move(entries)}};
}

inline nlohmann::json sim_json(const SimResult& r) {
    const SimConfig& cfg = r.config;
    nlohmann::json params;
    if (cfg.mode == SimMode::full_search) {
        params = {{"p_a", cfg.p_a}, {"p_b", cfg.p_b}};
    } else {
        params = {{"n_a", cfg.n_a}, {"n_b", cfg.n_b}};
    }
    nlohmann::json stats = nlohmann::json::array();
    for (const auto& s : r.estimators) {
        stats.push_back({{"name", s.name},
                         {"replicates", s.replicates},
                         {"defined", s.defined},
                         {"fraction_undefined", s.fraction_undefined},
                         {"mean_bias", finite_or_null(s.mean_bias)},
                         {"rmse", finite_or_null(s.rmse)},
                         {"coverage_1sd", finite_or_null(s.coverage_1sd)},
                         {"coverage_2sd", finite_or_null(s.coverage_2sd)},
                         {"coverage_interval", finite_or_null(s.coverage_interval)}});
    }
    return {{"mode", sim_mode_name(cfg.mode)},
            {"true_n", cfg.true_n},
            {"parameters", params},
            {"replicates", cfg.replicates},
            {"seed", cfg.seed},
            {"rng_algorithm", r.rng_algorithm},
            {"analysis_scenario", scenario_json(r.analysis_scenario)},
            {"mismatched_scenario", cfg.mismatched_scenario},
            {"estimators", std::move(stats)}};
}

inline std::string render_sim_text(const SimResult& r, int digits) {
    std::ostringstream os;
    const SimConfig& cfg = r.config;
    os << "simulation: " << sim_mode_name(cfg.mode) << "  true_n=" << cfg.true_n;
    if (cfg.mode == SimMode::full_search)
        os << "  p_a=" << format_sig(cfg.p_a, digits) << " p_b=" << format_sig(cfg.p_b, digits);
    else
        os << "  n_a=" << cfg.n_a << " n_b=" << cfg.n_b;
    os << "  replicates=" << cfg.replicates << "  seed=" << cfg.seed << "\n";
    os << "analysis scenario: " << r.analysis_scenario.name()
       << (cfg.mismatched_scenario ? " (deliberately mismatched)" : "") << "\n";
    for (const auto& s : r.estimators) {
        os << "  " << s.name << ": ";
        if (s.defined == 0) {
            os << "undefined in all replicates\n";
            continue;
        }
        os << "bias " << format_sig(s.mean_bias, digits) << "  rmse " << format_sig(s.rmse, digits)
           << "  undefined " << format_sig(s.fraction_undefined, digits);
        if (!std::isnan(s.coverage_1sd))
            os << "  cover(1sd) " << format_sig(s.coverage_1sd, digits) << "  cover(2sd) "
               << format_sig(s.coverage_2sd, digits);
        if (!std::isnan(s.coverage_interval))
            os << "  cover(interval) " << format_sig(s.coverage_interval, digits);
        os << "\n";
    }
    return os.str();
}

// Per-replicate log as CSV; undefined estimates become empty fields.
inline void write_sim_csv(std::ostream& os, const SimResult& r) {
    os << "index,na,nb,nab,true_missed";
    for (const auto& name : r.config.estimators) os << ',' << name;
    os << '\n';
    for (const auto& row : r.rows) {
        os << row.index << ',' << row.na << ',' << row.nb << ',' << row.nab << ','
           << row.true_missed;
        for (const double v : row.estimates) {
            os << ',';
            if (std::isfinite(v)) os << format_exact(v);
        }
        os << '\n';
    }
}

}  // namespace omest

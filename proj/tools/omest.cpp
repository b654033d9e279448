#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <omest/omest.hpp>

namespace {

struct EstimateArgs {
    long long na = 0, nb = 0, nab = 0;
    std::string scenario = "full";
    bool compare = false;
    bool posterior = false;
    bool json = false;
    double interval_mass = 0.68;
    double tail_tol = 1e-10;
    long long max_terms = 100000000;
    int precision = 0;  // 0 = unset, fall back to env/default
};

int effective_precision(int flag_value) {
    return flag_value > 0 ? flag_value : omest::default_precision();
}

void add_count_options(CLI::App* cmd, EstimateArgs& a) {
    cmd->add_option("--na", a.na, "items found by searcher A")->required();
    cmd->add_option("--nb", a.nb, "items found by searcher B")->required();
    cmd->add_option("--nab", a.nab, "items found by both")->required();
    cmd->add_option("--scenario", a.scenario,
                    "fixed | partial | full | proper-prior | shift:<s> (default full)");
}

void run_estimate(const EstimateArgs& a) {
    const omest::SearchCounts counts(a.na, a.nb, a.nab);
    const omest::Scenario sc = omest::Scenario::parse(a.scenario);

    omest::EstimateView view;
    view.counts = counts;
    view.scenario = sc;
    view.moments = omest::moment_report(counts, sc);
    if (a.compare) {
        view.include_classical = true;
        view.classical = omest::classical_report(counts);
    }
    if (a.posterior) {
        const omest::PosteriorTable table =
            omest::build_table(counts, sc, {a.tail_tol, a.max_terms});
        view.include_posterior = true;
        view.posterior.mode = omest::mode(table);
        view.posterior.interval = omest::credible_interval(table, a.interval_mass);
        view.posterior.interval_mass = a.interval_mass;
        view.posterior.tail_mass_bound = table.tail_mass_bound;
        view.posterior.table_size = table.x_max + 1;
    }

    if (a.json)
        std::cout << omest::estimate_json(view).dump(2) << "\n";
    else
        std::cout << omest::render_estimate_text(view, effective_precision(a.precision));
}

void run_posterior(const EstimateArgs& a) {
    const omest::SearchCounts counts(a.na, a.nb, a.nab);
    const omest::Scenario sc = omest::Scenario::parse(a.scenario);
    const omest::PosteriorTable table = omest::build_table(counts, sc, {a.tail_tol, a.max_terms});
    if (a.json)
        std::cout << omest::posterior_json(table).dump(2) << "\n";
    else
        omest::write_posterior_csv(std::cout, table);
}

struct BatchArgs {
    std::string input = "-";
    std::string output = "-";
    std::string scenario = "full";
};

void run_batch(const BatchArgs& a) {
    const omest::Scenario sc = omest::Scenario::parse(a.scenario);

    std::ifstream fin;
    if (a.input != "-") {
        fin.open(a.input);
        if (!fin) throw omest::ValidationError("cannot open input file: " + a.input);
    }
    std::istream& in = a.input == "-" ? std::cin : fin;

    std::ofstream fout;
    if (a.output != "-") {
        fout.open(a.output);
        if (!fout) throw omest::ValidationError("cannot open output file: " + a.output);
    }
    std::ostream& out = a.output == "-" ? std::cout : fout;

    const omest::BatchStats stats = omest::process_batch(in, out, sc);
    std::cerr << "processed " << (stats.ok + stats.failed) << " rows (" << stats.ok << " ok, "
              << stats.failed << " failed)\n";
}

struct SimulateArgs {
    std::string mode = "fixed";
    long long true_n = 0;
    double p_a = 0.5, p_b = 0.5;
    long long n_a = 0, n_b = 0;
    long long replicates = 1000;
    uint64_t seed = 42;
    std::string estimators = "exact,chapman,lp";
    double interval_mass = 0.68;
    bool mismatched = false;
    bool json = false;
    std::string log_path;
    int precision = 0;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void run_simulate(const SimulateArgs& a) {
    omest::SimConfig cfg;
    if (a.mode == "full" || a.mode == "full-search")
        cfg.mode = omest::SimMode::full_search;
    else if (a.mode == "fixed" || a.mode == "fixed-sample")
        cfg.mode = omest::SimMode::fixed_sample;
    else
        throw omest::ValidationError("unknown mode \"" + a.mode + "\" (expected full or fixed)");
    cfg.true_n = a.true_n;
    cfg.p_a = a.p_a;
    cfg.p_b = a.p_b;
    cfg.n_a = a.n_a;
    cfg.n_b = a.n_b;
    cfg.replicates = a.replicates;
    cfg.seed = a.seed;
    cfg.estimators = split_list(a.estimators);
    if (cfg.estimators.empty()) throw omest::ValidationError("estimator list is empty");
    cfg.interval_mass = a.interval_mass;
    cfg.mismatched_scenario = a.mismatched;
    cfg.record_replicates = !a.log_path.empty();

    const omest::SimResult result = omest::run_simulation(cfg);

    if (!a.log_path.empty()) {
        std::ofstream log(a.log_path);
        if (!log) throw omest::ValidationError("cannot open log file: " + a.log_path);
        omest::write_sim_csv(log, result);
    }

    if (a.json)
        std::cout << omest::sim_json(result).dump(2) << "\n";
    else
        std::cout << omest::render_sim_text(result, effective_precision(a.precision));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Estimate how many items two overlapping searches both missed"};
    app.require_subcommand(1);

    EstimateArgs est;
    CLI::App* estimate = app.add_subcommand("estimate", "moment estimates for one set of counts");
    add_count_options(estimate, est);
    estimate->add_flag("--compare", est.compare, "include classical estimators");
    estimate->add_flag("--posterior", est.posterior, "include posterior mode and interval");
    estimate->add_option("--interval-mass", est.interval_mass, "credible mass (default 0.68)");
    estimate->add_option("--tail-tol", est.tail_tol, "posterior truncation tolerance");
    estimate->add_option("--max-terms", est.max_terms, "posterior term budget");
    estimate->add_flag("--json", est.json, "emit JSON instead of text");
    estimate->add_option("--precision", est.precision, "significant digits for text output")
        ->check(CLI::Range(1, 17));
    estimate->callback([&est] { run_estimate(est); });

    EstimateArgs cmp;
    cmp.compare = true;
    CLI::App* compare = app.add_subcommand("compare", "estimate plus classical estimators");
    add_count_options(compare, cmp);
    compare->add_flag("--posterior", cmp.posterior, "include posterior mode and interval");
    compare->add_option("--interval-mass", cmp.interval_mass, "credible mass (default 0.68)");
    compare->add_option("--tail-tol", cmp.tail_tol, "posterior truncation tolerance");
    compare->add_option("--max-terms", cmp.max_terms, "posterior term budget");
    compare->add_flag("--json", cmp.json, "emit JSON instead of text");
    compare->add_option("--precision", cmp.precision, "significant digits for text output")
        ->check(CLI::Range(1, 17));
    compare->callback([&cmp] { run_estimate(cmp); });

    EstimateArgs post;
    CLI::App* posterior = app.add_subcommand("posterior", "tabulated posterior distribution");
    add_count_options(posterior, post);
    posterior->add_option("--tail-tol", post.tail_tol, "truncation tolerance");
    posterior->add_option("--max-terms", post.max_terms, "term budget");
    posterior->add_flag("--json", post.json, "emit JSON instead of CSV");
    posterior->callback([&post] { run_posterior(post); });

    BatchArgs bat;
    CLI::App* batch = app.add_subcommand("batch", "process a CSV of count rows");
    batch->add_option("--input", bat.input, "input CSV path, - for stdin");
    batch->add_option("--output", bat.output, "output CSV path, - for stdout");
    batch->add_option("--scenario", bat.scenario,
                      "fixed | partial | full | proper-prior | shift:<s> (default full)");
    batch->callback([&bat] { run_batch(bat); });

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "sampling experiments with known truth");
    simulate->add_option("--mode", sim.mode, "full | fixed (default fixed)");
    simulate->add_option("--true-n", sim.true_n, "true number of items")->required();
    simulate->add_option("--pa", sim.p_a, "capture probability for A (full mode)");
    simulate->add_option("--pb", sim.p_b, "capture probability for B (full mode)");
    simulate->add_option("--na", sim.n_a, "sample size for A (fixed mode)");
    simulate->add_option("--nb", sim.n_b, "sample size for B (fixed mode)");
    simulate->add_option("--replicates", sim.replicates, "number of replicates (default 1000)");
    simulate->add_option("--seed", sim.seed, "RNG seed (default 42)");
    simulate->add_option("--estimators", sim.estimators,
                         "comma list of exact,chapman,lp,credible");
    simulate->add_option("--interval-mass", sim.interval_mass,
                         "credible mass for the credible estimator");
    simulate->add_flag("--mismatched", sim.mismatched,
                       "analyse each replicate under the wrong scenario family");
    simulate->add_flag("--json", sim.json, "emit JSON instead of text");
    simulate->add_option("--log", sim.log_path, "write per-replicate CSV to this file");
    simulate->add_option("--precision", sim.precision, "significant digits for text output")
        ->check(CLI::Range(1, 17));
    simulate->callback([&sim] { run_simulate(sim); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const omest::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

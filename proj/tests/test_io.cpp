#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>
#include <string>

#include <omest/batch.hpp>
#include <omest/omest.hpp>

#include "support/schema_check.hpp"

using namespace omest;
using nlohmann::json;

TEST_CASE("significant-figure formatting", "[io]") {
    CHECK(format_sig(0.125, 4) == "0.125");
    CHECK(format_sig(8.25, 4) == "8.25");
    CHECK(format_sig(12345.678, 4) == "1.235e+04");
    CHECK(format_sig(0.000123456, 4) == "0.0001235");
    CHECK(format_sig(3.9, 2) == "3.9");
    CHECK(format_sig(-42.0, 4) == "-42");
}

TEST_CASE("precision resolution order: flag, env, default", "[io]") {
    unsetenv("OMEST_PRECISION");
    CHECK(default_precision() == 4);
    setenv("OMEST_PRECISION", "6", 1);
    CHECK(default_precision() == 6);
    setenv("OMEST_PRECISION", "abc", 1);
    CHECK(default_precision() == 4);
    setenv("OMEST_PRECISION", "0", 1);
    CHECK(default_precision() == 4);
    setenv("OMEST_PRECISION", "18", 1);
    CHECK(default_precision() == 4);
    unsetenv("OMEST_PRECISION");
}

TEST_CASE("undefined moments render as a threshold statement", "[io]") {
    CHECK(render_undefined(3) == "undefined (requires n_ab >= 3)");
    CHECK(render_moment(Moment::undefined(4), 4) == "undefined (requires n_ab >= 4)");
    CHECK(render_moment(Moment::of(0.5), 4) == "0.5");

    const json j = moment_json(Moment::undefined(2));
    CHECK(j["defined"] == false);
    CHECK(j["requires_min_nab"] == 2);
    CHECK_FALSE(j.contains("value"));
}

TEST_CASE("text report shows both scales and never prints NaN", "[io]") {
    const SearchCounts c(20, 15, 3);  // sd undefined at s=0
    EstimateView v;
    v.counts = c;
    v.scenario = Scenario::fixed_sample();
    v.moments = moment_report(c, v.scenario);
    const std::string text = render_estimate_text(v, 4);

    CHECK(text.find("x_a=17") != std::string::npos);
    CHECK(text.find("mean      234") != std::string::npos);  // 18*13/1
    CHECK(text.find("undefined (requires n_ab >= 4)") != std::string::npos);
    CHECK(text.find("total items N") != std::string::npos);
    CHECK(text.find("nan") == std::string::npos);
    CHECK(text.find("inf") == std::string::npos);
}

TEST_CASE("estimate JSON validates against its schema", "[io]") {
    const SearchCounts c(20, 15, 10);
    EstimateView v;
    v.counts = c;
    v.scenario = Scenario::full_search();
    v.moments = moment_report(c, v.scenario);
    v.include_classical = true;
    v.classical = classical_report(c);

    const PosteriorTable t = build_table(c, v.scenario);
    v.include_posterior = true;
    v.posterior.mode = mode(t);
    v.posterior.interval = credible_interval(t, 0.68);
    v.posterior.interval_mass = 0.68;
    v.posterior.tail_mass_bound = t.tail_mass_bound;
    v.posterior.table_size = t.x_max + 1;

    const json doc = estimate_json(v);
    const json schema = schemacheck::load_schema("estimate_report.schema.json");
    std::string why;
    const bool ok = schemacheck::valid(schema, doc, why);
    INFO(why);
    CHECK(ok);

    CHECK(doc["error_bounds"]["mean"].get<double>() > 0.0);
    CHECK(doc["total_mean"]["value"].get<double>()
          == Catch::Approx(c.nf() + v.moments.mean.value()));
}

TEST_CASE("undefined cells survive the JSON round trip", "[io]") {
    const SearchCounts c(9, 8, 0);
    EstimateView v;
    v.counts = c;
    v.scenario = Scenario::fixed_sample();
    v.moments = moment_report(c, v.scenario);
    v.include_classical = true;
    v.classical = classical_report(c);

    const json doc = estimate_json(v);
    const json schema = schemacheck::load_schema("estimate_report.schema.json");
    std::string why;
    const bool ok = schemacheck::valid(schema, doc, why);
    INFO(why);
    CHECK(ok);
    CHECK(doc["missed"]["mean"]["defined"] == false);
    CHECK(doc["classical"]["lincoln_petersen"]["total"]["defined"] == false);
    CHECK(doc["classical"]["poisson"]["validity_ratio_a"] == "infinity");
}

TEST_CASE("schema checker rejects broken documents", "[io]") {
    const json schema = schemacheck::load_schema("estimate_report.schema.json");
    json doc = {{"counts", {{"na", 1}}}};
    std::string why;
    CHECK_FALSE(schemacheck::valid(schema, doc, why));
    CHECK(!why.empty());

    // oneOf must match exactly one branch.
    const json moment_schema = {{"oneOf",
                                 {{{"type", "object"}, {"required", {"defined", "value"}}},
                                  {{"type", "object"}, {"required", {"defined"}}}}}};
    const json both = {{"defined", true}, {"value", 1.0}};
    CHECK_FALSE(schemacheck::valid(moment_schema, both, why));
}

TEST_CASE("posterior CSV and JSON carry a coherent distribution", "[io]") {
    const SearchCounts c(20, 15, 10);
    const PosteriorTable t = build_table(c, Scenario::fixed_sample());

    std::ostringstream os;
    write_posterior_csv(os, t);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "x,pmf,cdf");
    double last_cdf = 0.0;
    long long rows = 0;
    while (std::getline(is, line)) {
        const auto c1 = line.find(','), c2 = line.rfind(',');
        REQUIRE(c1 != std::string::npos);
        REQUIRE(c2 > c1);
        const double pmf = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const double cdf = std::stod(line.substr(c2 + 1));
        CHECK(pmf >= 0.0);
        CHECK(cdf >= last_cdf - 1e-15);
        last_cdf = cdf;
        ++rows;
    }
    CHECK(rows == t.x_max + 1);
    CHECK(last_cdf == Catch::Approx(1.0).margin(1e-8));

    const json doc = posterior_json(t);
    const json schema = schemacheck::load_schema("posterior_table.schema.json");
    std::string why;
    const bool ok = schemacheck::valid(schema, doc, why);
    INFO(why);
    CHECK(ok);
    CHECK(doc["entries"].size() == static_cast<size_t>(t.x_max + 1));
}

TEST_CASE("simulation JSON validates against its schema", "[io]") {
    SimConfig cfg;
    cfg.mode = SimMode::fixed_sample;
    cfg.true_n = 60;
    cfg.n_a = 20;
    cfg.n_b = 20;
    cfg.replicates = 50;
    cfg.seed = 7;
    cfg.estimators = {"exact", "chapman", "lp"};
    const SimResult r = run_simulation(cfg);

    const json doc = sim_json(r);
    const json schema = schemacheck::load_schema("sim_result.schema.json");
    std::string why;
    const bool ok = schemacheck::valid(schema, doc, why);
    INFO(why);
    CHECK(ok);
    CHECK(doc["rng_algorithm"] == "splitmix64");
    CHECK(doc["estimators"].size() == 3);
}

TEST_CASE("per-replicate CSV: undefined estimates are empty fields", "[io]") {
    SimConfig cfg;
    cfg.mode = SimMode::fixed_sample;
    cfg.true_n = 40;
    cfg.n_a = 6;
    cfg.n_b = 6;
    cfg.replicates = 200;
    cfg.seed = 9;
    cfg.estimators = {"exact"};
    cfg.record_replicates = true;
    const SimResult r = run_simulation(cfg);

    std::ostringstream os;
    write_sim_csv(os, r);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "index,na,nb,nab,true_missed,exact");
    bool saw_empty = false, saw_value = false;
    while (std::getline(is, line)) {
        if (line.back() == ',' || line.rfind(",,") != std::string::npos)
            saw_empty = true;
        else
            saw_value = true;
        CHECK(line.find("nan") == std::string::npos);
    }
    CHECK(saw_empty);
    CHECK(saw_value);
}

TEST_CASE("batch processing keeps going past bad rows", "[io]") {
    std::istringstream in(
        "id,na,nb,nab\n"
        "alpha,20,15,10\n"
        "\n"
        "bad-overlap,3,4,5\n"
        "not-numeric,x,4,2\n"
        "short,1,2\n"
        "\"quoted, id\",30,25,20\n"
        "sparse,9,8,0\n");
    std::ostringstream out;
    const BatchStats stats = process_batch(in, out, Scenario::fixed_sample());
    CHECK(stats.ok == 3);
    CHECK(stats.failed == 3);

    std::istringstream res(out.str());
    std::string line;
    REQUIRE(std::getline(res, line));
    CHECK(line == "id,na,nb,nab,mean,sd,skewness,kurtosis,chapman,lp,seber_sd,status");

    REQUIRE(std::getline(res, line));  // alpha
    CHECK(line.find("alpha,20,15,10,8.25,") == 0);
    CHECK(line.rfind(",ok") == line.size() - 3);

    REQUIRE(std::getline(res, line));  // bad-overlap
    CHECK(line.find("bad-overlap") == 0);
    CHECK(line.find("error:") != std::string::npos);

    REQUIRE(std::getline(res, line));  // not-numeric
    CHECK(line.find("error: counts must be integers") != std::string::npos);

    REQUIRE(std::getline(res, line));  // short
    CHECK(line.find("expected 4 fields") != std::string::npos);

    REQUIRE(std::getline(res, line));  // quoted id survives round trip
    CHECK(line.find("\"quoted, id\",30,25,20,") == 0);

    REQUIRE(std::getline(res, line));  // sparse: undefined cells, lp undefined
    CHECK(line.find("sparse,9,8,0,undefined,undefined,undefined,undefined,") == 0);
    CHECK(line.find(",undefined,") != std::string::npos);
    CHECK(line.rfind(",ok") == line.size() - 3);
}

TEST_CASE("batch rejects a wrong header or empty input", "[io]") {
    std::istringstream empty("");
    std::ostringstream out;
    CHECK_THROWS_AS(process_batch(empty, out, Scenario::full_search()), ValidationError);

    std::istringstream wrong("a,b,c,d\n1,2,3,4\n");
    CHECK_THROWS_AS(process_batch(wrong, out, Scenario::full_search()), ValidationError);
}

TEST_CASE("csv field quoting round-trips", "[io]") {
    CHECK(detail::csv_field("plain") == "plain");
    CHECK(detail::csv_field("a,b") == "\"a,b\"");
    CHECK(detail::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    const auto fields = detail::parse_csv_line("\"a,b\",2,\"say \"\"hi\"\"\",4");
    REQUIRE(fields.size() == 4);
    CHECK(fields[0] == "a,b");
    CHECK(fields[2] == "say \"hi\"");
}

TEST_CASE("render_sim_text summarizes without NaN", "[io]") {
    SimConfig cfg;
    cfg.mode = SimMode::full_search;
    cfg.true_n = 50;
    cfg.p_a = 0.7;
    cfg.p_b = 0.6;
    cfg.replicates = 40;
    cfg.seed = 3;
    cfg.estimators = {"exact", "lp"};
    const SimResult r = run_simulation(cfg);
    const std::string text = render_sim_text(r, 4);
    CHECK(text.find("full-search") != std::string::npos);
    CHECK(text.find("exact:") != std::string::npos);
    CHECK(text.find("nan") == std::string::npos);
}

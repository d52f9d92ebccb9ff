#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "subfou/errors.hpp"
#include "subfou/io.hpp"

using namespace subfou;

TEST_SUITE("io") {

TEST_CASE("paths csv round trip is lossless") {
    const auto b = simulate_sfou(build_grid(1.0, 50), derive_constants(0.7), -1.0, 3, SeedPolicy{4});
    std::stringstream ss;
    write_paths_csv(ss, b);
    std::string header;
    std::getline(std::stringstream(ss.str()), header);
    CHECK(header == "rep,t,value");
    const auto tab = read_paths_csv(ss);
    CHECK(tab.grid.n == 50);
    CHECK(tab.grid.T == 1.0);
    CHECK(tab.rep_ids == std::vector<long>{0, 1, 2});
    CHECK(tab.values == b.values);
}

TEST_CASE("paths csv errors") {
    auto read = [](const std::string& s) {
        std::stringstream ss(s);
        return read_paths_csv(ss);
    };
    CHECK_THROWS_AS(read("a,b,c\n"), ConfigError);
    CHECK_THROWS_AS(read("rep,t,value\n"), ConfigError);
    CHECK_THROWS_AS(read("rep,t,value\n0,0,0\n0,0.5,1\n0,1,x\n"), ConfigError);
    CHECK_THROWS_AS(read("rep,t,value\n0,0,0\n0,0.5,1\n0,1,2\n1,0,0\n1,0.4,1\n1,1,2\n"), ConfigError);
    CHECK_THROWS_AS(read("rep,t,value\n0,0,0\n0,0.2,1\n0,1,2\n"), ConfigError);
    CHECK_THROWS_AS(read("rep,t,value\n0,0,0\n1,0,0\n0,0.5,1\n"), ConfigError);
    CHECK_NOTHROW(read("rep,t,value\n0,0,0\n0,0.5,1\n0,1,2\n"));
}

TEST_CASE("estimate json schema") {
    EstimateRow row;
    row.rep = 7;
    row.result.theta_hat = -0.9;
    row.result.obs_info = 4.5;
    row.result.log_lik_at_hat = 1.8225;
    row.result.T = 10;
    row.result.n = 1000;
    row.result.H = 0.7;
    std::stringstream ss;
    write_estimates_json(ss, {row});
    const auto j = nlohmann::json::parse(ss.str());
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 1);
    CHECK(j[0].size() == 7);
    for (const char* k : {"rep", "theta_hat", "obs_info", "log_lik", "T", "n", "H"}) CHECK(j[0].contains(k));
    CHECK(j[0]["theta_hat"].get<double>() == -0.9);
    CHECK(j[0]["n"].get<int>() == 1000);
}

TEST_CASE("report csv headers") {
    ExperimentReport r;
    r.horizons.resize(2);
    r.horizons[0].tail = {{0.5, 0.1, 0.9, true}};
    const std::pair<const char*, const char*> cases[] = {
        {"consistency", "T,median_err,median_info,mean_theta,pass"},
        {"normality", "T,ks,ks_u,eta2_hat,mean_info,pass"},
        {"berry-esseen", "T,delta,eps,ks,p_cond,bound,pass"},
        {"tail", "T,d,empirical,bound,pass"},
    };
    for (const auto& [name, header] : cases) {
        r.experiment = name;
        std::stringstream ss;
        write_report_csv(ss, r);
        std::string first;
        std::getline(ss, first);
        CHECK(first == header);
    }
    r.experiment = "nope";
    std::stringstream ss;
    CHECK_THROWS_AS(write_report_csv(ss, r), ConfigError);
}

TEST_CASE("report json is flat and has no runtime") {
    ExperimentReport r;
    r.experiment = "tail";
    r.runtime_seconds = 12.5;
    r.checks["x"] = true;
    r.horizons.resize(1);
    r.horizons[0].tail = {{0.5, 0.1, 0.9, true}};
    std::stringstream ss;
    write_report_json(ss, r);
    const auto j = nlohmann::json::parse(ss.str());
    CHECK_FALSE(j.contains("runtime_seconds"));
    CHECK(j["check_x"] == true);
    for (const auto& [k, v] : j["horizons"][0].items()) CHECK_FALSE(v.is_structured());
    CHECK(j["horizons"][0]["tail_bound_d=0.5"] == 0.9);
}

TEST_CASE("config parser") {
    const std::set<std::string> keys{"h", "reps", "horizons"};
    std::stringstream ok("# comment\nh = 0.7   # trailing\n\n  reps=200\nhorizons = 5, 10,20\n");
    const auto m = parse_config(ok, keys);
    CHECK(m.at("h") == "0.7");
    CHECK(m.at("reps") == "200");
    CHECK(parse_list(m.at("horizons")) == std::vector<double>{5, 10, 20});
    auto parse = [&](const std::string& s) {
        std::stringstream ss(s);
        return parse_config(ss, keys);
    };
    CHECK_THROWS_AS(parse("x = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("h 0.7\n"), ConfigError);
    CHECK_THROWS_AS(parse("h =\n"), ConfigError);
    CHECK_THROWS_AS(parse("h = 1\nh = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_real("h", "0.7x"), ConfigError);
    CHECK_THROWS_AS(parse_integer("reps", "2.5"), ConfigError);
    CHECK_THROWS_AS(parse_list("1,,2"), ConfigError);
    CHECK(parse_real("h", " -1.5 ") == -1.5);
}

}

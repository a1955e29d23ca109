// End-to-end coverage of the command-line front end, driven in-process so the
// tests see exact exit codes and byte-for-byte output.
#include "rmd/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliOutcome {
    int code;
    std::string out;
    std::string err;
};

CliOutcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = rmd::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) {
    return std::string(RMD_FIXTURE_DIR) + "/" + name;
}

rmd::Json parse_out(const CliOutcome& r) { return rmd::Json::parse(r.out); }

}  // namespace

TEST_CASE("single incentive check passes and fails with the right exit codes") {
    const auto pass = invoke({"ic", "check", fixture("split-market.json"), "--mode", "robust"});
    CHECK(pass.code == 0);
    CHECK(pass.out.find("ic.check: pass") != std::string::npos);

    const auto fail = invoke({"ic", "check", fixture("split-market.json"), "--mode", "expost"});
    CHECK(fail.code == 1);
    CHECK(fail.out.find("ic.check: fail") != std::string::npos);
}

TEST_CASE("json envelope for a single operation is pinned byte for byte") {
    const auto first =
        invoke({"ic", "check", fixture("split-market.json"), "--mode", "expost", "--json"});
    const auto second =
        invoke({"ic", "check", fixture("split-market.json"), "--mode", "expost", "--json"});
    REQUIRE(first.code == 1);
    CHECK(first.out == second.out);  // deterministic output, no timing or machine state

    const rmd::Json env = parse_out(first);
    CHECK(env["tool"] == "rmd");
    CHECK(env["op"] == "ic.check");
    CHECK(env["verdict"] == "fail");
    CHECK(env["report"]["slack"] == "-1/1");
    CHECK(env["digest"] == "a83764751120c259");
}

TEST_CASE("digest covers the envelope body") {
    const auto r = invoke({"ic", "check", fixture("split-market.json"), "--json"});
    const rmd::Json env = parse_out(r);
    rmd::Json body = env;
    body.erase("digest");
    CHECK(env["digest"] == rmd::fnv1a_digest(body.dump()));
}

TEST_CASE("run executes the request list and reports an aggregate verdict") {
    const auto r = invoke({"run", fixture("split-market.json"), "--json"});
    CHECK(r.code == 1);
    const rmd::Json env = parse_out(r);
    REQUIRE(env.contains("requests"));
    REQUIRE(env["requests"].size() == 5);
    CHECK(env["verdict"] == "fail");
    CHECK(env["requests"][0]["op"] == "beliefs.check");
    CHECK(env["requests"][0]["verdict"] == "pass");
    CHECK(env["requests"][1]["verdict"] == "pass");   // robust incentives hold
    CHECK(env["requests"][2]["verdict"] == "fail");   // ex post incentives do not
    CHECK(env["requests"][3]["verdict"] == "fail");   // payments drift off the envelope
    CHECK(env["requests"][4]["verdict"] == "fail");   // pipeline inherits the failures
}

TEST_CASE("run keeps the requests array even for a single request") {
    const auto r = invoke({"run", fixture("message-game.json"), "--json"});
    CHECK(r.code == 0);
    const rmd::Json env = parse_out(r);
    REQUIRE(env.contains("requests"));
    REQUIRE(env["requests"].size() == 1);
    CHECK_FALSE(env.contains("op"));
    CHECK(env["requests"][0]["op"] == "reveal.transform");
    CHECK(env["verdict"] == "pass");
}

TEST_CASE("fixture verdicts are stable") {
    struct Row {
        const char* file;
        int code;
    };
    const Row rows[] = {
        {"split-market.json", 1},      {"second-price.json", 0},
        {"first-price.json", 1},       {"correlated-points.json", 0},
        {"common-ambiguity.json", 1},  {"contaminated-corners.json", 0},
        {"message-game.json", 0},      {"compare-payments.json", 0},
    };
    for (const Row& row : rows) {
        INFO(row.file);
        CHECK(invoke({"run", fixture(row.file), "--json"}).code == row.code);
    }
}

TEST_CASE("envelope tolerance flag changes the verdict") {
    CHECK(invoke({"envelope", "check", fixture("second-price.json"), "--tau", "0"}).code == 0);
    CHECK(invoke({"envelope", "check", fixture("first-price.json")}).code == 0);
    CHECK(invoke({"envelope", "check", fixture("first-price.json"), "--tau", "1/4"}).code == 1);
    CHECK(invoke({"envelope", "check", fixture("first-price.json"), "--tau", "0"}).code == 1);
}

TEST_CASE("oracle cross-checks are accepted on the relevant subcommands") {
    const auto pi =
        invoke({"extract", "pi", fixture("correlated-points.json"), "--oracle", "--json"});
    CHECK(pi.code == 0);
    const rmd::Json env = parse_out(pi);
    CHECK(env["report"]["oracle_agreement"] == true);
    CHECK(env["report"]["oracle_violation_found"] == false);

    const auto vse =
        invoke({"extract", "vse", fixture("common-ambiguity.json"), "--oracle", "--json"});
    CHECK(vse.code == 0);
    const rmd::Json venv = parse_out(vse);
    CHECK(venv["report"]["p_star"] == "1/2");
    CHECK(venv["report"]["oracle_value"] == "1/2");
    CHECK(venv["report"]["oracle_agreement"] == true);
}

TEST_CASE("capability limits surface as verdicts with exit code 3") {
    // Identical belief sets admit no separating menu; the builder must say so
    // rather than emit a wrong menu.
    const auto r = invoke({"extract", "menu", fixture("common-ambiguity.json"), "--json"});
    CHECK(r.code == 3);
    const rmd::Json env = parse_out(r);
    CHECK(env["verdict"] == "capability_error");
    CHECK(env["report"]["message"].get<std::string>().find("convex hull") != std::string::npos);
}

TEST_CASE("capability error inside a request list dominates the aggregate verdict") {
    const rmd::Json scenario{
        {"values", rmd::Json::array({"0", "1"})},
        {"beliefs", rmd::Json::array({rmd::Json{{"simplex", 2}}, rmd::Json{{"simplex", 2}}})},
        {"requests", rmd::Json::array({rmd::Json{{"op", "extract.pi"}},
                                       rmd::Json{{"op", "extract.menu"}}})},
    };
    const std::string path = "/tmp/rmd_cli_capability.json";
    {
        std::ofstream f(path);
        f << scenario.dump();
    }
    const auto r = invoke({"run", path, "--json"});
    CHECK(r.code == 3);
    const rmd::Json env = parse_out(r);
    CHECK(env["verdict"] == "capability_error");
    CHECK(env["requests"][0]["verdict"] == "fail");
    CHECK(env["requests"][1]["verdict"] == "capability_error");
}

TEST_CASE("malformed input exits with code 2 and a diagnostic") {
    const auto missing = invoke({"ic", "check", fixture("no-such-file.json")});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("input error") != std::string::npos);
    CHECK(missing.err.find("cannot open") != std::string::npos);

    const std::string bad = "/tmp/rmd_cli_bad.json";
    {
        std::ofstream f(bad);
        f << R"({"model": {"kind": "quasilinear", "grid": [0, 0.5, 1],)"
          << R"( "states": ["a"], "q": [[1],[1],[1]], "p": [[0],[0],[0]]}})";
    }
    const auto floaty = invoke({"ic", "check", bad});
    CHECK(floaty.code == 2);
    CHECK(floaty.err.find("$.model.grid[1]") != std::string::npos);
    CHECK(floaty.err.find("p/q") != std::string::npos);

    const std::string unknown_op = "/tmp/rmd_cli_unknown_op.json";
    {
        std::ofstream f(unknown_op);
        f << R"({"requests": [{"op": "no.such.op"}]})";
    }
    const auto unknown = invoke({"run", unknown_op});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("unknown operation") != std::string::npos);
}

TEST_CASE("missing pieces are named in the error") {
    const auto r = invoke({"extract", "pi", fixture("split-market.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("values") != std::string::npos);
}

TEST_CASE("usage errors and help") {
    const auto nothing = invoke({});
    CHECK(nothing.code == 2);

    const auto badsub = invoke({"frobnicate", "x.json"});
    CHECK(badsub.code == 2);

    const auto help = invoke({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("ic") != std::string::npos);
    CHECK(help.out.find("envelope") != std::string::npos);
    CHECK(help.out.find("extract") != std::string::npos);

    const auto sub_help = invoke({"extract", "--help"});
    CHECK(sub_help.code == 0);
    CHECK(sub_help.out.find("vse") != std::string::npos);
}

TEST_CASE("virtual extraction builds a menu at the requested bound") {
    const auto r = invoke({"extract", "virtual", fixture("correlated-points.json"), "--eps",
                           "1/100", "--json"});
    CHECK(r.code == 0);
    const rmd::Json env = parse_out(r);
    CHECK(env["verdict"] == "pass");
    CHECK(env["report"]["eps"] == "1/100");
    CHECK(env["report"]["audit"]["pass"] == true);

    // A bound below the attainable optimum is refused rather than fudged.
    const auto too_tight = invoke({"extract", "virtual", fixture("contaminated-corners.json"),
                                   "--eps", "1/100", "--json"});
    CHECK(too_tight.code == 3);
    const rmd::Json tight_env = parse_out(too_tight);
    CHECK(tight_env["verdict"] == "capability_error");
    CHECK(tight_env["report"]["message"].get<std::string>().find("1/14") != std::string::npos);

    const auto missing_eps =
        invoke({"extract", "virtual", fixture("contaminated-corners.json")});
    CHECK(missing_eps.code == 2);
}

TEST_CASE("payment comparison flags are forwarded") {
    const auto r = invoke({"payments", "compare", fixture("compare-payments.json"),
                           "--indifferent-type", "0", "--json"});
    const rmd::Json env = parse_out(r);
    CHECK(env["report"]["same_allocation"] == true);
    CHECK(env["report"]["constant_offsets"] == true);
}

TEST_CASE("collapse reports the shared-contract components") {
    const auto wide = invoke({"extract", "collapse", fixture("common-ambiguity.json"), "--json"});
    REQUIRE(wide.code == 0);
    const rmd::Json report = parse_out(wide)["report"];
    CHECK(report["component_count"] == 1);
    CHECK(report["single_contract_regime"] == true);
    CHECK(report["edges"].size() == 1);
}

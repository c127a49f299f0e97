#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "orthobase/cli.hpp"
#include "orthobase/json_io.hpp"

using namespace orthobase;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult drive(RunConfig cfg, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    int code = run(cfg, in, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp_path(const std::string& name) {
    return std::string("cli_test_") + name;
}

}  // namespace

TEST_CASE("system JSON round-trips byte-stably") {
    OrthoSystem s{4, 5, SystemKind::POrthonormal, {{2, 1, 0, 0}, {0, 0, 2, 1}}};
    auto j = system_to_json(s);
    auto text = j.dump();
    auto back = system_from_json(parse_json(text));
    CHECK(back == s);
    CHECK(system_to_json(back).dump() == text);
    // Field order is pinned.
    CHECK(text.find("\"n\"") < text.find("\"p\""));
    CHECK(text.find("\"p\"") < text.find("\"kind\""));
    CHECK(text.find("\"kind\"") < text.find("\"vectors\""));
}

TEST_CASE("kind defaults to p-orthonormal when absent") {
    auto s = system_from_json(parse_json(R"({"n":4,"p":5,"vectors":[[2,1,0,0]]})"));
    CHECK(s.kind == SystemKind::POrthonormal);
    CHECK(s.p == 5);
}

TEST_CASE("extend command pinned example") {
    RunConfig c;
    c.command = "extend";
    c.input = R"({"n":4,"p":5,"vectors":[[2,1,0,0]]})";
    c.verbosity = 0;
    auto r = drive(c);
    CHECK(r.code == exit_ok);
    auto j = parse_json(r.out);
    CHECK(j["status"] == "extended");
    CHECK(j["base"].size() == 4);
    CHECK(j["methods"] == json::array({"rotate", "support2", "exterior"}));
    auto base = system_from_json(json{{"n", 4}, {"p", 5}, {"vectors", j["base"]}});
    CHECK(validate_system(base).valid);
}

TEST_CASE("extend reads stdin by default") {
    RunConfig c;
    c.command = "extend";
    c.verbosity = 0;
    auto r = drive(c, R"({"n":4,"p":4,"vectors":[[1,1,1,1]]})");
    CHECK(r.code == exit_ok);
    auto j = parse_json(r.out);
    CHECK(j["methods"][1] == "search");
}

TEST_CASE("validate command reports violations and support") {
    RunConfig c;
    c.command = "validate";
    c.input = R"({"n":4,"p":3,"vectors":[[1,1,0,0]]})";
    c.verbosity = 0;
    auto r = drive(c);
    CHECK(r.code == exit_ok);
    auto j = parse_json(r.out);
    CHECK(j["valid"] == false);
    CHECK(j["violations"].size() == 1);

    c.input = R"({"n":4,"p":5,"vectors":[[2,1,0,0],[0,0,2,1]]})";
    auto r2 = drive(c);
    auto j2 = parse_json(r2.out);
    CHECK(j2["valid"] == true);
    CHECK(j2["supp"] == json::array({1, 2, 3, 4}));
    CHECK(j2["parity_ok"] == true);
}

TEST_CASE("snf command accepts bare rows and emits L,D,R,factors") {
    RunConfig c;
    c.command = "snf";
    c.input = "[[2,1,0,0],[0,0,2,1]]";
    c.verbosity = 0;
    auto r = drive(c);
    CHECK(r.code == exit_ok);
    auto j = parse_json(r.out);
    CHECK(j["factors"] == json::array({1, 1}));
    auto L = Mat::from_rows(vectors_from_json(j["L"], "L"));
    auto D = Mat::from_rows(vectors_from_json(j["D"], "D"));
    auto R = Mat::from_rows(vectors_from_json(j["R"], "R"));
    auto V = Mat::from_rows({{2, 1, 0, 0}, {0, 0, 2, 1}});
    CHECK(mat_mul(mat_mul(L, V), R) == D);
}

TEST_CASE("complement command") {
    RunConfig c;
    c.command = "complement";
    c.input = R"({"n":4,"p":5,"vectors":[[2,1,0,0],[0,0,2,1]]})";
    c.verbosity = 0;
    auto r = drive(c);
    CHECK(r.code == exit_ok);
    auto j = parse_json(r.out);
    CHECK(j["basis"].size() == 2);
}

TEST_CASE("parse errors exit with code 2 and a pointered message") {
    RunConfig c;
    c.command = "extend";
    c.verbosity = 0;
    c.input = R"({"n":4,"p":5,"vectors":"nope"})";
    auto r = drive(c);
    CHECK(r.code == exit_invalid);
    CHECK(r.err.find("$.vectors") != std::string::npos);

    c.input = "{not json";
    auto r2 = drive(c);
    CHECK(r2.code == exit_invalid);
    CHECK(r2.err.find("parse error") != std::string::npos);

    c.input = R"({"n":4,"p":6,"vectors":[[2,1,0,0]]})";  // norm mismatch
    auto r3 = drive(c);
    CHECK(r3.code == exit_invalid);
}

TEST_CASE("confirm pipes from counterexample and exits 3") {
    RunConfig gen;
    gen.command = "counterexample";
    gen.kind = "all-ones";
    gen.nbar = 3;
    gen.pbar = 1;
    gen.verbosity = 0;
    auto g = drive(gen);
    REQUIRE(g.code == exit_ok);

    RunConfig conf;
    conf.command = "confirm";
    conf.verbosity = 0;
    auto r = drive(conf, g.out);
    CHECK(r.code == exit_counterexample);
    CHECK(parse_json(r.out)["status"] == "non-extendable");

    // An extendable system exits 0 with a witness.
    RunConfig ok;
    ok.command = "confirm";
    ok.verbosity = 0;
    ok.input = R"({"n":4,"p":5,"vectors":[[2,1,0,0]]})";
    auto r2 = drive(ok);
    CHECK(r2.code == exit_ok);
    CHECK(parse_json(r2.out).contains("witness"));

    // A starved budget is inconclusive, exit 1.
    RunConfig starved = conf;
    starved.budget = 5;
    auto r3 = drive(starved, g.out);
    CHECK(r3.code == exit_internal);
    CHECK(parse_json(r3.out)["status"] == "inconclusive");
}

TEST_CASE("verify command: json, csv, determinism and resume") {
    RunConfig v;
    v.command = "verify";
    v.n = 4;
    v.p_lo = 1;
    v.p_hi = 20;
    v.verbosity = 0;

    auto r1 = drive(v);
    CHECK(r1.code == exit_ok);
    auto j1 = parse_json(r1.out);
    CHECK(j1["per_p"].size() == 20);
    for (const auto& rec : j1["per_p"]) CHECK(rec["all_extended"] == true);

    SUBCASE("same config is byte-identical modulo the timing field") {
        auto r2 = drive(v);
        CHECK(strip_timing(parse_json(r1.out)).dump() ==
              strip_timing(parse_json(r2.out)).dump());
    }

    SUBCASE("jobs=1 and jobs=8 agree") {
        RunConfig v8 = v;
        v8.jobs = 8;
        auto r8 = drive(v8);
        auto a = strip_timing(parse_json(r1.out));
        auto b = strip_timing(parse_json(r8.out));
        b["jobs"] = 1;  // the recorded worker count is the only allowed difference
        a["jobs"] = 1;
        CHECK(a.dump() == b.dump());
    }

    SUBCASE("csv emits one flat row per p") {
        RunConfig vc = v;
        vc.format = "csv";
        auto rc = drive(vc);
        CHECK(rc.code == exit_ok);
        std::istringstream lines(rc.out);
        std::string line;
        std::getline(lines, line);
        CHECK(line == "p,systems_checked,all_extended,failures,complete");
        int rows = 0;
        while (std::getline(lines, line))
            if (!line.empty()) ++rows;
        CHECK(rows == 20);
    }

    SUBCASE("resume reuses complete records and matches a fresh run") {
        RunConfig first = v;
        first.p_hi = 5;
        first.output = tmp_path("resume_part.json");
        auto rp = drive(first);
        REQUIRE(rp.code == exit_ok);

        RunConfig second = v;
        second.resume = first.output;
        auto rr = drive(second);
        CHECK(rr.code == exit_ok);
        CHECK(strip_timing(parse_json(rr.out)).dump() ==
              strip_timing(parse_json(r1.out)).dump());
        std::remove(first.output.c_str());
    }
}

TEST_CASE("verify exits 3 when a failure is recorded") {
    RunConfig v;
    v.command = "verify";
    v.n = 9;
    v.p_lo = 9;
    v.p_hi = 9;
    v.k_max = 1;
    v.verbosity = 0;
    auto r = drive(v);
    CHECK(r.code == exit_counterexample);
    auto j = parse_json(r.out);
    CHECK(j["per_p"][0]["all_extended"] == false);
    CHECK(j["per_p"][0]["failures"].size() == 1);
}

TEST_CASE("reports with failures round-trip through JSON") {
    VerifyOptions o;
    o.n = 9;
    o.p_lo = 9;
    o.p_hi = 9;
    o.k_max = 1;
    auto rep = verify_range(o);
    auto j = report_to_json(rep);
    auto back = report_from_json(j);
    CHECK(back.per_p == rep.per_p);
    CHECK(report_to_json(back).dump() == j.dump());
}

TEST_CASE("orthext and minext commands") {
    RunConfig o;
    o.command = "orthext";
    o.input = R"({"n":3,"p":2,"kind":"orthogonal","vectors":[[1,1,0]]})";
    o.verbosity = 0;
    auto r = drive(o);
    CHECK(r.code == exit_ok);
    auto base = system_from_json(parse_json(r.out));
    CHECK(base.k() == 3);
    CHECK(validate_system(base).valid);

    RunConfig m;
    m.command = "minext";
    m.input = o.input;
    m.verbosity = 0;
    auto rm = drive(m);
    CHECK(rm.code == exit_ok);
    auto jm = parse_json(rm.out);
    CHECK(jm["status"] == "optimal");
    CHECK(jm["norm"] == 2);
}

TEST_CASE("check-identities command") {
    RunConfig c;
    c.command = "check-identities";
    c.samples = 10;
    c.seed = 3;
    c.verbosity = 0;
    auto r = drive(c);
    CHECK(r.code == exit_ok);
    auto j = parse_json(r.out);
    CHECK(j["suites"].size() == 7);
    for (const auto& s : j["suites"]) CHECK(s["passed"] == true);
}

TEST_CASE("file input and output") {
    const std::string in_path = tmp_path("in.json");
    const std::string out_path = tmp_path("out.json");
    {
        std::ofstream f(in_path);
        f << R"({"n":4,"p":5,"vectors":[[2,1,0,0]]})";
    }
    RunConfig c;
    c.command = "extend";
    c.input = in_path;
    c.output = out_path;
    c.verbosity = 0;
    auto r = drive(c);
    CHECK(r.code == exit_ok);
    std::ifstream f(out_path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(parse_json(ss.str())["status"] == "extended");
    std::remove(in_path.c_str());
    std::remove(out_path.c_str());

    RunConfig missing = c;
    missing.input = "does_not_exist.json";
    CHECK(drive(missing).code == exit_invalid);
}

TEST_CASE("installed binary honors the documented exit codes") {
    const char* bin = std::getenv("ORTHOBASE_BIN");
    if (!bin) return;  // only meaningful under ctest
    std::string b(bin);
    CHECK(std::system((b + " enumerate --n 4 --p 2 --count-only -q > /dev/null").c_str()) == 0);
    int rc = std::system((b + " counterexample --kind all-ones --nbar 3 --pbar 1 -q | " + b +
                          " confirm -q > /dev/null 2>&1")
                             .c_str());
    CHECK(WEXITSTATUS(rc) == 3);
    int bad = std::system((b + " extend --in '{\"bad\":1}' -q > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(bad) == 2);
}

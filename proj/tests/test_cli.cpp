#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct CliResult {
    int status = -1;
    std::string output;  // stdout and stderr merged
};

CliResult run_cli(const std::string& args) {
    CliResult res;
    std::string cmd = std::string("\"") + GENCOND_CLI_PATH + "\" " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, got);
    int rc = pclose(pipe);
    res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return res;
}

// Enough of the schema dialect to check our own documents: type, enum,
// properties, required, additionalProperties: false, items.
void validate_node(const json& schema, const json& value, const std::string& path,
                   std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const std::string t = schema["type"].get<std::string>();
        bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
                  (t == "string" && value.is_string()) || (t == "number" && value.is_number()) ||
                  (t == "integer" && value.is_number_integer()) ||
                  (t == "boolean" && value.is_boolean());
        if (!ok) {
            errors.push_back(path + ": expected " + t + ", got " + std::string(value.type_name()));
            return;
        }
    }
    if (schema.contains("enum")) {
        bool hit = false;
        for (const json& candidate : schema["enum"]) hit = hit || candidate == value;
        if (!hit) errors.push_back(path + ": value not in enum");
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const json& key : schema["required"])
                if (!value.contains(key.get<std::string>()))
                    errors.push_back(path + ": missing required key '" + key.get<std::string>() +
                                     "'");
        const json props = schema.value("properties", json::object());
        if (schema.value("additionalProperties", json(true)) == json(false))
            for (const auto& item : value.items())
                if (!props.contains(item.key()))
                    errors.push_back(path + ": unexpected key '" + item.key() + "'");
        for (const auto& item : value.items())
            if (props.contains(item.key()))
                validate_node(props[item.key()], item.value(), path + "." + item.key(), errors);
    }
    if (value.is_array() && schema.contains("items")) {
        int i = 0;
        for (const json& elem : value)
            validate_node(schema["items"], elem, path + "[" + std::to_string(i++) + "]", errors);
    }
}

void check_schema(const std::string& schema_id, const json& value) {
    std::ifstream in(std::string(GENCOND_SCHEMA_DIR) + "/" + schema_id + ".schema.json");
    REQUIRE_MESSAGE(in.good(), "schema file missing for ", schema_id);
    json schema = json::parse(in);
    std::vector<std::string> errors;
    validate_node(schema, value, "$", errors);
    for (const std::string& e : errors) FAIL_CHECK(schema_id, ": ", e);
    CHECK(value["schema"] == schema_id);
}

json parse_json_tail(const std::string& text) {
    std::size_t brace = text.find('{');
    REQUIRE(brace != std::string::npos);
    return json::parse(text.substr(brace));
}

std::filesystem::path scratch_dir() {
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "gencond_cli_scratch";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("vector verdict as data") {
    CliResult res = run_cli(
        "check-vector --catalog minkowski4 --point 0,0,0,0 --vector 1,0.2,0,0 --r 1 --format json");
    REQUIRE(res.status == 0);
    json j = json::parse(res.output);
    check_schema("gencond.verdict.v1", j);
    CHECK(j["chart"] == "minkowski4");
    CHECK(j["causal_character"] == "timelike");
    CHECK(j["generic"] == false);
    CHECK(j["r_nongeneric"] == true);
    CHECK(j["r"] == 1);
    REQUIRE(j["magnitudes"].size() == 2);
    CHECK(j["magnitudes"][0] == 0.0);
    CHECK(j["magnitudes"][1] == 0.0);

    CliResult human = run_cli(
        "check-vector --catalog minkowski4 --point 0,0,0,0 --vector 1,0.2,0,0 --r 1");
    REQUIRE(human.status == 0);
    CHECK(human.output.find("generic: no") != std::string::npos);
    CHECK(human.output.find("1-nongeneric: yes") != std::string::npos);
}

TEST_CASE("flat scan reports a full-window plateau") {
    CliResult res = run_cli(
        "scan-geodesic --catalog minkowski4 --point 0,0,0,0 --velocity 1,0.2,0,0 "
        "--t-end 0.3 --step 0.01 --r 1 --format json");
    REQUIRE(res.status == 0);
    json j = json::parse(res.output);
    check_schema("gencond.scan.v1", j);
    CHECK(j["generic_found"] == false);
    CHECK(j["sample_count"] == 31);
    CHECK(j["plateau_count"] == 1);
    CHECK(j["r_nongeneric_count"] == 31);
    CHECK(j["truncated"] == false);
    CHECK(j["runs"].size() == 1);
    CHECK(j["runs"][0]["length"] == 31);

    CliResult human = run_cli(
        "scan-geodesic --catalog minkowski4 --point 0,0,0,0 --velocity 1,0.2,0,0 "
        "--t-end 0.3 --step 0.01");
    REQUIRE(human.status == 0);
    CHECK(human.output.find("plateau over full window") != std::string::npos);
}

TEST_CASE("perturbed scan defaults to the flat base chart") {
    CliResult res = run_cli(
        "scan-geodesic --perturb 0.05:3:7 --point 0,0,0,0 --velocity 1,0.2,0,0 "
        "--t-end 0.5 --step 0.01 --format json");
    REQUIRE(res.status == 0);
    json j = json::parse(res.output);
    check_schema("gencond.scan.v1", j);
    CHECK(j["generic_found"] == true);
    CHECK(j["plateau_count"] == 0);
}

TEST_CASE("full verification passes above the threshold and fails below") {
    CliResult res = run_cli("verify --n 4 --r 3 --format json");
    REQUIRE(res.status == 0);
    json j = json::parse(res.output);
    check_schema("gencond.verify.v1", j);
    CHECK(j["pass"] == true);
    CHECK(j["r_threshold"] == 3);
    CHECK(j["dim_check"]["pass"] == true);
    CHECK(j["surjectivity"]["rank"] == 20);
    REQUIRE(j["fiber_maps"].size() == 2);

    CliResult below = run_cli("verify --n 4 --r 2");
    CHECK(below.status == 1);
    CHECK(below.output.find("FAIL") != std::string::npos);
}

TEST_CASE("surjectivity subcommand") {
    CliResult res =
        run_cli("verify-surjectivity --n 3 --r 2 --trials 10 --seed 5 --format json");
    REQUIRE(res.status == 0);
    json j = json::parse(res.output);
    check_schema("gencond.surjectivity.v1", j);
    CHECK(j["rank"] == 6);
    CHECK(j["expected_rank"] == 6);
    CHECK(j["trials"] == 10);
    CHECK(j["pass"] == true);
}

TEST_CASE("codimension subcommand") {
    CliResult res = run_cli("verify-codim --n 3 --r 1 --trials 5 --seed 2 --format json");
    REQUIRE(res.status == 0);
    json j = json::parse(res.output);
    check_schema("gencond.codim.v1", j);
    CHECK(j["pass"] == true);
    REQUIRE(j["fiber_maps"].size() == 2);
    CHECK(j["fiber_maps"][0]["causal_class"] == "non-null");
    CHECK(j["fiber_maps"][1]["causal_class"] == "null");
}

TEST_CASE("census over a flat catalog chart") {
    CliResult res =
        run_cli("census --catalog minkowski3 --n-samples 5 --seed 11 --format json");
    REQUIRE(res.status == 0);
    json j = json::parse(res.output);
    check_schema("gencond.census.v1", j);
    CHECK(j["chart"] == "minkowski3");
    CHECK(j["r"] == 1);
    CHECK(j["seed"] == 11);
    CHECK(j["total_samples"] == 15);
    CHECK(j["generic_fraction"] == 0.0);
    CHECK(j["r_nongeneric_count"] == 15);
}

TEST_CASE("census seed defaults to the perturbation seed with a notice") {
    CliResult res = run_cli("census --perturb 0.05:3:7 --n-samples 3 --format json");
    REQUIRE(res.status == 0);
    CHECK(res.output.rfind("seed 7 (from --perturb", 0) == 0);
    json j = parse_json_tail(res.output);
    check_schema("gencond.census.v1", j);
    CHECK(j["seed"] == 7);
    CHECK(j["r_nongeneric_count"] == 0);
}

TEST_CASE("catalog listing and single-chart dump") {
    CliResult res = run_cli("catalog --format json");
    REQUIRE(res.status == 0);
    json j = json::parse(res.output);
    check_schema("gencond.catalog.v1", j);
    REQUIRE(j["charts"].size() == 7);
    bool saw_ppwave = false;
    for (const json& c : j["charts"]) {
        CHECK_FALSE(c["note"].get<std::string>().empty());
        if (c["name"] == "ppwave4") saw_ppwave = true;
    }
    CHECK(saw_ppwave);

    CliResult one = run_cli("catalog --id ppwave4");
    REQUIRE(one.status == 0);
    CHECK(one.output.find("g[0][0] = x^2 - y^2") != std::string::npos);
    CHECK(one.output.find("# ") != std::string::npos);
}

TEST_CASE("threshold table") {
    CliResult res = run_cli("threshold --format json");
    REQUIRE(res.status == 0);
    json j = json::parse(res.output);
    check_schema("gencond.threshold.v1", j);
    REQUIRE(j["rows"].size() == 4);
    CHECK(j["rows"][0]["n"] == 3);
    CHECK(j["rows"][0]["r_threshold"] == 6);
    CHECK(j["rows"][1]["n"] == 4);
    CHECK(j["rows"][1]["r_threshold"] == 3);
    for (const json& row : j["rows"]) CHECK(row["pass"] == true);

    CliResult one = run_cli("threshold --n 4");
    REQUIRE(one.status == 0);
    CHECK(one.output.find("smallest sufficient r = 3") != std::string::npos);
}

TEST_CASE("json can be routed to a file") {
    std::filesystem::path out = scratch_dir() / "surj.json";
    std::filesystem::remove(out);
    CliResult res = run_cli("verify-surjectivity --n 2 --r 1 --format json --output \"" +
                            out.string() + "\"");
    REQUIRE(res.status == 0);
    CHECK(res.output.empty());
    std::ifstream in(out);
    REQUIRE(in.good());
    json j = json::parse(in);
    check_schema("gencond.surjectivity.v1", j);
    CHECK(j["n"] == 2);
    std::filesystem::remove(out);
}

TEST_CASE("chart files work everywhere a catalog id does") {
    std::filesystem::path chart = scratch_dir() / "strip.chart";
    {
        std::ofstream out(chart);
        out << "dimension 2\ncoordinates t x\ng[0][0] = -1\ng[1][1] = 1\n";
    }
    CliResult res = run_cli("check-vector --chart \"" + chart.string() +
                            "\" --point 0,0 --vector 1,0 --format json");
    REQUIRE(res.status == 0);
    json j = json::parse(res.output);
    CHECK(j["chart"] == "strip");

    CliResult both = run_cli("check-vector --chart \"" + chart.string() +
                             "\" --catalog minkowski3 --point 0,0 --vector 1,0");
    CHECK(both.status == 2);
    CHECK(both.output.find("not both") != std::string::npos);
    std::filesystem::remove(chart);
}

TEST_CASE("scan trace and census samples land in CSV files") {
    std::filesystem::path trace = scratch_dir() / "trace.csv";
    std::filesystem::path samples = scratch_dir() / "samples.csv";
    CliResult res = run_cli(
        "scan-geodesic --catalog minkowski3 --point 0,0,0 --velocity 1,0,0 --t-end 0.05 "
        "--step 0.01 --format json --trace-csv \"" + trace.string() + "\"");
    REQUIRE(res.status == 0);
    {
        std::ifstream in(trace);
        REQUIRE(in.good());
        std::string header;
        std::getline(in, header);
        CHECK(header == "t,t,x,y,xdot_t,xdot_x,xdot_y,genericity_magnitude,causal_character");
        int rows = 0;
        std::string line;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 6);
    }
    CliResult cres = run_cli("census --catalog minkowski3 --n-samples 2 --seed 4 --format json "
                             "--samples-csv \"" + samples.string() + "\"");
    REQUIRE(cres.status == 0);
    {
        std::ifstream in(samples);
        REQUIRE(in.good());
        std::string header;
        std::getline(in, header);
        CHECK(header ==
              "point_index,t,x,y,X_t,X_x,X_y,causal_character,m_0,m_1,generic,r_nongeneric");
        int rows = 0;
        std::string line;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 6);
    }
    std::filesystem::remove(trace);
    std::filesystem::remove(samples);
}

TEST_CASE("usage and input failures exit with code 2") {
    CHECK(run_cli("").status == 2);
    CHECK(run_cli("frobnicate").status == 2);

    CliResult missing = run_cli("check-vector --catalog minkowski4 --vector 1,0,0,0");
    CHECK(missing.status == 2);
    CHECK(missing.output.find("--point") != std::string::npos);

    CliResult badnum = run_cli("check-vector --catalog minkowski4 --point 0,0,x,0 --vector 1,0,0,0");
    CHECK(badnum.status == 2);
    CHECK(badnum.output.find("--point") != std::string::npos);

    CliResult badchart = run_cli("census --catalog nope --n-samples 2 --seed 1");
    CHECK(badchart.status == 2);
    CHECK(badchart.output.find("unknown catalog chart") != std::string::npos);

    CliResult badformat = run_cli("catalog --format yaml");
    CHECK(badformat.status == 2);

    CliResult outside = run_cli(
        "check-vector --catalog schwarzschild4 --point 0,2.0,1.5,0 --vector 1,0,0,0");
    CHECK(outside.status == 2);

    CliResult shortpoint = run_cli("check-vector --catalog minkowski4 --point 0,0 --vector 1,0,0,0");
    CHECK(shortpoint.status == 2);
    CHECK(shortpoint.output.find("expected 4") != std::string::npos);
}

}  // TEST_SUITE

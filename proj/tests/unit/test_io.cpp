#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "dsnw/errors.hpp"
#include "dsnw/io.hpp"

using namespace dsnw;

namespace {

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("dsnw_test_" + name)).string();
}

ojson load_raw_pack() {
    std::ifstream f(DSNW_FIXTURES);
    return ojson::parse(f);
}

}  // namespace

TEST_CASE("JSON output is deterministic with full precision") {
    ojson j;
    j["b"] = 0.1;
    j["a"] = std::vector<double>{1.0, 2.5};
    j["nan"] = std::nan("");
    const std::string s = dump_json(j);
    CHECK(s == dump_json(j));
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    CHECK(s.find("\"b\"") < s.find("\"a\""));
    CHECK(s.find("null") != std::string::npos);
    CHECK(s.back() == '\n');
    CHECK(ojson::parse(s)["b"].get<double>() == 0.1);
}

TEST_CASE("state JSON round trip and schema errors") {
    const auto s = StateCoefficients::random(4, 17);
    const auto j = state_to_json(s);
    CHECK(j.contains("coeffs"));
    CHECK(state_from_json(ojson::parse(dump_json(j))).max_abs_diff(s) == 0.0);

    const std::string path = tmp_path("state.json");
    write_text_file(path, dump_json(j));
    CHECK(read_state_file(path).max_abs_diff(s) == 0.0);

    CHECK_THROWS_AS(state_from_json(ojson::parse(R"({"l_max": 2})")), SchemaError);
    CHECK_THROWS_AS(state_from_json(ojson::parse(R"({"l_max": 1, "coeffs": [{"l": 2, "m": 0, "re": 1, "im": 0}]})")),
                    SchemaError);
    write_text_file(path, "{not json");
    CHECK_THROWS_AS(read_state_file(path), SchemaError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_state_file(path), std::runtime_error);
}

TEST_CASE("density CSV") {
    const auto p = DeSitterParams::make(2.5);
    const auto grid = SphereGrid::make(4, 8);
    const auto tr = evolve_trace(p, StateCoefficients::random(2, 1), {0.0, 0.5}, grid);
    const std::string csv = density_csv(tr, grid);
    CHECK(csv.rfind("t,theta,phi,density\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 1 + 2 * 4 * 8);
    const auto tj = trace_to_json(p, tr);
    CHECK(tj["norm"].size() == 2);
}

TEST_CASE("fixture pack loads and every record verifies") {
    const auto pack = load_fixture_pack(DSNW_FIXTURES);
    REQUIRE(pack.records.size() > 100);
    std::map<std::string, int> seen;
    for (const auto& r : pack.records) ++seen[r.function_id];
    for (const auto& id : fixture_function_ids()) CHECK_MESSAGE(seen[id] > 0, id);
    int failed = 0;
    for (const auto& o : verify_pack(pack))
        if (!o.pass) {
            ++failed;
            MESSAGE("record " << o.index << " " << o.function_id << " error " << o.error << " tol " << o.tolerance
                              << " " << o.message);
        }
    CHECK(failed == 0);
}

TEST_CASE("a corrupted record fails and is reported by index") {
    auto raw = load_raw_pack();
    raw["records"][5]["value"]["re"] = "123.456";
    const auto pack = parse_fixture_pack(raw);
    const auto out = verify_pack(pack);
    std::vector<std::size_t> bad;
    for (const auto& o : out)
        if (!o.pass) bad.push_back(o.index);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0] == 5);
}

TEST_CASE("schema errors in fixture packs") {
    auto raw = load_raw_pack();
    auto a = raw;
    a.erase("records");
    CHECK_THROWS_AS(parse_fixture_pack(a), SchemaError);
    auto b = raw;
    b["records"][0]["function_id"] = "no_such_function";
    CHECK_THROWS_AS(parse_fixture_pack(b), SchemaError);
    auto c = raw;
    c["records"][0]["value"]["re"] = "1.0x";
    CHECK_THROWS_AS(parse_fixture_pack(c), SchemaError);
    auto d = raw;
    d["records"][0]["abs_tol"] = "0";
    d["records"][0]["rel_tol"] = "0";
    CHECK_THROWS_AS(parse_fixture_pack(d), SchemaError);
    auto e = raw;
    e["records"][0]["inputs"] = ojson::array();
    const auto pack = parse_fixture_pack(e);
    CHECK_THROWS_AS(verify_record(pack.records[0]), SchemaError);
    CHECK_THROWS_AS(load_fixture_pack("/nonexistent/pack.json"), std::runtime_error);
}

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dsnw/modes.hpp"
#include "dsnw/newton_wigner.hpp"
#include "dsnw/params.hpp"
#include "dsnw/symmetry.hpp"

namespace dsnw {

using ojson = nlohmann::ordered_json;

// Stable key order, doubles at 17 significant digits, non-finite as null.
std::string dump_json(const ojson& j, int indent = 2);
void write_text_file(const std::string& path, const std::string& text);

ojson params_to_json(const DeSitterParams& p);
ojson state_to_json(const StateCoefficients& s);
// Throws SchemaError on malformed input.
StateCoefficients state_from_json(const ojson& j);
StateCoefficients read_state_file(const std::string& path);

ojson ladder_to_json(const LadderReport& r);
// {"params", "t", "expectation", "norm", ...}
ojson trace_to_json(const DeSitterParams& p, const EvolveTrace& tr);
// Columns t, theta, phi, density with LF line endings.
std::string density_csv(const EvolveTrace& tr, const SphereGrid& grid);

struct FixtureRecord {
    std::string function_id;
    std::vector<std::pair<std::string, cplx>> inputs;
    cplx value;
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    std::string provenance;

    // Throws SchemaError if the label is missing.
    cplx input(const std::string& label) const;
    double real_input(const std::string& label) const { return input(label).real(); }
    int int_input(const std::string& label) const;
};

struct FixturePack {
    std::string generator_version;
    int digits = 0;
    std::vector<FixtureRecord> records;
};

const std::vector<std::string>& fixture_function_ids();

// Throws std::runtime_error if the file cannot be opened, SchemaError on bad content.
FixturePack load_fixture_pack(const std::string& path);
FixturePack parse_fixture_pack(const ojson& j);

struct FixtureOutcome {
    std::size_t index = 0;
    std::string function_id;
    cplx got;
    cplx want;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string message;  // set when evaluation threw
};

FixtureOutcome verify_record(const FixtureRecord& rec, std::size_t index = 0);
std::vector<FixtureOutcome> verify_pack(const FixturePack& pack);

}  // namespace dsnw

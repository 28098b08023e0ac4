#include "dsnw/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dsnw/errors.hpp"
#include "dsnw/specfun.hpp"

namespace dsnw {

namespace {

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void dump_rec(const ojson& j, std::ostringstream& os, int indent, int depth) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string pad_close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case ojson::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{' << nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',' << nl;
                first = false;
                os << pad << ojson(it.key()).dump() << (indent > 0 ? ": " : ":");
                dump_rec(it.value(), os, indent, depth + 1);
            }
            os << nl << pad_close << '}';
            return;
        }
        case ojson::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // arrays of scalars stay on one line
            bool flat = true;
            for (const auto& e : j) flat = flat && !e.is_structured();
            if (flat) {
                os << '[';
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << (indent > 0 ? ", " : ",");
                    dump_rec(j[i], os, indent, depth + 1);
                }
                os << ']';
                return;
            }
            os << '[' << nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ',' << nl;
                os << pad;
                dump_rec(j[i], os, indent, depth + 1);
            }
            os << nl << pad_close << ']';
            return;
        }
        case ojson::value_t::number_float: os << format_double(j.get<double>()); return;
        default: os << j.dump(); return;
    }
}

double parse_decimal(const ojson& j, const char* what) {
    if (!j.is_string()) throw SchemaError(std::string("expected decimal string for ") + what);
    const std::string s = j.get<std::string>();
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw SchemaError("malformed number '" + s + "' in " + what);
    }
    if (pos != s.size()) throw SchemaError("trailing characters in '" + s + "' in " + what);
    return v;
}

cplx parse_complex(const ojson& j, const char* what) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) throw SchemaError(std::string("expected {re, im} for ") + what);
    return {parse_decimal(j["re"], what), parse_decimal(j["im"], what)};
}

}  // namespace

std::string dump_json(const ojson& j, int indent) {
    std::ostringstream os;
    dump_rec(j, os, indent, 0);
    os << '\n';
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

ojson params_to_json(const DeSitterParams& p) {
    ojson j;
    j["alpha"] = p.alpha;
    j["M"] = p.M;
    j["nu"] = {p.nu.real(), p.nu.imag()};
    j["series"] = to_string(p.series);
    j["branch"] = p.branch == NuBranch::Plus ? "plus" : "minus";
    return j;
}

ojson state_to_json(const StateCoefficients& s) {
    ojson j;
    j["l_max"] = s.l_max();
    ojson arr = ojson::array();
    for (int l = 0; l <= s.l_max(); ++l)
        for (int m = -l; m <= l; ++m) {
            const cplx c = s.at(l, m);
            if (c == cplx{}) continue;
            arr.push_back(ojson{{"l", l}, {"m", m}, {"re", c.real()}, {"im", c.imag()}});
        }
    j["coeffs"] = arr;
    return j;
}

StateCoefficients state_from_json(const ojson& j) {
    if (!j.is_object() || !j.contains("l_max") || !j["l_max"].is_number_integer() || !j.contains("coeffs") ||
        !j["coeffs"].is_array())
        throw SchemaError("state JSON needs integer l_max and a coeffs array");
    const int L = j["l_max"].get<int>();
    if (L < 0) throw SchemaError("l_max must be nonnegative");
    StateCoefficients s(L);
    for (const auto& c : j["coeffs"]) {
        if (!c.is_object() || !c.contains("l") || !c.contains("m") || !c["l"].is_number_integer() ||
            !c["m"].is_number_integer())
            throw SchemaError("coefficient entries need integer l and m");
        const int l = c["l"].get<int>(), m = c["m"].get<int>();
        if (l < 0 || l > L || std::abs(m) > l) throw SchemaError("coefficient index out of range");
        const double re = c.value("re", 0.0), im = c.value("im", 0.0);
        s.at(l, m) = cplx(re, im);
    }
    s.mark_normalized(1e-12);
    return s;
}

StateCoefficients read_state_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open state file " + path);
    ojson j;
    try {
        j = ojson::parse(f);
    } catch (const ojson::parse_error& e) {
        throw SchemaError(std::string("state file is not valid JSON: ") + e.what());
    }
    return state_from_json(j);
}

ojson ladder_to_json(const LadderReport& r) {
    ojson j;
    j["generator"] = to_string(r.generator);
    j["M"] = r.M;
    j["l"] = r.l;
    j["m"] = r.m;
    ojson arr = ojson::array();
    for (const auto& e : r.entries)
        arr.push_back(ojson{{"l", e.l}, {"m", e.m}, {"re", e.value.real()}, {"im", e.value.imag()}});
    j["entries"] = arr;
    j["max_outside"] = r.max_outside;
    return j;
}

ojson trace_to_json(const DeSitterParams& p, const EvolveTrace& tr) {
    ojson j;
    j["params"] = params_to_json(p);
    j["t"] = tr.t;
    ojson ex = ojson::array();
    for (const auto& e : tr.expectation) ex.push_back({e[0], e[1], e[2]});
    j["expectation"] = ex;
    j["norm"] = tr.norm;
    j["max_raw_change"] = tr.max_raw_change;
    j["max_density_change"] = tr.max_density_change;
    return j;
}

std::string density_csv(const EvolveTrace& tr, const SphereGrid& grid) {
    std::ostringstream os;
    os << "t,theta,phi,density\n";
    for (std::size_t k = 0; k < tr.t.size(); ++k)
        for (int i = 0; i < grid.n_theta; ++i)
            for (int j = 0; j < grid.n_phi; ++j)
                os << format_double(tr.t[k]) << ',' << format_double(grid.theta[i]) << ','
                   << format_double(grid.phi[j]) << ','
                   << format_double(tr.density[k][static_cast<std::size_t>(i) * grid.n_phi + j]) << '\n';
    return os.str();
}

// ---------------------------------------------------------------- fixtures

cplx FixtureRecord::input(const std::string& label) const {
    for (const auto& [k, v] : inputs)
        if (k == label) return v;
    throw SchemaError("record " + function_id + " lacks input '" + label + "'");
}

int FixtureRecord::int_input(const std::string& label) const {
    const double v = real_input(label);
    if (v != std::round(v)) throw SchemaError("input '" + label + "' must be an integer");
    return static_cast<int>(std::lround(v));
}

const std::vector<std::string>& fixture_function_ids() {
    static const std::vector<std::string> ids = {
        "complex_gamma", "ferrers_T", "ferrers_dT", "ferrers_T_zero",     "wronskian_rhs", "gamma_l",    "wigner_3j",
        "spherical_harmonic", "mode_u", "mode_v", "two_point_G", "zeta_phase", "omega_dS",   "ladder_N03"};
    return ids;
}

FixturePack parse_fixture_pack(const ojson& j) {
    if (!j.is_object()) throw SchemaError("fixture pack must be a JSON object");
    for (const char* k : {"generator_version", "digits", "grid_spec", "records"})
        if (!j.contains(k)) throw SchemaError(std::string("fixture pack lacks '") + k + "'");
    if (!j["records"].is_array()) throw SchemaError("records must be an array");
    FixturePack pack;
    pack.generator_version = j["generator_version"].get<std::string>();
    pack.digits = j["digits"].get<int>();
    const auto& ids = fixture_function_ids();
    std::size_t idx = 0;
    for (const auto& r : j["records"]) {
        const std::string where = "record " + std::to_string(idx++);
        if (!r.is_object()) throw SchemaError(where + " is not an object");
        for (const char* k : {"function_id", "inputs", "value", "abs_tol", "rel_tol", "provenance"})
            if (!r.contains(k)) throw SchemaError(where + " lacks '" + k + "'");
        FixtureRecord rec;
        rec.function_id = r["function_id"].get<std::string>();
        if (std::find(ids.begin(), ids.end(), rec.function_id) == ids.end())
            throw SchemaError(where + " has unknown function_id '" + rec.function_id + "'");
        if (!r["inputs"].is_array()) throw SchemaError(where + " inputs must be an array");
        for (const auto& in : r["inputs"]) {
            if (!in.contains("label")) throw SchemaError(where + " input lacks a label");
            rec.inputs.emplace_back(in["label"].get<std::string>(), parse_complex(in, "input"));
        }
        rec.value = parse_complex(r["value"], "value");
        rec.abs_tol = parse_decimal(r["abs_tol"], "abs_tol");
        rec.rel_tol = parse_decimal(r["rel_tol"], "rel_tol");
        rec.provenance = r["provenance"].get<std::string>();
        if (!std::isfinite(rec.value.real()) || !std::isfinite(rec.value.imag()))
            throw SchemaError(where + " value is not finite");
        if (rec.abs_tol < 0 || rec.rel_tol < 0 || (rec.abs_tol == 0 && rec.rel_tol == 0))
            throw SchemaError(where + " needs a positive tolerance");
        pack.records.push_back(std::move(rec));
    }
    return pack;
}

FixturePack load_fixture_pack(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open fixture pack " + path);
    ojson j;
    try {
        j = ojson::parse(f);
    } catch (const ojson::parse_error& e) {
        throw SchemaError(std::string("fixture pack is not valid JSON: ") + e.what());
    }
    return parse_fixture_pack(j);
}

namespace {

DeSitterParams record_params(const FixtureRecord& r, bool with_alpha) {
    NuBranch b = NuBranch::Plus;
    for (const auto& in : r.inputs)
        if (in.first == "branch" && in.second.real() < 0) b = NuBranch::Minus;
    double alpha = 1.0;
    if (with_alpha) alpha = r.real_input("alpha");
    return DeSitterParams::make(r.real_input("M"), alpha, b);
}

cplx evaluate(const FixtureRecord& r) {
    const std::string& id = r.function_id;
    if (id == "complex_gamma") return complex_gamma(r.input("z"));
    if (id == "ferrers_T" || id == "ferrers_dT") {
        const DeSitterParams p = record_params(r, true);
        const OrderDegree od{p.nu, r.int_input("l")};
        const FerrersArg a = FerrersArg::from_time(r.real_input("t"), p.alpha);
        return id == "ferrers_T" ? ferrers_T(od, a) : ferrers_dT(od, a);
    }
    if (id == "ferrers_T_zero") {
        const DeSitterParams p = record_params(r, false);
        return ferrers_T_zero(OrderDegree{p.nu, r.int_input("l")});
    }
    if (id == "wronskian_rhs") {
        const DeSitterParams p = record_params(r, false);
        return wronskian_rhs(OrderDegree{p.nu, r.int_input("l")});
    }
    if (id == "gamma_l") return gamma_l(record_params(r, false), r.int_input("l"));
    if (id == "wigner_3j")
        return wigner_3j(r.int_input("j1"), r.int_input("j2"), r.int_input("j3"), r.int_input("m1"),
                         r.int_input("m2"), r.int_input("m3"));
    if (id == "spherical_harmonic")
        return spherical_harmonic(r.int_input("l"), r.int_input("m"), r.real_input("theta"), r.real_input("phi"));
    if (id == "mode_u" || id == "mode_v") {
        const DeSitterParams p = record_params(r, true);
        const SpacetimePoint x{r.real_input("t"), r.real_input("theta"), r.real_input("phi")};
        return id == "mode_u" ? mode_u(p, r.int_input("l"), r.int_input("m"), x)
                              : mode_v(p, r.int_input("l"), r.int_input("m"), x);
    }
    if (id == "two_point_G") {
        const DeSitterParams p = record_params(r, true);
        const SpacetimePoint x{r.real_input("t"), r.real_input("theta"), r.real_input("phi")};
        return two_point_G(p, x, r.real_input("t2"), r.int_input("l_max")).value;
    }
    if (id == "zeta_phase") return zeta_phase(record_params(r, true), r.int_input("l"), r.real_input("t"));
    if (id == "omega_dS") return omega_dS(record_params(r, true), r.int_input("l"), r.real_input("t"));
    if (id == "ladder_N03") {
        const DeSitterParams p = record_params(r, true);
        const int l = r.int_input("l");
        const SphereGrid grid = SphereGrid::make(l + 6, 2 * l + 10);
        const LadderReport rep = ladder_coefficients(GeneratorId::N03, p, l, r.int_input("m"), r.real_input("t"), grid);
        return rep.entry(r.int_input("l2"), r.int_input("m2"));
    }
    throw SchemaError("no evaluator for function_id '" + id + "'");
}

}  // namespace

FixtureOutcome verify_record(const FixtureRecord& rec, std::size_t index) {
    FixtureOutcome o;
    o.index = index;
    o.function_id = rec.function_id;
    o.want = rec.value;
    o.tolerance = std::max(rec.abs_tol, rec.rel_tol * std::abs(rec.value));
    try {
        o.got = evaluate(rec);
        o.error = std::abs(o.got - o.want);
        o.pass = std::isfinite(o.error) && o.error <= o.tolerance;
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        o.message = e.what();
        o.error = INFINITY;
        o.pass = false;
    }
    return o;
}

std::vector<FixtureOutcome> verify_pack(const FixturePack& pack) {
    std::vector<FixtureOutcome> out;
    out.reserve(pack.records.size());
    for (std::size_t i = 0; i < pack.records.size(); ++i) out.push_back(verify_record(pack.records[i], i));
    return out;
}

}  // namespace dsnw

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dsnw/errors.hpp"
#include "dsnw/io.hpp"
#include "dsnw/modes.hpp"
#include "dsnw/newton_wigner.hpp"
#include "dsnw/specfun.hpp"
#include "dsnw/symmetry.hpp"

#ifndef DSNW_DEFAULT_FIXTURES
#define DSNW_DEFAULT_FIXTURES "tests/fixtures/oracle_pack.json"
#endif

namespace fs = std::filesystem;
using namespace dsnw;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double alpha = 1.0;
    double M = 2.5;
    int l_max = 4;
    std::string grid;  // "NxM", empty = derived from l_max
    double t0 = 0.0;
    double t1 = 2.0;
    int steps = 5;
    std::string out;
    double tol = -1.0;  // < 0: command default
    std::uint64_t seed = 12345;

    int n_theta = 0, n_phi = 0;

    void finalize() {
        if (!(alpha > 0.0)) throw UsageError("alpha must be positive");
        if (!(M > 0.0)) throw UsageError("M must be positive");
        if (l_max < 0) throw UsageError("lmax must be nonnegative");
        if (steps < 1) throw UsageError("steps must be at least 1");
        if (grid.empty()) {
            n_theta = l_max + 4;
            n_phi = 2 * l_max + 6;
        } else {
            const auto x = grid.find_first_of("xX");
            if (x == std::string::npos) throw UsageError("grid must look like NxM");
            try {
                std::size_t p1 = 0, p2 = 0;
                n_theta = std::stoi(grid.substr(0, x), &p1);
                n_phi = std::stoi(grid.substr(x + 1), &p2);
                if (p1 != x || p2 != grid.size() - x - 1) throw UsageError("grid must look like NxM");
            } catch (const std::logic_error&) {
                throw UsageError("grid must look like NxM");
            }
        }
        if (n_theta < l_max + 2) throw UsageError("grid needs n_theta >= lmax + 2");
        if (n_phi < 1) throw UsageError("grid needs n_phi >= 1");
    }

    double tolerance(double def) const { return tol > 0.0 ? tol : def; }

    DeSitterParams params() const {
        try {
            return DeSitterParams::make(M, alpha);
        } catch (const ExcludedMassError& e) {
            throw UsageError(e.what());
        }
    }

    SphereGrid sphere() const { return SphereGrid::make(n_theta, n_phi); }

    std::vector<double> times() const {
        std::vector<double> ts;
        for (int k = 0; k <= steps; ++k) ts.push_back(t0 + (t1 - t0) * k / steps);
        return ts;
    }

    // Empty when no output directory was requested.
    std::string out_path(const std::string& name) const {
        if (out.empty()) return {};
        fs::create_directories(out);
        return (fs::path(out) / name).string();
    }
};

void emit(const RunConfig& cfg, const std::string& name, const std::string& text) {
    const std::string path = cfg.out_path(name);
    if (path.empty()) return;
    write_text_file(path, text);
    std::cout << "wrote " << path << "\n";
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

std::string fmt(cplx z) {
    std::ostringstream os;
    os << std::setprecision(10) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

// ---------------------------------------------------------------- commands

int cmd_classify(const RunConfig& cfg) {
    const DeSitterParams p = cfg.params();
    std::cout << "series: " << to_string(p.series) << "\n"
              << "nu: " << fmt(p.nu) << "\n"
              << "q: " << fmt(p.M * p.M) << "\n";
    ojson j;
    j["params"] = params_to_json(p);
    j["q"] = p.M * p.M;
    emit(cfg, "classify.json", dump_json(j));
    return kPass;
}

int cmd_ortho(const RunConfig& cfg, const std::string& sector) {
    const DeSitterParams p = cfg.params();
    const SphereGrid grid = cfg.sphere();
    if (grid.bandwidth() < cfg.l_max) throw UsageError("grid too coarse: need n_theta >= lmax+1 and n_phi >= 2 lmax+1");
    const double tol = cfg.tolerance(1e-8);
    std::vector<std::pair<std::string, Sector>> sectors;
    if (sector == "uu" || sector == "all") sectors.push_back({"uu", Sector::UU});
    if (sector == "vv" || sector == "all") sectors.push_back({"vv", Sector::VV});
    if (sector == "uv" || sector == "all") sectors.push_back({"uv", Sector::UV});
    if (sectors.empty()) throw UsageError("sector must be uu, vv, uv or all");

    bool ok = true;
    ojson j;
    j["params"] = params_to_json(p);
    j["l_max"] = cfg.l_max;
    j["t"] = cfg.t0;
    j["tolerance"] = tol;
    ojson rep = ojson::object();
    for (const auto& [name, s] : sectors) {
        const auto G = orthonormality_matrix(p, cfg.l_max, cfg.t0, grid, s);
        const cplx diag = s == Sector::UU ? 1.0 : s == Sector::VV ? -1.0 : 0.0;
        const double dev = max_deviation(G, diag);
        const bool pass = dev <= tol;
        ok = ok && pass;
        std::cout << name << ": max deviation " << fmt(dev) << (pass ? " PASS" : " FAIL") << "\n";
        rep[name] = ojson{{"max_deviation", dev}, {"pass", pass}};
    }
    j["sectors"] = rep;
    j["pass"] = ok;
    emit(cfg, "ortho.json", dump_json(j));
    return ok ? kPass : kFail;
}

int cmd_casimir(const RunConfig& cfg, double theta, double phi) {
    const DeSitterParams p = cfg.params();
    const double tol_q = cfg.tolerance(1e-3);
    const double tol_r = 1e-4;
    const double M2 = p.M * p.M;
    bool ok = true;
    ojson rows = ojson::array();
    for (int l = 0; l <= cfg.l_max; ++l) {
        for (int m = -l; m <= l; ++m) {
            const SpacetimePoint x{cfg.t0, theta, phi};
            try {
                const CasimirEstimate c = casimir_check(p, l, m, x);
                const double qerr = std::abs(c.q - M2) / M2;
                const bool pass = qerr <= tol_q && std::abs(c.r) <= tol_r;
                ok = ok && pass;
                std::cout << "l=" << l << " m=" << m << " Q=" << fmt(c.q) << " |R|=" << fmt(std::abs(c.r))
                          << (pass ? " PASS" : " FAIL") << "\n";
                rows.push_back(ojson{{"l", l}, {"m", m}, {"q_re", c.q.real()}, {"q_im", c.q.imag()},
                                     {"r_abs", std::abs(c.r)}, {"pass", pass}});
            } catch (const DomainError& e) {
                std::cout << "l=" << l << " m=" << m << " skipped: " << e.what() << "\n";
                rows.push_back(ojson{{"l", l}, {"m", m}, {"skipped", e.what()}});
            }
        }
    }
    ojson j;
    j["params"] = params_to_json(p);
    j["expected_q"] = M2;
    j["rows"] = rows;
    j["pass"] = ok;
    emit(cfg, "casimir.json", dump_json(j));
    return ok ? kPass : kFail;
}

int cmd_evolve(const RunConfig& cfg, const std::vector<double>& packet) {
    const DeSitterParams p = cfg.params();
    if (packet.size() != 3) throw UsageError("packet needs theta0,phi0,width");
    const StateCoefficients s = wavepacket(p, cfg.l_max, packet[0], packet[1], packet[2]);
    const SphereGrid grid = cfg.sphere();
    const EvolveTrace tr = evolve_trace(p, s, cfg.times(), grid);
    const double tol = cfg.tolerance(1e-10);
    double norm_dev = 0.0;
    for (double n : tr.norm) norm_dev = std::max(norm_dev, std::abs(n - 1.0));
    for (std::size_t k = 0; k < tr.t.size(); ++k)
        std::cout << "t=" << fmt(tr.t[k]) << " <r>=(" << fmt(tr.expectation[k][0]) << ", " << fmt(tr.expectation[k][1])
                  << ", " << fmt(tr.expectation[k][2]) << ") norm=" << fmt(tr.norm[k]) << "\n";
    std::cout << "max density change between slices: " << fmt(tr.max_raw_change) << "\n";
    const bool ok = norm_dev <= tol;
    std::cout << "norm conservation " << fmt(norm_dev) << (ok ? " PASS" : " FAIL") << "\n";
    emit(cfg, "trace.json", dump_json(trace_to_json(p, tr)));
    emit(cfg, "density.csv", density_csv(tr, grid));
    return ok ? kPass : kFail;
}

int cmd_position(const RunConfig& cfg, const std::string& state_file) {
    const DeSitterParams p = cfg.params();
    StateCoefficients s = state_file.empty() ? StateCoefficients::random(cfg.l_max, cfg.seed) : read_state_file(state_file);
    if (s.norm() == 0.0) throw UsageError("state is zero");
    s = s.normalized();
    const double tol = cfg.tolerance(1e-8);
    const SphereGrid grid = SphereGrid::make(s.l_max() + 3, 2 * s.l_max() + 6);
    double agree = 0.0, parity = 0.0, between = 0.0;
    ojson rows = ojson::array();
    for (double t : cfg.times()) {
        for (int axis = 1; axis <= 3; ++axis) {
            const auto a = position_apply(p, s, t, axis);
            const auto b = position_apply_quadrature(p, s, t, axis, grid);
            agree = std::max(agree, a.max_abs_diff(b));
        }
        const auto e = position_expectation(p, s, t);
        const auto ep = position_expectation(p, apply_discrete(Discrete::P3, p, s), t);
        parity = std::max({parity, std::abs(ep.via_operator[0] - e.via_operator[0]),
                           std::abs(ep.via_operator[1] - e.via_operator[1]),
                           std::abs(ep.via_operator[2] + e.via_operator[2])});
        for (int c = 0; c < 3; ++c) between = std::max(between, std::abs(e.via_operator[c] - e.via_density[c]));
        std::cout << "t=" << fmt(t) << " <X>=(" << fmt(e.via_operator[0]) << ", " << fmt(e.via_operator[1]) << ", "
                  << fmt(e.via_operator[2]) << ")\n";
        rows.push_back(ojson{{"t", t}, {"expectation", {e.via_operator[0], e.via_operator[1], e.via_operator[2]}}});
    }
    const bool ok_agree = agree <= tol, ok_parity = parity <= tol, ok_between = between <= tol;
    std::cout << "3j vs quadrature: " << fmt(agree) << (ok_agree ? " PASS" : " FAIL") << "\n"
              << "parity covariance: " << fmt(parity) << (ok_parity ? " PASS" : " FAIL") << "\n"
              << "operator vs density: " << fmt(between) << (ok_between ? " PASS" : " FAIL") << "\n";
    ojson j;
    j["params"] = params_to_json(p);
    j["trace"] = rows;
    j["threej_vs_quadrature"] = agree;
    j["parity_covariance"] = parity;
    j["operator_vs_density"] = between;
    j["pass"] = ok_agree && ok_parity && ok_between;
    emit(cfg, "position.json", dump_json(j));
    return ok_agree && ok_parity && ok_between ? kPass : kFail;
}

int cmd_signdemo(const RunConfig& cfg) {
    const DeSitterParams p = cfg.params();
    const SignAmbiguityReport r = sign_ambiguity_report(p);
    for (const auto& c : r.choices)
        std::cout << c.label << ": coefficient deviation " << fmt(c.coeff_deviation) << ", NW peak at theta="
                  << fmt(c.nw_argmax) << ", field peak at theta=" << fmt(c.field_argmax)
                  << (c.coherent ? " (coherent)" : " (antipodal)") << "\n";
    bool signs_ok = true;
    for (const auto& s : r.signs) signs_ok = signs_ok && s.ok;
    bool peaks_ok = true;
    for (const auto& pk : r.peaks) peaks_ok = peaks_ok && pk.strictly_larger && (!pk.exhaustive_checked || pk.exhaustive_winner);
    std::cout << "sgn(N T_l(0)) = (-1)^l for l <= " << r.signs.back().l << ": " << (signs_ok ? "PASS" : "FAIL") << "\n"
              << "s_l = (-1)^l maximizes the delta peak for L <= " << r.peaks.back().L << ": "
              << (peaks_ok ? "PASS" : "FAIL") << "\n";

    ojson j;
    j["params"] = params_to_json(p);
    ojson ch = ojson::array();
    for (const auto& c : r.choices)
        ch.push_back(ojson{{"label", c.label},
                           {"s0", c.s0},
                           {"s1", c.s1},
                           {"nw_coeffs", {c.nw_coeffs[0].real(), c.nw_coeffs[1].real()}},
                           {"field_coeffs", {c.field_coeffs[0], c.field_coeffs[1]}},
                           {"coeff_deviation", c.coeff_deviation},
                           {"nw_argmax", c.nw_argmax},
                           {"field_argmax", c.field_argmax},
                           {"coherent", c.coherent}});
    j["choices"] = ch;
    ojson sg = ojson::array();
    for (const auto& s : r.signs) sg.push_back(ojson{{"l", s.l}, {"NT0", s.value}, {"sign", s.sign}, {"ok", s.ok}});
    j["signs"] = sg;
    ojson pk = ojson::array();
    for (const auto& q : r.peaks)
        pk.push_back(ojson{{"L", q.L},
                           {"baseline", q.baseline},
                           {"best_flip", q.best_flip},
                           {"best_flip_l", q.best_flip_l},
                           {"strictly_larger", q.strictly_larger}});
    j["peaks"] = pk;
    j["pass"] = r.all_ok();
    emit(cfg, "signdemo.json", dump_json(j));

    std::ostringstream csv;
    csv << std::setprecision(17) << "theta,nw_s0_ne_s1,field_s0_ne_s1,nw_s0_eq_s1,field_s0_eq_s1\n";
    for (std::size_t k = 0; k < r.choices[0].theta.size(); ++k)
        csv << r.choices[0].theta[k] << ',' << r.choices[0].nw_profile[k] << ',' << r.choices[0].field_profile[k] << ','
            << r.choices[1].nw_profile[k] << ',' << r.choices[1].field_profile[k] << '\n';
    emit(cfg, "signdemo_profiles.csv", csv.str());
    return r.all_ok() ? kPass : kFail;
}

int cmd_fixtures_verify(const RunConfig& cfg, const std::string& path, bool verbose) {
    if (!fs::exists(path)) {
        std::cerr << "fixture file not found: " << path << "\n";
        return kUsage;
    }
    const FixturePack pack = load_fixture_pack(path);
    const auto res = verify_pack(pack);
    std::size_t failed = 0;
    std::map<std::string, std::pair<int, int>> per_id;
    ojson bad = ojson::array();
    for (const auto& o : res) {
        auto& c = per_id[o.function_id];
        ++c.first;
        if (o.pass) {
            ++c.second;
            if (verbose)
                std::cout << "record " << o.index << " " << o.function_id << " err=" << fmt(o.error) << " ok\n";
            continue;
        }
        ++failed;
        std::cout << "FAIL record " << o.index << " " << o.function_id << ": got " << fmt(o.got) << ", want "
                  << fmt(o.want) << ", err " << fmt(o.error) << " > tol " << fmt(o.tolerance)
                  << (o.message.empty() ? "" : " (" + o.message + ")") << "\n";
        bad.push_back(ojson{{"index", o.index}, {"function_id", o.function_id}, {"error", o.error}});
    }
    for (const auto& [id, c] : per_id) std::cout << id << ": " << c.second << "/" << c.first << "\n";
    std::cout << (res.size() - failed) << "/" << res.size() << " records within tolerance\n";
    ojson j;
    j["generator_version"] = pack.generator_version;
    j["records"] = res.size();
    j["failed"] = bad;
    emit(cfg, "fixtures.json", dump_json(j));
    return failed == 0 ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Newton-Wigner localization on three-dimensional de Sitter space"};
    app.set_config("--config", "", "flat key = value file; command-line flags win");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--alpha", cfg.alpha, "de Sitter radius");
    app.add_option("--M", cfg.M, "dimensionless mass alpha mu");
    app.add_option("--lmax", cfg.l_max, "harmonic truncation");
    app.add_option("--grid", cfg.grid, "sphere grid NxM (theta nodes x phi nodes)");
    app.add_option("--t0", cfg.t0, "first time");
    app.add_option("--t1", cfg.t1, "last time");
    app.add_option("--steps", cfg.steps, "number of time steps");
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--tol", cfg.tol, "pass/fail tolerance");
    app.add_option("--seed", cfg.seed, "seed for random states");

    auto* classify = app.add_subcommand("classify", "representation series, nu and Casimir value");
    auto* ortho = app.add_subcommand("ortho", "Klein-Gordon Gram matrix of the modes");
    std::string sector = "all";
    ortho->add_option("--sector", sector, "uu, vv, uv or all");
    auto* casimir = app.add_subcommand("casimir", "finite-difference Casimir estimates");
    double probe_theta = 1.1, probe_phi = 0.4;
    casimir->add_option("--theta", probe_theta, "probe polar angle");
    casimir->add_option("--phi", probe_phi, "probe azimuth");
    auto* evolve = app.add_subcommand("evolve", "time trace of a Newton-Wigner wavepacket");
    std::vector<double> packet{0.6, 0.3, 3.0};
    evolve->add_option("--packet", packet, "theta0,phi0,width")->delimiter(',')->expected(3);
    auto* position = app.add_subcommand("position", "position operator checks and expectation trace");
    std::string state_file;
    position->add_option("--state", state_file, "state JSON file (default: random state from --seed)");
    auto* signdemo = app.add_subcommand("signdemo", "sign-ambiguity demonstration");
    auto* fixtures = app.add_subcommand("fixtures-verify", "compare evaluators against the fixture pack");
    std::string fixture_path = DSNW_DEFAULT_FIXTURES;
    bool verbose = false;
    fixtures->add_option("--fixtures", fixture_path, "fixture pack JSON");
    fixtures->add_flag("--verbose", verbose, "print every record");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }

    try {
        cfg.finalize();
        if (*classify) return cmd_classify(cfg);
        if (*ortho) return cmd_ortho(cfg, sector);
        if (*casimir) return cmd_casimir(cfg, probe_theta, probe_phi);
        if (*evolve) return cmd_evolve(cfg, packet);
        if (*position) return cmd_position(cfg, state_file);
        if (*signdemo) return cmd_signdemo(cfg);
        if (*fixtures) return cmd_fixtures_verify(cfg, fixture_path, verbose);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}

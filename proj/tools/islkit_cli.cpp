// Command-line front end: imaginarity measures of stored states, qubit
// trajectory generation, lower-bound evaluation, threshold times, and the
// bundled benchmark datasets. All numeric output is deterministic: fixed
// printf formats, ordered JSON maps, '\n' line endings, C locale.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "islkit/bounds.hpp"
#include "islkit/liouville.hpp"
#include "islkit/measures.hpp"

namespace {

using islkit::BoundReport;
using islkit::DensityMatrix;
using islkit::Generator;
using islkit::RateFunction;
using islkit::Trajectory;
using islkit::errors::config_error;
using islkit::matfun::Matrix;
using nlohmann::json;

std::string format_scalar(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%#.12g", v);
    return buf;
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("invalid JSON in ") + path + ": " + e.what());
    }
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) {
        throw config_error(where + " must be a JSON object");
    }
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw config_error("unknown key \"" + item.key() + "\" in " + where);
        }
    }
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key)) {
        throw config_error("missing required key \"" + key + "\"");
    }
    if (!j.at(key).is_number()) {
        throw config_error("key \"" + key + "\" must be a number");
    }
    return j.at(key).get<double>();
}

std::string require_string(const json& j, const std::string& key) {
    if (!j.contains(key)) {
        throw config_error("missing required key \"" + key + "\"");
    }
    if (!j.at(key).is_string()) {
        throw config_error("key \"" + key + "\" must be a string");
    }
    return j.at(key).get<std::string>();
}

// gamma is either a nonnegative constant or a path to a JSON rate table
// {"times": [...], "values": [...]}.
RateFunction parse_gamma(const json& j) {
    if (!j.contains("gamma")) {
        throw config_error("missing required key \"gamma\"");
    }
    const json& v = j.at("gamma");
    if (v.is_number()) {
        const double g = v.get<double>();
        if (!(g >= 0.0)) {
            throw config_error("constant gamma must be nonnegative");
        }
        return RateFunction::constant(g);
    }
    if (v.is_string()) {
        const json table = load_json_file(v.get<std::string>());
        reject_unknown_keys(table, {"times", "values"}, "rate table");
        if (!table.contains("times") || !table.contains("values") ||
            !table.at("times").is_array() || !table.at("values").is_array()) {
            throw config_error("rate table needs \"times\" and \"values\" arrays");
        }
        std::vector<double> times, values;
        for (const json& x : table.at("times")) {
            if (!x.is_number()) throw config_error("rate table times must be numbers");
            times.push_back(x.get<double>());
        }
        for (const json& x : table.at("values")) {
            if (!x.is_number()) throw config_error("rate table values must be numbers");
            values.push_back(x.get<double>());
        }
        return RateFunction::tabulated(times, values);
    }
    throw config_error("key \"gamma\" must be a number or a table path");
}

double default_dt_from_env() {
    const char* env = std::getenv("ISLKIT_DT");
    if (env == nullptr || *env == '\0') {
        return islkit::kDefaultDt;
    }
    char* end = nullptr;
    const double dt = std::strtod(env, &end);
    if (end == nullptr || *end != '\0' || !(dt > 0.0)) {
        throw config_error(std::string("ISLKIT_DT must be a positive number, got \"") +
                           env + "\"");
    }
    return dt;
}

Matrix pauli_x() {
    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    return x;
}

// Everything shared by the config-driven commands: a named model plus its
// horizon and step. theorems/fidelity are only read by `bound`, the
// measure/epsilon/t_max block only by `teps`.
struct ModelRun {
    std::string model;
    double theta = 0.0;
    double omega = 0.0;
    double omega0 = 0.0;
    std::optional<RateFunction> gamma;
    double T = 0.0;
    double dt = islkit::kDefaultDt;
    std::string output;     // config-level output path ("" = stdout)
    std::string format;     // "" = command default
    std::vector<std::string> theorems;
    double fidelity = -1.0; // valid only when "StochApprox" was requested
    islkit::MeasureKind measure_kind = islkit::MeasureKind::TraceDistance;
    double epsilon = 0.0;
    double t_max = 0.0;
};

std::set<std::string> model_keys(const std::string& model) {
    if (model == "dephasing") return {"theta", "gamma", "omega0"};
    if (model == "dissipative") return {"theta", "gamma"};
    if (model == "unitary_x") return {"theta", "omega"};
    if (model == "geodesic_dephasing") return {"theta"};
    throw config_error("unknown model \"" + model + "\"");
}

enum class ConfigFor { Evolve, Bound, Teps };

ModelRun parse_model_run(const json& j, ConfigFor purpose) {
    ModelRun run;
    run.model = require_string(j, "model");

    std::set<std::string> allowed = model_keys(run.model);
    allowed.insert({"model", "dt", "output"});
    if (purpose == ConfigFor::Evolve || purpose == ConfigFor::Bound) {
        allowed.insert({"T", "format"});
    }
    if (purpose == ConfigFor::Bound) {
        allowed.insert({"theorems", "fidelity"});
    }
    if (purpose == ConfigFor::Teps) {
        if (run.model == "geodesic_dephasing") {
            throw config_error("threshold times need a generator-backed model");
        }
        allowed.insert({"measure", "epsilon", "t_max"});
    }
    reject_unknown_keys(j, allowed, "config");

    if (run.model == "unitary_x") {
        run.omega = require_number(j, "omega");
        run.theta = j.contains("theta") ? require_number(j, "theta") : 0.0;
    } else {
        run.theta = require_number(j, "theta");
    }
    if (run.model == "dephasing" || run.model == "dissipative") {
        run.gamma = parse_gamma(j);
    }
    if (run.model == "dephasing" && j.contains("omega0")) {
        run.omega0 = require_number(j, "omega0");
    }

    run.dt = j.contains("dt") ? require_number(j, "dt") : default_dt_from_env();
    if (!(run.dt > 0.0)) {
        throw config_error("dt must be positive");
    }
    if (purpose == ConfigFor::Evolve || purpose == ConfigFor::Bound) {
        run.T = require_number(j, "T");
        if (!(run.T > 0.0)) {
            throw config_error("T must be positive");
        }
    }
    if (j.contains("output")) {
        run.output = require_string(j, "output");
    }
    if (j.contains("format")) {
        run.format = require_string(j, "format");
        if (run.format != "csv" && run.format != "json") {
            throw config_error("format must be \"csv\" or \"json\"");
        }
    }

    if (purpose == ConfigFor::Bound) {
        if (!j.contains("theorems") || !j.at("theorems").is_array() ||
            j.at("theorems").empty()) {
            throw config_error("key \"theorems\" must be a nonempty array");
        }
        for (const json& t : j.at("theorems")) {
            if (!t.is_string()) {
                throw config_error("theorem labels must be strings");
            }
            run.theorems.push_back(t.get<std::string>());
        }
        const bool wants_stochastic =
            std::count(run.theorems.begin(), run.theorems.end(), "StochApprox") > 0;
        if (wants_stochastic) {
            run.fidelity = require_number(j, "fidelity");
        } else if (j.contains("fidelity")) {
            throw config_error("key \"fidelity\" is only used with \"StochApprox\"");
        }
    }

    if (purpose == ConfigFor::Teps) {
        const std::string name = require_string(j, "measure");
        if (name == "tr") {
            run.measure_kind = islkit::MeasureKind::TraceDistance;
        } else if (name == "rel") {
            run.measure_kind = islkit::MeasureKind::RelativeEntropy;
        } else if (name == "geom") {
            run.measure_kind = islkit::MeasureKind::Geometric;
        } else {
            throw config_error("measure must be \"tr\", \"rel\", or \"geom\"");
        }
        run.epsilon = require_number(j, "epsilon");
        run.t_max = require_number(j, "t_max");
        if (!(run.t_max > 0.0)) {
            throw config_error("t_max must be positive");
        }
    }
    return run;
}

std::optional<Generator> build_generator(const ModelRun& run) {
    if (run.model == "dephasing") {
        return Generator::dephasing(*run.gamma, run.omega0);
    }
    if (run.model == "dissipative") {
        return Generator::dissipative(*run.gamma);
    }
    if (run.model == "unitary_x") {
        return Generator::unitary(run.omega * pauli_x());
    }
    return std::nullopt; // geodesic_dephasing
}

// Closed-form sample grids where the model admits them (bound evaluation),
// so quadrature is the only discretization in play.
Trajectory sampled_trajectory(const ModelRun& run) {
    if (run.model == "dephasing") {
        return islkit::sample_dephasing(run.theta, *run.gamma, run.omega0, run.T,
                                        run.dt);
    }
    if (run.model == "dissipative") {
        return islkit::sample_dissipative(run.theta, *run.gamma, run.T, run.dt);
    }
    if (run.model == "unitary_x") {
        if (run.theta == 0.0) {
            return islkit::sample_x_rotation(run.omega, run.T, run.dt);
        }
        return islkit::propagate(Generator::unitary(run.omega * pauli_x()),
                                 islkit::theta_state(run.theta), run.T, run.dt);
    }
    return islkit::geodesic_dephasing(islkit::theta_state(run.theta), run.T, run.dt);
}

const char* unit_comment(const ModelRun& run) {
    if (run.model == "unitary_x") {
        return "t dimensionless, in units of 1/omega";
    }
    if (run.model == "geodesic_dephasing") {
        return "t dimensionless, in units of the horizon T";
    }
    return "t dimensionless, in units of 1/gamma";
}

// --out flag wins over the config "output" key; empty means stdout.
class OutputTarget {
  public:
    OutputTarget(const std::string& flag_path, const std::string& config_path) {
        const std::string& path = !flag_path.empty() ? flag_path : config_path;
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw config_error("cannot open output file: " + path);
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

int exit_code_for(const std::string& error_name) {
    if (error_name == "StepTooLarge" || error_name == "DegenerateBound" ||
        error_name == "InternalConsistency") {
        return 3; // numerical or bound failure
    }
    return 2; // input, config, or state-validation problem
}

// ---------------------------------------------------------------------------
// Commands

void cmd_measure(const std::string& state_path, const std::string& kind_name,
                 const std::string& out_path) {
    islkit::MeasureKind kind = islkit::MeasureKind::TraceDistance;
    if (kind_name == "rel") {
        kind = islkit::MeasureKind::RelativeEntropy;
    } else if (kind_name == "geom") {
        kind = islkit::MeasureKind::Geometric;
    } else if (kind_name != "tr") {
        throw config_error("measure kind must be \"tr\", \"rel\", or \"geom\"");
    }
    const DensityMatrix rho = islkit::load_state(state_path);
    OutputTarget out(out_path, "");
    out.stream() << format_scalar(islkit::measure(kind, rho)) << '\n';
}

void cmd_evolve(const json& config, const std::string& out_path,
                const std::string& format_flag) {
    const ModelRun run = parse_model_run(config, ConfigFor::Evolve);
    const std::optional<Generator> g = build_generator(run);
    const Trajectory traj =
        g ? islkit::propagate(*g, islkit::theta_state(run.theta), run.T, run.dt)
          : islkit::geodesic_dephasing(islkit::theta_state(run.theta), run.T, run.dt);

    const std::string format = !format_flag.empty() ? format_flag
                               : !run.format.empty() ? run.format
                                                     : "csv";
    OutputTarget out(out_path, run.output);
    if (format == "csv") {
        islkit::write_trajectory_csv(out.stream(), traj, unit_comment(run));
        return;
    }
    json doc;
    doc["comment"] = unit_comment(run);
    doc["times"] = json::array();
    doc["states"] = json::array();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        doc["times"].push_back(traj.times[k]);
        doc["states"].push_back(islkit::state_to_json(traj.states[k]));
    }
    out.stream() << doc.dump(2) << '\n';
}

BoundReport evaluate_named_bound(const std::string& name, const Trajectory& traj,
                                 const ModelRun& run,
                                 const std::optional<Generator>& g) {
    if (name == "T1") return islkit::isl_relative_entropy(traj);
    if (name == "T2") return islkit::isl_trace(traj);
    if (name == "T3") return islkit::isl_geometric(traj);
    if (name == "T4") return islkit::isl_liouville(traj);
    if (name == "Cor1") {
        if (!g) {
            throw islkit::errors::missing_generator("the static bound");
        }
        return islkit::isl_liouville_static(traj.states.front(), traj.states.back(),
                                            *g, traj.horizon());
    }
    if (name == "StochApprox") {
        return islkit::stochastic_approx_bound(traj, run.fidelity);
    }
    throw config_error("unknown theorem label \"" + name + "\"");
}

void cmd_bound(const json& config, const std::string& out_path,
               const std::string& format_flag) {
    const ModelRun run = parse_model_run(config, ConfigFor::Bound);
    const std::optional<Generator> g = build_generator(run);
    const Trajectory traj = sampled_trajectory(run);

    json reports = json::array();
    for (const std::string& name : run.theorems) {
        reports.push_back(evaluate_named_bound(name, traj, run, g).to_json());
    }

    const std::string format = !format_flag.empty() ? format_flag
                               : !run.format.empty() ? run.format
                                                     : "json";
    OutputTarget out(out_path, run.output);
    if (format == "json") {
        out.stream() << reports.dump(2) << '\n';
        return;
    }
    out.stream() << "theorem,delta_I,lambda,t_isl,t_actual\n";
    for (const json& r : reports) {
        out.stream() << r.at("theorem").get<std::string>() << ','
                     << format_full(r.at("delta_I").get<double>()) << ','
                     << format_full(r.at("lambda").get<double>()) << ','
                     << format_full(r.at("t_isl").get<double>()) << ','
                     << (r.at("t_actual").is_null()
                             ? std::string("nan")
                             : format_full(r.at("t_actual").get<double>()))
                     << '\n';
    }
}

void cmd_figure(int id, const std::string& outdir) {
    const double gamma = 2.0;
    const double dt = default_dt_from_env();
    const bool dephasing_model = (id == 2 || id == 4);
    const bool relative_entropy = (id == 2 || id == 3);
    const double thetas[3] = {M_PI / 2.0, M_PI / 3.0, M_PI / 4.0};
    const char* theta_names[3] = {"pi/2", "pi/3", "pi/4"};

    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) {
        throw config_error("cannot create output directory: " + outdir);
    }
    const std::string path = outdir + "/figure" + std::to_string(id) + ".csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw config_error("cannot open output file: " + path);
    }
    out << "# T and t_isl dimensionless, in units of 1/gamma; gamma = 2, omega0 = 0\n";
    out << "T,t_isl_theta_pi2,t_isl_theta_pi3,t_isl_theta_pi4\n";

    const RateFunction rate = RateFunction::constant(gamma);
    int validity_warnings = 0;
    int ordering_warnings = 0;
    for (int j = 1; j <= 60; ++j) {
        const double T = (M_PI / 3.0) * j / 60.0;
        double t_isl[3];
        for (int i = 0; i < 3; ++i) {
            const Trajectory traj =
                dephasing_model
                    ? islkit::sample_dephasing(thetas[i], rate, 0.0, T, dt)
                    : islkit::sample_dissipative(thetas[i], rate, T, dt);
            const BoundReport report = relative_entropy
                                           ? islkit::isl_relative_entropy(traj)
                                           : islkit::isl_geometric(traj);
            t_isl[i] = report.t_isl;
            if (report.t_isl > T + 1e-6) {
                ++validity_warnings;
                std::cerr << "warning: figure " << id << " T=" << format_scalar(T)
                          << " theta " << theta_names[i] << ": t_isl "
                          << format_scalar(report.t_isl) << " exceeds T\n";
            }
        }
        if (t_isl[0] + 1e-12 < t_isl[1] || t_isl[1] + 1e-12 < t_isl[2]) {
            ++ordering_warnings;
            std::cerr << "warning: figure " << id << " T=" << format_scalar(T)
                      << ": theta ordering violated (" << format_full(t_isl[0]) << ", "
                      << format_full(t_isl[1]) << ", " << format_full(t_isl[2])
                      << ")\n";
        }
        out << format_full(T) << ',' << format_full(t_isl[0]) << ','
            << format_full(t_isl[1]) << ',' << format_full(t_isl[2]) << '\n';
    }
    if (validity_warnings + ordering_warnings > 0) {
        std::cerr << "warning: figure " << id << ": " << validity_warnings
                  << " validity and " << ordering_warnings
                  << " ordering violations; data written unmodified\n";
    }
}

void cmd_teps(const json& config, const std::string& out_path) {
    const ModelRun run = parse_model_run(config, ConfigFor::Teps);
    const std::optional<Generator> g = build_generator(run);
    const islkit::TEpsilonResult r =
        islkit::t_epsilon(*g, islkit::theta_state(run.theta), run.measure_kind,
                          run.epsilon, run.t_max, run.dt);
    OutputTarget out(out_path, run.output);
    if (r.reached) {
        out.stream() << format_scalar(r.t) << '\n';
    } else {
        out.stream() << "not-reached\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"imaginarity measures, qubit dynamics, and evolution-time bounds"};
    app.require_subcommand(1);

    std::string config_path, out_path, format_flag;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format_flag, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string state_path, kind_name;
    CLI::App* measure = app.add_subcommand("measure", "print a measure of a state");
    measure->add_option("state", state_path, "state JSON file")->required();
    measure->add_option("--kind", kind_name, "tr | rel | geom")->required();
    measure->fallthrough();

    CLI::App* evolve = app.add_subcommand("evolve", "integrate and emit a trajectory");
    evolve->fallthrough();

    CLI::App* bound = app.add_subcommand("bound", "evaluate lower bounds on a run");
    bound->fallthrough();

    int figure_id = 0;
    std::string outdir = ".";
    CLI::App* figure = app.add_subcommand("figure", "write a benchmark dataset");
    figure->add_option("--id", figure_id, "dataset id")
        ->required()
        ->check(CLI::Range(2, 5));
    figure->add_option("--outdir", outdir, "output directory (default: .)");
    figure->fallthrough();

    CLI::App* teps = app.add_subcommand("teps", "threshold time for a measure");
    teps->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (measure->parsed()) {
            cmd_measure(state_path, kind_name, out_path);
        } else if (evolve->parsed()) {
            if (config_path.empty()) throw config_error("evolve needs --config");
            cmd_evolve(load_json_file(config_path), out_path, format_flag);
        } else if (bound->parsed()) {
            if (config_path.empty()) throw config_error("bound needs --config");
            cmd_bound(load_json_file(config_path), out_path, format_flag);
        } else if (figure->parsed()) {
            cmd_figure(figure_id, outdir);
        } else if (teps->parsed()) {
            if (config_path.empty()) throw config_error("teps needs --config");
            cmd_teps(load_json_file(config_path), out_path);
        }
    } catch (const islkit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.name());
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

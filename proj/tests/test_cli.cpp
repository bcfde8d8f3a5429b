#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "islkit/states.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWorkDir = fs::path("cli_test_artifacts");

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    fs::create_directories(kWorkDir);
    static int counter = 0;
    const fs::path out_file = kWorkDir / ("stdout_" + std::to_string(counter) + ".txt");
    const fs::path err_file = kWorkDir / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;

    const std::string command = env_prefix + " \"" ISLKIT_CLI_PATH "\" " + args +
                                " > " + out_file.string() + " 2> " +
                                err_file.string();
    const int status = std::system(command.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

fs::path write_file(const std::string& name, const std::string& content) {
    fs::create_directories(kWorkDir);
    const fs::path path = kWorkDir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

fs::path write_config(const std::string& name, const json& j) {
    return write_file(name, j.dump(2) + "\n");
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return lines;
}

std::vector<double> parse_csv_row(const std::string& line) {
    std::vector<double> values;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        values.push_back(std::stod(cell));
    }
    return values;
}

fs::path mis_state_file() {
    const fs::path path = kWorkDir / "mis.json";
    fs::create_directories(kWorkDir);
    islkit::save_state(islkit::mis_state(), path.string());
    return path;
}

} // namespace

TEST_CASE("measure prints pinned 12-digit values") {
    const fs::path mis = mis_state_file();
    const RunResult rel = run_cli("measure " + mis.string() + " --kind rel");
    CHECK(rel.exit_code == 0);
    CHECK(rel.out == "0.693147180560\n");

    const RunResult tr = run_cli("measure " + mis.string() + " --kind tr");
    CHECK(tr.exit_code == 0);
    CHECK(tr.out == "1.00000000000\n");

    fs::create_directories(kWorkDir);
    const fs::path third = kWorkDir / "theta_third.json";
    islkit::save_state(islkit::theta_state(M_PI / 3.0), third.string());
    const RunResult geom = run_cli("measure " + third.string() + " --kind geom");
    CHECK(geom.exit_code == 0);
    CHECK(geom.out == "0.250000000000\n");

    const fs::path real_state = kWorkDir / "real.json";
    islkit::save_state(islkit::theta_state(0.0), real_state.string());
    const RunResult zero = run_cli("measure " + real_state.string() + " --kind tr");
    CHECK(zero.exit_code == 0);
    CHECK(zero.out == "0.00000000000\n");
}

TEST_CASE("measure rejects malformed input with the validation error name") {
    const fs::path bad = write_file(
        "bad_trace.json",
        R"({"dim": 2, "re": [[0.9, 0.0], [0.0, 0.3]], "im": [[0.0, 0.0], [0.0, 0.0]]})");
    const RunResult r = run_cli("measure " + bad.string() + " --kind tr");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("TraceNotOne") != std::string::npos);

    const RunResult bogus = run_cli("measure " + bad.string() + " --kind bogus");
    CHECK(bogus.exit_code == 2);

    const RunResult missing = run_cli("measure no_such_file.json --kind tr");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("evolve emits a deterministic dephasing trajectory") {
    const fs::path config = write_config("evolve_deph.json",
                                         json{{"model", "dephasing"},
                                              {"theta", M_PI / 2.0},
                                              {"gamma", 2.0},
                                              {"T", 1.0},
                                              {"dt", 1e-3}});
    const RunResult first = run_cli("evolve --config " + config.string());
    const RunResult second = run_cli("evolve --config " + config.string());
    REQUIRE(first.exit_code == 0);
    CHECK(first.out == second.out); // byte-identical reruns

    const std::vector<std::string> lines = split_lines(first.out);
    REQUIRE(lines.size() == 1003); // comment + header + 1001 samples
    CHECK(lines[0].rfind("# ", 0) == 0);
    CHECK(lines[1] == "t,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11");

    // final row: off-diagonal is -i e^{-2}/2 for this run
    const std::vector<double> last = parse_csv_row(lines.back());
    REQUIRE(last.size() == 9);
    CHECK(std::abs(last[0] - 1.0) <= 1e-12);
    CHECK(std::abs(last[3] - 0.0) <= 1e-7);                          // re_01
    CHECK(std::abs(last[4] + std::exp(-2.0) / 2.0) <= 1e-7);         // im_01
    CHECK(std::abs(last[1] - 0.5) <= 1e-7);                          // re_00
}

TEST_CASE("evolve with a zero drive emits constant rows") {
    const fs::path config = write_config("evolve_zero.json",
                                         json{{"model", "unitary_x"},
                                              {"omega", 0.0},
                                              {"theta", M_PI / 3.0},
                                              {"T", 0.5},
                                              {"dt", 0.1}});
    const RunResult r = run_cli("evolve --config " + config.string());
    REQUIRE(r.exit_code == 0);
    const std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(lines.size() == 8); // comment + header + 6 samples
    const std::string first_row = lines[2].substr(lines[2].find(','));
    const std::string last_row = lines.back().substr(lines.back().find(','));
    CHECK(first_row == last_row);
}

TEST_CASE("environment step override shapes the grid and rejects garbage") {
    const fs::path config = write_config("evolve_env.json",
                                         json{{"model", "dephasing"},
                                              {"theta", M_PI / 2.0},
                                              {"gamma", 2.0},
                                              {"T", 0.5}});
    const RunResult r =
        run_cli("evolve --config " + config.string(), "ISLKIT_DT=0.25");
    REQUIRE(r.exit_code == 0);
    CHECK(split_lines(r.out).size() == 5); // comment + header + 3 samples

    const RunResult bad =
        run_cli("evolve --config " + config.string(), "ISLKIT_DT=fast");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("evolve propagates numerical blowups as exit 3") {
    const fs::path config = write_config("evolve_blowup.json",
                                         json{{"model", "dissipative"},
                                              {"theta", M_PI / 2.0},
                                              {"gamma", 500.0},
                                              {"T", 1.0},
                                              {"dt", 0.5}});
    const RunResult r = run_cli("evolve --config " + config.string());
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("StepTooLarge") != std::string::npos);
}

TEST_CASE("bound reproduces the driven-qubit reference window") {
    const fs::path config = write_config("bound_unitary.json",
                                         json{{"model", "unitary_x"},
                                              {"omega", 1.0},
                                              {"T", M_PI / 4.0},
                                              {"dt", 1e-5},
                                              {"theorems", {"T1"}}});
    const RunResult r = run_cli("bound --config " + config.string());
    REQUIRE(r.exit_code == 0);
    const json reports = json::parse(r.out);
    REQUIRE(reports.is_array());
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].at("theorem") == "T1");
    const double t_isl = reports[0].at("t_isl").get<double>();
    CHECK(t_isl >= 0.2142);
    CHECK(t_isl <= 0.2152);
    CHECK(reports[0].at("t_actual").get<double>() ==
          doctest::Approx(M_PI / 4.0).epsilon(1e-12));
    CHECK(reports[0].at("diagnostics").at("valid").get<double>() == 1.0);
}

TEST_CASE("bound reports zero-change runs as vacuous") {
    const fs::path config = write_config("bound_vacuous.json",
                                         json{{"model", "unitary_x"},
                                              {"omega", 0.0},
                                              {"T", 0.5},
                                              {"dt", 1e-2},
                                              {"theorems", {"T1", "T2", "T3"}}});
    const RunResult r = run_cli("bound --config " + config.string());
    REQUIRE(r.exit_code == 0);
    const json reports = json::parse(r.out);
    REQUIRE(reports.size() == 3);
    for (const json& report : reports) {
        CHECK(report.at("t_isl").get<double>() == 0.0);
        CHECK(report.at("diagnostics").at("vacuous").get<double>() == 1.0);
    }
}

TEST_CASE("bound saturates on the geodesic run and respects format selection") {
    const fs::path config = write_config("bound_geodesic.json",
                                         json{{"model", "geodesic_dephasing"},
                                              {"theta", M_PI / 3.0},
                                              {"T", 1.0},
                                              {"dt", 1e-3},
                                              {"theorems", {"T2"}}});
    const RunResult r = run_cli("bound --config " + config.string());
    REQUIRE(r.exit_code == 0);
    const json reports = json::parse(r.out);
    const double t_isl = reports[0].at("t_isl").get<double>();
    CHECK(t_isl / 1.0 >= 0.99999);
    CHECK(t_isl / 1.0 <= 1.00001);

    const RunResult csv =
        run_cli("bound --config " + config.string() + " --format csv");
    REQUIRE(csv.exit_code == 0);
    const std::vector<std::string> lines = split_lines(csv.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "theorem,delta_I,lambda,t_isl,t_actual");
    CHECK(lines[1].rfind("T2,", 0) == 0);
}

TEST_CASE("strict config parsing rejects unknown keys and bad values") {
    const fs::path typo = write_config("bound_typo.json",
                                       json{{"model", "dephasing"},
                                            {"theta", M_PI / 2.0},
                                            {"gama", 2.0},
                                            {"T", 0.5},
                                            {"theorems", {"T2"}}});
    const RunResult r = run_cli("bound --config " + typo.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("unknown key") != std::string::npos);

    const fs::path bad_model = write_config("bound_bad_model.json",
                                            json{{"model", "teleportation"},
                                                 {"T", 0.5},
                                                 {"theorems", {"T2"}}});
    CHECK(run_cli("bound --config " + bad_model.string()).exit_code == 2);

    const fs::path no_fidelity = write_config("bound_no_f.json",
                                              json{{"model", "dephasing"},
                                                   {"theta", M_PI / 2.0},
                                                   {"gamma", 2.0},
                                                   {"T", 0.5},
                                                   {"theorems", {"StochApprox"}}});
    CHECK(run_cli("bound --config " + no_fidelity.string()).exit_code == 2);

    const fs::path stray_fidelity = write_config("bound_stray_f.json",
                                                 json{{"model", "dephasing"},
                                                      {"theta", M_PI / 2.0},
                                                      {"gamma", 2.0},
                                                      {"T", 0.5},
                                                      {"fidelity", 0.5},
                                                      {"theorems", {"T2"}}});
    CHECK(run_cli("bound --config " + stray_fidelity.string()).exit_code == 2);

    CHECK(run_cli("bound").exit_code == 2); // --config missing entirely
}

TEST_CASE("threshold command prints the crossing or not-reached") {
    const json base{{"model", "dephasing"}, {"theta", M_PI / 2.0}, {"gamma", 2.0},
                    {"measure", "tr"},      {"epsilon", 1e-2},     {"t_max", 3.0},
                    {"dt", 1e-3}};
    const fs::path config = write_config("teps.json", base);
    const RunResult r = run_cli("teps --config " + config.string());
    REQUIRE(r.exit_code == 0);
    CHECK(std::abs(std::stod(r.out) - std::log(100.0) / 2.0) <= 1e-6);

    json short_horizon = base;
    short_horizon["t_max"] = 0.5;
    const fs::path short_config = write_config("teps_short.json", short_horizon);
    const RunResult miss = run_cli("teps --config " + short_config.string());
    REQUIRE(miss.exit_code == 0);
    CHECK(miss.out == "not-reached\n");

    json bad_eps = base;
    bad_eps["epsilon"] = -1.0;
    const fs::path bad_config = write_config("teps_bad.json", bad_eps);
    CHECK(run_cli("teps --config " + bad_config.string()).exit_code == 2);
}

TEST_CASE("figure command writes the benchmark dataset layout") {
    fs::create_directories(kWorkDir);
    const RunResult r =
        run_cli("figure --id 2 --outdir " + kWorkDir.string(), "ISLKIT_DT=2e-3");
    REQUIRE(r.exit_code == 0);
    const std::string data = slurp(kWorkDir / "figure2.csv");
    const std::vector<std::string> lines = split_lines(data);
    REQUIRE(lines.size() == 62); // comment + header + 60 rows
    CHECK(lines[0].rfind("# ", 0) == 0);
    CHECK(lines[1] == "T,t_isl_theta_pi2,t_isl_theta_pi3,t_isl_theta_pi4");

    const std::vector<double> last = parse_csv_row(lines.back());
    REQUIRE(last.size() == 4);
    CHECK(last[0] == doctest::Approx(M_PI / 3.0).epsilon(1e-12));
    // ordering and validity on the final row
    CHECK(last[1] >= last[2]);
    CHECK(last[2] >= last[3]);
    CHECK(last[1] <= last[0] + 1e-6);

    const RunResult bad_id = run_cli("figure --id 7 --outdir " + kWorkDir.string());
    CHECK(bad_id.exit_code == 2);
}

TEST_CASE("out flag writes files instead of stdout") {
    const fs::path mis = mis_state_file();
    const fs::path target = kWorkDir / "measured.txt";
    const RunResult r =
        run_cli("measure " + mis.string() + " --kind rel --out " + target.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(target) == "0.693147180560\n");
}

// End-to-end tests that drive the installed binary through a shell.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "menumech/io.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace menumech;
namespace mt = menumech::testing;

namespace {

const fs::path& workdir() {
    static fs::path dir = [] {
        auto p = fs::temp_directory_path() / ("menumech_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

struct CmdResult {
    int exit_code{-1};
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// args is everything after the binary name; env is an optional VAR=val prefix
CmdResult run_cli(const std::string& args, const std::string& env = "") {
    auto out_path = workdir() / "stdout.txt";
    auto err_path = workdir() / "stderr.txt";
    std::string cmd = "cd " + workdir().string() + " && " + (env.empty() ? "" : env + " ") +
                      MENUMECH_CLI_PATH " " + args + " > " + out_path.string() + " 2> " +
                      err_path.string();
    int status = std::system(cmd.c_str());
    CmdResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

TEST_CASE("simulate reproduces the short geometric run") {
    auto r = run_cli("simulate --ratio 0.5 -T 12 -v 0.6 --buyer myopic -o sim.csv");
    CHECK(r.exit_code == 0);

    auto rows = read_csv(workdir() / "sim.csv");
    REQUIRE(rows.size() == 13);  // header + 12 rounds
    CHECK(rows[0][0] == "round");
    // phase one holds [0, 1] for its 4-round delay
    for (std::size_t t = 1; t <= 4; ++t) {
        CHECK(std::stod(rows[t][2]) == 0.0);
        CHECK(std::stod(rows[t][3]) == 1.0);
    }
    // with v = 0.6 the refined interval is [0.35, 0.85], held for 5 rounds
    for (std::size_t t = 5; t <= 9; ++t) {
        CHECK(std::stod(rows[t][2]) == doctest::Approx(0.35).epsilon(1e-12));
        CHECK(std::stod(rows[t][3]) == doctest::Approx(0.85).epsilon(1e-12));
    }
}

TEST_CASE("simulate with a worthless buyer accumulates no regret") {
    auto r = run_cli("simulate --ratio 0.5 -T 12 -v 0 -o zero.csv");
    CHECK(r.exit_code == 0);
    auto rows = read_csv(workdir() / "zero.csv");
    REQUIRE(rows.size() == 13);
    CHECK(std::stod(rows.back().back()) == doctest::Approx(0.0));
}

TEST_CASE("increasing discount weights are a config error") {
    auto r = run_cli("simulate --gamma 0.5 1.0 -v 0.5 -o bad.csv");
    CHECK(r.exit_code == 2);
}

TEST_CASE("a one-cell sweep matches the simulate total") {
    auto sim = run_cli("simulate --ratio 0.5 -T 12 -v 0.6 --buyer phasedp -o sim_dp.csv");
    REQUIRE(sim.exit_code == 0);
    auto sw = run_cli(
        "sweep --ratio 0.5 -T 12 --v-min 0.6 --v-max 0.6 --v-count 1 --buyer phasedp "
        "-o sweep_one.csv");
    REQUIRE(sw.exit_code == 0);

    auto sim_rows = read_csv(workdir() / "sim_dp.csv");
    auto sw_rows = read_csv(workdir() / "sweep_one.csv");
    REQUIRE(sw_rows.size() == 2);
    // full-precision CSVs: the totals agree bit for bit
    CHECK(sw_rows[1][2] == sim_rows.back().back());
    CHECK(std::stod(sw_rows[1][2]) <= std::stod(sw_rows[1][3]) + 1e-9);
}

TEST_CASE("empty value grid is a config error") {
    auto r = run_cli("sweep --ratio 0.5 -T 12 --v-count 0 -o nope.csv");
    CHECK(r.exit_code == 2);
}

TEST_CASE("sweeps are deterministic across repeats and thread counts") {
    std::string base = "sweep --ratio 0.5 -T 50 -T 100 --v-count 11 --buyer phasedp ";
    REQUIRE(run_cli(base + "--threads 1 -o det_a.csv").exit_code == 0);
    REQUIRE(run_cli(base + "--threads 8 -o det_b.csv").exit_code == 0);
    CHECK(slurp(workdir() / "det_a.csv") == slurp(workdir() / "det_b.csv"));
}

TEST_CASE("check accepts the worked mechanism") {
    save_json_file((workdir() / "worked.json").string(),
                   direct_to_json(mt::worked_instance(), mt::worked_seq()));
    auto r = run_cli("check -i worked.json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("min_slack 0") != std::string::npos);
}

TEST_CASE("check names the violated constraint") {
    auto mech = mt::worked_instance();
    mech.rows[0][0].payment = 0.4;
    mech.rows[0][1].payment = 0.6;
    save_json_file((workdir() / "broken.json").string(), direct_to_json(mech, mt::worked_seq()));

    auto r = run_cli("check -i broken.json");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("(v=0.5, v_hat=0.5, t=1)") != std::string::npos);
}

TEST_CASE("convert emits the tree and revenue report") {
    save_json_file((workdir() / "worked.json").string(),
                   direct_to_json(mt::worked_instance(), mt::worked_seq()));
    auto r = run_cli(
        "convert -i worked.json --audit --tree-out t.json --adjusted-out adj.json "
        "--report-out rep.json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("adjustment steps: 1") != std::string::npos);

    auto tree = tree_from_json(load_json_file((workdir() / "t.json").string()));
    REQUIRE(tree.depth == 2);
    REQUIRE(tree.root->menu.size() == 2);
    CHECK(tree.root->menu.option(1).allocation == 1.0);
    CHECK(tree.root->menu.option(1).payment == doctest::Approx(0.5));

    auto rep = load_json_file((workdir() / "rep.json").string());
    CHECK(rep.at("chain_ok").get<bool>());
    CHECK(rep.at("rev_adjusted")[1].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("convert refuses a tampered mechanism") {
    auto mech = mt::worked_instance();
    mech.rows[1][0].payment = 0.9;
    mech.rows[1][1].payment = 0.9;
    save_json_file((workdir() / "tampered.json").string(),
                   direct_to_json(mech, mt::worked_seq()));
    auto r = run_cli("convert -i tampered.json");
    CHECK(r.exit_code == 4);
    CHECK(r.err.find("not compliant") != std::string::npos);
}

TEST_CASE("lowerbound grid holds") {
    auto r = run_cli("lowerbound");
    CHECK(r.exit_code == 0);
    // header plus twelve instances
    int lines = 0;
    for (char c : r.out)
        if (c == '\n') ++lines;
    CHECK(lines == 13);
}

TEST_CASE("relative outputs land in MENUMECH_OUT_DIR") {
    auto dir = workdir() / "outbox";
    auto r = run_cli("simulate --ratio 0.5 -T 12 -v 0.5 -o routed.csv",
                     "MENUMECH_OUT_DIR=" + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "routed.csv"));
    CHECK_FALSE(fs::exists(workdir() / "routed.csv"));
}

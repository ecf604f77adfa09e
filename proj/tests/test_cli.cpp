#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

const std::string cli = STOBIF_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "stobif_cli_stdout.txt";
    const std::string cmd = cli + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.stdout_text = ss.str();
    return r;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "stobif_cli_test";
    fs::create_directories(dir);
    return dir;
}

// Rows of one CSV column, skipping comments and the header line.
std::vector<std::string> column(const std::string& csv, std::size_t idx) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        for (std::size_t i = 0; i <= idx; ++i)
            if (!std::getline(ls, field, ','))
                field.clear();
        out.push_back(field);
    }
    return out;
}

} // namespace

TEST_CASE("invalid r-steps exits with the config code and writes nothing") {
    const fs::path out = work_dir() / "never.csv";
    fs::remove(out);
    const RunResult r = run("sweep --system pitchfork --r-steps 1 -o " + out.string());
    CHECK(r.exit_code == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("unknown flags exit with the config code") {
    const RunResult r = run("orbit --system pitchfork --no-such-flag 1");
    CHECK(r.exit_code == 2);
}

TEST_CASE("unknown system exits with the config code") {
    const RunResult r = run("orbit --system hopf --t-final 1");
    CHECK(r.exit_code == 2);
    CHECK(r.stdout_text.find("valid names") != std::string::npos);
}

TEST_CASE("unwritable output exits with the i/o code") {
    const RunResult r = run("orbit --system pitchfork --r 1 --x0 0.5 --t-final 0.5 "
                            "--grid-n 300 -o /proc/definitely/not/here.csv");
    CHECK(r.exit_code == 4);
}

TEST_CASE("orbit command writes a self-describing CSV, byte-identical on rerun") {
    const fs::path out = work_dir() / "orbit.csv";
    const std::string args = "orbit --system transcritical --mode deterministic "
                             "--r 0 --x0 0.5 --t-final 4 --grid-n 1200 -o " +
                             out.string();
    REQUIRE(run(args).exit_code == 0);
    const std::string first = slurp(out);
    REQUIRE(run(args).exit_code == 0);
    CHECK(first == slurp(out));

    CHECK(first.find("# system = transcritical\n") != std::string::npos);
    CHECK(first.find("# boundary = reflecting\n") != std::string::npos);
    CHECK(first.find("r,x0,t,mean,mass\n") != std::string::npos);

    // dX = -X^2 from 0.5: means decrease toward 0 along x(t) = 0.5/(1+0.5t).
    const auto means = column(first, 3);
    REQUIRE(means.size() > 3);
    double prev = 1e9;
    for (const auto& s : means) {
        const double v = std::stod(s);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    CHECK(std::stod(means.back()) ==
          doctest::Approx(0.5 / (1.0 + 0.5 * 4.0)).epsilon(0.02));
}

TEST_CASE("config file drives the run; flags take precedence") {
    const fs::path dir = work_dir();
    const fs::path conf = dir / "poly.conf";
    {
        std::ofstream c(conf);
        c << "# gbm-style linear system\n"
          << "drift = [[1, 0, 1]]\n"
          << "diffusion = [[1, 0.3, 0]]\n"
          << "r = -1\n"
          << "x0 = 1\n"
          << "t-final = 1\n"
          << "grid-n = 1200\n"
          << "x-min = -3\n"
          << "x-max = 3\n";
    }
    const fs::path out = dir / "gbm.csv";
    REQUIRE(run("orbit --config " + conf.string() + " -o " + out.string())
                .exit_code == 0);
    const std::string body = slurp(out);
    const auto means = column(body, 3);
    REQUIRE(!means.empty());
    CHECK(std::stod(means.back()) ==
          doctest::Approx(oracles::gbm_mean(1.0, -1.0, 1.0)).epsilon(0.02));

    // A flag overrides the config value: r = 0 keeps the mean at x0.
    REQUIRE(run("orbit --config " + conf.string() + " --r 0 -o " + out.string())
                .exit_code == 0);
    const auto means0 = column(slurp(out), 3);
    CHECK(std::stod(means0.back()) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("oracle command is reproducible per seed") {
    const fs::path out = work_dir() / "oracle.csv";
    const std::string args = "oracle --system pitchfork --r 1 --x0 1 "
                             "--t-final 0.5 --n-paths 2000 --seed 42 -o " +
                             out.string();
    REQUIRE(run(args).exit_code == 0);
    const std::string first = slurp(out);
    CHECK(first.find("r,x0,t,mean,mass,stderr\n") != std::string::npos);
    REQUIRE(run(args).exit_code == 0);
    CHECK(first == slurp(out));
}

TEST_CASE("reproduce writes six diagram CSVs") {
    const fs::path dir = work_dir() / "repro";
    fs::remove_all(dir);
    // Short horizon: a smoke test of the plumbing, not of the diagrams.
    const RunResult r = run("reproduce --t-final 1 --dt 0.005 --fan 5 --output-dir " +
                            dir.string());
    CHECK(r.exit_code == 0);
    int count = 0;
    for (const char* name :
         {"saddle-node_stochastic.csv", "saddle-node_deterministic.csv",
          "transcritical_stochastic.csv", "transcritical_deterministic.csv",
          "pitchfork_stochastic.csv", "pitchfork_deterministic.csv"})
        count += fs::exists(dir / name) ? 1 : 0;
    CHECK(count == 6);
}

TEST_CASE("deterministic pitchfork sweep via the CLI finds -1, 0, 1 at r=1") {
    const fs::path dir = work_dir();
    const fs::path out = dir / "sweep.csv";
    const std::string args =
        "sweep --system pitchfork --mode deterministic --r-min 0.6 --r-max 1 "
        "--r-steps 3 --t-final 20 -o " +
        out.string();
    REQUIRE(run(args).exit_code == 0);
    const std::string body = slurp(out);
    const auto rs = column(body, 0);
    const auto locs = column(body, 1);
    const auto stabs = column(body, 2);
    std::vector<double> at_r1;
    std::vector<std::string> stab_r1;
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (std::stod(rs[i]) == 1.0) {
            at_r1.push_back(std::stod(locs[i]));
            stab_r1.push_back(stabs[i]);
        }
    REQUIRE(at_r1.size() == 3);
    CHECK(at_r1[0] == doctest::Approx(-1.0).epsilon(0.02));
    CHECK(std::abs(at_r1[1]) <= 0.02);
    CHECK(at_r1[2] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(stab_r1[0] == "stable");
    CHECK(stab_r1[1] == "unstable");
    CHECK(stab_r1[2] == "stable");

    // The summary CSV appears next to the diagram.
    CHECK(fs::exists(dir / "sweep_summary.csv"));
}

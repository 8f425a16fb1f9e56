#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzstat/report.hpp"

using namespace fuzzstat;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FUZZSTAT_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("fuzzstat_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

TEST_CASE("format_double round-trips and stays minimal") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(0.0) == "0");
    for (double v : {1.0 / 3.0, 0.1 + 0.2, 1e-9, 123456789.123}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("csv rendering has the documented header and row shape") {
    std::vector<CsvRow> rows;
    DensityProfile prof;
    prof.theta = 1.0;
    prof.epsilon = 0.5;
    prof.entries = {ProfileEntry{1, 1.0, 1, 1.0}, ProfileEntry{2, 2.0, 1, 0.5}};
    append_profile_rows(rows, "pointwise", 0.25, prof);
    append_profile_rows(rows, "equi", std::nullopt, prof);
    const std::string csv = render_csv(rows);
    const std::vector<std::string> lines = split(csv, '\n');
    REQUIRE(lines.size() == 6);  // header + 4 rows + trailing empty
    CHECK(lines[0] == "mode,epsilon,x,n,T,count,density");
    CHECK(lines[1] == "pointwise,0.5,0.25,1,1,1,1");
    CHECK(lines[2] == "pointwise,0.5,0.25,2,2,1,0.5");
    CHECK(lines[3] == "equi,0.5,,1,1,1,1");
    CHECK(lines[5].empty());
}

TEST_CASE("analyze writes cross-consistent reports and exits 0") {
    const fs::path dir = fresh_dir("analyze");
    const int code = run_cli(
        "analyze --example squares --scheme window:n,2n-1 --theta 0.75 --eps 0.5 "
        "--nmax 400 --grid 9 --alpha-grid 9 --index-mode prefix --out " +
        dir.string() + " > " + (dir / "stdout.txt").string());
    CHECK(code == 0);

    REQUIRE(fs::exists(dir / "report.json"));
    REQUIRE(fs::exists(dir / "profile.csv"));
    REQUIRE(fs::exists(dir / "validation.json"));

    const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
    REQUIRE(report.is_array());
    REQUIRE(report.size() == 3);  // pointwise, uniform, equi
    for (const auto& r : report) {
        CHECK(r.contains("mode"));
        CHECK(r["theta"] == 0.75);
        CHECK(r["epsilon"] == 0.5);
        CHECK(r["index_mode"] == "prefix");
        CHECK(r["scheme"] == "window:n,2n-1");
        CHECK(r["weights"] == "weights:unit");
        CHECK(r["entries"].size() == 400);
        CHECK(r["verdict"]["heuristic"] == true);
        CHECK(r["verdict"].contains("decision"));
        CHECK(r["verdict"]["n_max"] == 400);
    }
    // Key order is part of the contract; check the bytes as written.
    const std::string dump = slurp(dir / "report.json");
    CHECK(dump.find("\"mode\"") < dump.find("\"theta\""));
    CHECK(dump.find("\"theta\"") < dump.find("\"epsilon\""));
    CHECK(dump.find("\"epsilon\"") < dump.find("\"index_mode\""));
    CHECK(dump.find("\"scheme\"") < dump.find("\"weights\""));
    CHECK(dump.find("\"weights\"") < dump.find("\"entries\""));
    CHECK(dump.find("\"entries\"") < dump.find("\"verdict\""));

    // CSV mirrors the JSON numbers exactly.
    const std::vector<std::string> lines = split(slurp(dir / "profile.csv"), '\n');
    REQUIRE(lines.size() == 1 + 3 * 400 + 1);
    CHECK(lines[0] == "mode,epsilon,x,n,T,count,density");
    std::size_t row = 1;
    for (const auto& r : report) {
        for (const auto& e : r["entries"]) {
            const std::vector<std::string> f = split(lines[row++], ',');
            REQUIRE(f.size() == 7);
            CHECK(f[0] == r["mode"].get<std::string>());
            CHECK(std::stod(f[1]) == r["epsilon"].get<double>());
            CHECK(std::stoull(f[3]) == e["n"].get<std::uint64_t>());
            CHECK(std::stod(f[4]) == e["T"].get<double>());
            CHECK(std::stoull(f[5]) == e["count"].get<std::uint64_t>());
            CHECK(std::stod(f[6]) == e["density"].get<double>());
        }
    }

    // The squares run pins the documented density value at n = 400.
    const auto& pw = report[0];
    CHECK(pw["mode"] == "pointwise");
    const auto& last = pw["entries"][399];
    CHECK(last["n"] == 400);
    CHECK(last["count"] == 20);  // floor(sqrt(400))

    const std::string console = slurp(dir / "stdout.txt");
    CHECK(console.find("verdict pointwise:") != std::string::npos);
    CHECK(console.find("verdict uniform:") != std::string::npos);
    CHECK(console.find("verdict equi:") != std::string::npos);
}

TEST_CASE("analyze supports mode filters, per-x tables, and repeated eps") {
    const fs::path dir = fresh_dir("analyze_modes");
    const int code = run_cli(
        "analyze --example moving-hump --mode uniform --eps 0.4 --nmax 64 --grid 17 "
        "--alpha-grid 9 --out " +
        dir.string() + " > " + (dir / "stdout.txt").string());
    CHECK(code == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
    REQUIRE(report.size() == 1);
    CHECK(report[0]["mode"] == "uniform");
    CHECK(report[0]["verdict"]["decision"] == "diverges");
    CHECK(slurp(dir / "stdout.txt").find("verdict uniform: diverges") != std::string::npos);

    const fs::path dir2 = fresh_dir("analyze_perx");
    const int code2 = run_cli(
        "analyze --example exp-decay --scheme window:n,2n-1 --eps 0.25 --eps 0.5 "
        "--nmax 32 --grid 5 --alpha-grid 9 --index-mode window --per-x --out " +
        dir2.string() + " > /dev/null");
    CHECK(code2 == 0);
    const nlohmann::json rep2 = nlohmann::json::parse(slurp(dir2 / "report.json"));
    CHECK(rep2.size() == 6);  // three modes per epsilon
    const std::vector<std::string> lines = split(slurp(dir2 / "profile.csv"), '\n');
    // Two epsilons x (5 grid points x 32 rows pointwise + 2 x 32 aggregate rows).
    REQUIRE(lines.size() == 1 + 2 * (5 * 32 + 2 * 32) + 1);
    bool saw_perx = false;
    for (const auto& line : lines)
        if (line.rfind("pointwise,0.25,0.5,", 0) == 0) saw_perx = true;
    CHECK(saw_perx);
}

TEST_CASE("analyze rejects bad configurations with exit 2") {
    CHECK(run_cli("analyze --example bogus --nmax 32 2> /dev/null") == 2);
    CHECK(run_cli("analyze --example squares --scheme window:2x-1 --nmax 32 2> /dev/null") == 2);
    CHECK(run_cli("analyze --example exp-decay --domain 0,2 --nmax 32 2> /dev/null") == 2);
    CHECK(run_cli("analyze --nmax 32 2> /dev/null") == 2);
    CHECK(run_cli("analyze --example squares --index-mode sideways 2> /dev/null") == 2);
    CHECK(run_cli("bogus-subcommand 2> /dev/null") == 2);
}

TEST_CASE("analyze surfaces validation failures with exit 3 and a report") {
    const fs::path dir = fresh_dir("analyze_invalid");
    const int code = run_cli("analyze --example squares --scheme window:n,n+3 --nmax 32 --out " +
                             dir.string() + " 2> /dev/null");
    CHECK(code == 3);
    REQUIRE(fs::exists(dir / "validation.json"));
    const nlohmann::json v = nlohmann::json::parse(slurp(dir / "validation.json"));
    CHECK(v["passed"] == false);
    CHECK_FALSE(fs::exists(dir / "report.json"));
}

TEST_CASE("validate routes spec strings by prefix and reports pass or fail") {
    const fs::path dir = fresh_dir("validate");
    CHECK(run_cli("validate window:1,n weights:unit --out " + dir.string() + " > /dev/null") == 0);
    CHECK(run_cli("validate preset:statistical --out " + dir.string() + " > /dev/null") == 0);
    CHECK(run_cli("validate window:n,n+3 --out " + dir.string() + " > /dev/null") == 3);
    CHECK(run_cli("validate weights:inv_k --out " + dir.string() + " > /dev/null") == 3);
    CHECK(run_cli("validate weights:nope --out " + dir.string() + " 2> /dev/null") == 2);
    REQUIRE(fs::exists(dir / "validation.json"));

    const fs::path dir2 = fresh_dir("validate_out");
    const int code = run_cli("validate preset:lacunary:pow2 --horizon 10000 --out " +
                             dir2.string() + " > " + (dir2 / "stdout.txt").string());
    CHECK(code == 0);
    const nlohmann::json v = nlohmann::json::parse(slurp(dir2 / "validation.json"));
    CHECK(v["passed"] == true);
    CHECK(v["clamped_to_representable_prefix"] == true);
    CHECK(slurp(dir2 / "stdout.txt").find("validation passed") != std::string::npos);
}

TEST_CASE("theorems subcommand reports violations through its exit code") {
    const fs::path dir = fresh_dir("theorems");
    const int code = run_cli("theorems --seed 42 --nmax 16 --out " + dir.string() + " > " +
                             (dir / "stdout.txt").string());
    CHECK(code == 0);
    const nlohmann::json t = nlohmann::json::parse(slurp(dir / "theorems.json"));
    CHECK(t["passed"] == true);
    CHECK(t["seed"] == 42);
    CHECK(slurp(dir / "stdout.txt").find("0 violations") != std::string::npos);

    CHECK(run_cli("theorems --nmax 1 --out " + dir.string() + " > /dev/null") == 0);
}

TEST_CASE("manifest subcommand emits the corpus description") {
    const fs::path dir = fresh_dir("manifest");
    CHECK(run_cli("manifest --out " + dir.string() + " > /dev/null") == 0);
    const nlohmann::json m = nlohmann::json::parse(slurp(dir / "corpus_manifest.json"));
    CHECK(m.is_array());
    CHECK(m.size() == 6);
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help > /dev/null") == 0);
    CHECK(run_cli("analyze --help > /dev/null") == 0);
}

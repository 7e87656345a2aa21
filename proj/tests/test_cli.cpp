#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("eec_cli_test_" + name); }

Run run(const std::string& args)
{
    const fs::path out = scratch("stdout");
    const fs::path err = scratch("stderr");
    const std::string cmd = std::string(EEC_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string cfg(const std::string& name) { return std::string(EEC_SOURCE_DIR) + "/configs/" + name; }
std::string golden(const std::string& name) { return std::string(EEC_SOURCE_DIR) + "/tests/golden/" + name; }

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        if (!line.empty() && line.back() == ',')
            cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

// Header must match exactly; numeric cells to 1e-12 relative (absolute
// below 1e-300), text cells exactly.
void check_against_golden(const std::string& produced, const std::string& golden_file)
{
    const auto got = parse_csv(produced);
    const auto want = parse_csv(slurp(golden(golden_file)));
    REQUIRE(got.size() == want.size());
    REQUIRE(!got.empty());
    CHECK(got[0] == want[0]);
    for (std::size_t r = 1; r < got.size(); ++r) {
        REQUIRE(got[r].size() == want[r].size());
        for (std::size_t c = 0; c < got[r].size(); ++c) {
            CAPTURE(r);
            CAPTURE(c);
            const std::string& a = got[r][c];
            const std::string& b = want[r][c];
            char* end_a = nullptr;
            char* end_b = nullptr;
            const double x = std::strtod(a.c_str(), &end_a);
            const double y = std::strtod(b.c_str(), &end_b);
            if (a.empty() || b.empty() || *end_a || *end_b || a.find(' ') != std::string::npos) {
                CHECK(a == b);
                continue;
            }
            CHECK(std::abs(x - y) <= 1e-12 * std::max(std::abs(y), 1e-300));
        }
    }
}

}  // namespace

TEST_CASE("eec on the centered 2-D config matches the golden table")
{
    const Run r = run("eec " + cfg("rect_centered_2d.cfg"));
    CHECK(r.code == 0);
    check_against_golden(r.out, "rect_centered_2d.csv");
    // 3^2 faces per level, one total per level.
    const auto rows = parse_csv(r.out);
    CHECK(rows.size() == 1 + 9 * 3);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i][5] == rows[1 + 9 * ((i - 1) / 9)][5]);
}

TEST_CASE("sphere output carries the closed form for a centered mean")
{
    const Run r = run("eec " + cfg("sphere_centered.cfg"));
    CHECK(r.code == 0);
    check_against_golden(r.out, "sphere_centered.csv");
    const auto rows = parse_csv(r.out);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double total = std::stod(rows[i][1]);
        const double closed = std::stod(rows[i][2]);
        CHECK(std::abs(total - closed) <= 1e-6 * closed);
    }
    const auto zonal = parse_csv(run("eec " + cfg("sphere_zonal.cfg")).out);
    for (std::size_t i = 1; i < zonal.size(); ++i)
        CHECK(zonal[i][2].empty());
}

TEST_CASE("asymptotic table matches the golden table")
{
    const Run r = run("asymptotic " + cfg("asymptotic_1d.cfg"));
    CHECK(r.code == 0);
    check_against_golden(r.out, "asymptotic_1d.csv");
}

TEST_CASE("--out writes the file instead of stdout")
{
    const fs::path out = scratch("out.csv");
    fs::remove(out);
    const Run r = run("eec " + cfg("rect_centered_2d.cfg") + " --out " + out.string());
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    check_against_golden(slurp(out), "rect_centered_2d.csv");
    fs::remove(out);
}

TEST_CASE("verify prints one line per check and exits 0 when all pass")
{
    const Run quick = run("verify " + cfg("rect_centered_2d.cfg") + " --no-mc");
    CHECK(quick.code == 0);
    CHECK(quick.out.find("PASS identity.hermite_recurrence") != std::string::npos);
    CHECK(quick.out.find("FAIL") == std::string::npos);
    CHECK(quick.out.find("checks passed") != std::string::npos);

    const Run full = run("verify " + cfg("rect_mc_1d.cfg") + " --seed 2");
    CHECK(full.code == 0);
    CHECK(full.out.find("PASS mc.mean_chi.u=2.5") != std::string::npos);
}

TEST_CASE("a failing verification exits 1")
{
    const fs::path bad = scratch("printed.cfg");
    std::ofstream(bad) << slurp(cfg("rect_mc_1d.cfg")) << "\n[formula]\nbracket = printed\n";
    const Run r = run("verify " + bad.string());
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL mc.") != std::string::npos);
    fs::remove(bad);
}

TEST_CASE("configuration problems exit 2 with the line and field")
{
    const fs::path bad = scratch("unsorted.cfg");
    std::ofstream(bad) << "domain = rectangle\ndomain.lo = 0\ndomain.hi = 1\nlevels = 3, 1\n"
                          "noise.family = squared_exponential\nnoise.length_scale = 0.3\n";
    const Run r = run("eec " + bad.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("line 4") != std::string::npos);
    CHECK(r.err.find("[levels]") != std::string::npos);
    fs::remove(bad);

    CHECK(run("eec " + cfg("no_such_file.cfg")).code == 2);
    CHECK(run("").code == 2);
    CHECK(run("frobnicate " + cfg("rect_centered_2d.cfg")).code == 2);

    const Run flat = run("asymptotic " + cfg("constant_mean.cfg"));
    CHECK(flat.code == 2);
    CHECK(flat.err.find("no interior maximum") != std::string::npos);
}

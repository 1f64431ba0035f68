#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

std::string shell_quote(const std::string& s) {
    std::string q = "'";
    for (char c : s)
        q += (c == '\'') ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

// Runs the CLI with the given arguments; stderr folds into stdout.
CmdResult run_cli(const std::vector<std::string>& args, const std::string& env = "") {
    std::string cmd = env + " " + shell_quote(HAMFACTOR_CLI_PATH);
    for (const auto& a : args)
        cmd += " " + shell_quote(a);
    cmd += " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult r;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe))
        r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("hamfactor_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream(p) << content;
        return p.string();
    }
};

const char* kNilpotentPair = R"({"version":1,"blocks":[{"kind":"zero","sizes":[2,2]}]})";
const char* kHyperbolic =
    R"({"version":1,"blocks":[{"kind":"real_pair","lambda":"1","sizes_plus":[1,1],"sizes_minus":[2]}]})";
const char* kOscillator = R"({"version":1,"blocks":[{"kind":"imaginary","b":"1","sizes":[1]}]})";

} // namespace

TEST_CASE("solve-d prints the family and the oracle verdict") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const CmdResult r = run_cli({"solve-d", spec, "--oracle"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("family dimension: 4") != std::string::npos);
    CHECK(r.out.find("oracle: agrees") != std::string::npos);
}

TEST_CASE("solve-d json output carries the schema version and dim") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const CmdResult r = run_cli({"solve-d", spec, "--format", "json"});
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("version") == 1);
    CHECK(j.at("family").at("dim") == 4);
    CHECK(j.at("family").at("general").at("entries")[0][3].at("terms").contains("g1.d_1_4"));
}

TEST_CASE("classify resolves compact parameter names") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const CmdResult compact = run_cli({"classify", spec, "--assign", "d14=1"});
    CHECK(compact.exit_code == 0);
    CHECK(compact.out.find("verdict: poisson") != std::string::npos);
    const CmdResult exact = run_cli({"classify", spec, "--assign", "g1.d_1_4=1"});
    CHECK(exact.out == compact.out);
}

TEST_CASE("classify defaults unassigned parameters to zero") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const CmdResult r = run_cli({"classify", spec});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("verdict: trivial") != std::string::npos);
}

TEST_CASE("classify on the hyperbolic example") {
    TempDir dir;
    const std::string spec = dir.file("hyp.json", kHyperbolic);
    const CmdResult r = run_cli({"classify", spec, "--assign", "d14=1"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("verdict: presymplectic") != std::string::npos);
    CHECK(r.out.find("isotropic fields: 2") != std::string::npos);
}

TEST_CASE("casimirs is a focused view of the classify report") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const CmdResult r = run_cli({"casimirs", spec, "--assign", "d14=1"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("casimirs: 2") != std::string::npos);
    CHECK(r.out.find("verdict") == std::string::npos);
}

TEST_CASE("commutant agrees with its oracle") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const CmdResult r = run_cli({"commutant", spec, "--oracle"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("commutant dimension: 8") != std::string::npos);
    CHECK(r.out.find("oracle: agrees") != std::string::npos);
}

TEST_CASE("integrable emits a fully passing transcript") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const CmdResult r = run_cli({"integrable", spec});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("type (p, q) = (1, 3)") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("report round-trips through verify") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const std::string report = (dir.path / "report.json").string();
    const CmdResult r =
        run_cli({"report", spec, "--assign", "d14=1", "--format", "json", "--out", report});
    CHECK(r.exit_code == 0);
    const CmdResult v = run_cli({"verify", report});
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("[FAIL]") == std::string::npos);

    // Tampering the saved system must fail verification with exit 5.
    std::ifstream in(report);
    nlohmann::json doc = nlohmann::json::parse(in);
    doc["integrable"]["fields"][0]["c"]["entries"][0][0] = "7";
    const std::string bad = dir.file("bad_report.json", doc.dump());
    const CmdResult vb = run_cli({"verify", bad});
    CHECK(vb.exit_code == 5);
}

TEST_CASE("report text and json agree on the numbers") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const CmdResult text = run_cli({"report", spec, "--assign", "d14=1"});
    const CmdResult json = run_cli({"report", spec, "--assign", "d14=1", "--format", "json"});
    CHECK(text.exit_code == 0);
    CHECK(json.exit_code == 0);
    const auto j = nlohmann::json::parse(json.out);
    CHECK(text.out.find("family dimension: 4") != std::string::npos);
    CHECK(j.at("family").at("dim") == 4);
    CHECK(text.out.find("verdict at assignment: poisson") != std::string::npos);
    CHECK(j.at("structure").at("verdict") == "poisson");
    CHECK(text.out.find("type (p, q) = (1, 3)") != std::string::npos);
    CHECK(j.at("integrable").at("p") == 1);
    CHECK(j.at("integrable").at("q") == 3);
}

TEST_CASE("identical invocations are bit-identical") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const CmdResult a = run_cli({"report", spec, "--format", "json", "--seed", "3"});
    const CmdResult b = run_cli({"report", spec, "--format", "json", "--seed", "3"});
    CHECK(a.out == b.out);
}

TEST_CASE("demo-flow emits the documented CSV header") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    const CmdResult r =
        run_cli({"demo-flow", spec, "--assign", "d14=1", "--steps", "10", "--t-max", "1"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("# fixed-step RK4") != std::string::npos);
    CHECK(r.out.find("t,H,casimir1,casimir2") != std::string::npos);
    // 2 comment lines + header + 11 samples
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 14);
}

TEST_CASE("demo-flow on zero dynamics is constant to the bit") {
    TempDir dir;
    const std::string spec =
        dir.file("rest.json", R"({"version":1,"blocks":[{"kind":"zero","sizes":[1,1]}]})");
    const CmdResult r = run_cli({"demo-flow", spec, "--assign", "d11=1", "--steps", "5"});
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line, first_payload;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't')
            continue;
        const std::string payload = line.substr(line.find(','));
        if (first_payload.empty())
            first_payload = payload;
        else
            CHECK(payload == first_payload);
    }
}

TEST_CASE("exit code 2 on malformed json") {
    TempDir dir;
    const std::string spec = dir.file("broken.json", "{\"version\":1,");
    CHECK(run_cli({"solve-d", spec}).exit_code == 2);
    const std::string unknown = dir.file("unknown.json",
        R"({"version":1,"blocks":[{"kind":"zero","sizes":[2],"extra":1}]})");
    CHECK(run_cli({"solve-d", unknown}).exit_code == 2);
}

TEST_CASE("exit code 3 on validation failure") {
    TempDir dir;
    const std::string empty = dir.file("empty.json", R"({"version":1,"blocks":[]})");
    CHECK(run_cli({"solve-d", empty}).exit_code == 3);
    const std::string bad = dir.file("bad.json",
        R"({"version":1,"blocks":[{"kind":"real_pair","lambda":"0","sizes_plus":[1],"sizes_minus":[1]}]})");
    CHECK(run_cli({"solve-d", bad}).exit_code == 3);
}

TEST_CASE("exit code 3 when the dimension cap is exceeded") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    CHECK(run_cli({"solve-d", spec}, "HAMFACTOR_MAX_DIM=3").exit_code == 3);
    CHECK(run_cli({"solve-d", spec}, "HAMFACTOR_MAX_DIM=4").exit_code == 0);
}

TEST_CASE("exit code 4 on usage problems") {
    TempDir dir;
    const std::string spec = dir.file("pair.json", kNilpotentPair);
    CHECK(run_cli({"classify", spec, "--assign", "nope=1"}).exit_code == 4);
    CHECK(run_cli({"classify", spec, "--assign", "d14"}).exit_code == 4);
    CHECK(run_cli({"frobnicate", spec}).exit_code == 4);
    CHECK(run_cli({"solve-d"}).exit_code == 4);
}

TEST_CASE("oscillator demo keeps energy within roundoff") {
    TempDir dir;
    const std::string spec = dir.file("osc.json", kOscillator);
    const CmdResult r = run_cli({"demo-flow", spec, "--assign", "d11=1", "--steps", "1000",
                                 "--t-max", "10"});
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    double h0 = 0;
    bool have_h0 = false;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't')
            continue;
        const auto c1 = line.find(',');
        const double h = std::stod(line.substr(c1 + 1));
        if (!have_h0) {
            h0 = h;
            have_h0 = true;
        }
        CHECK(std::abs(h - h0) <= 1e-9 * std::max(1.0, std::abs(h0)));
    }
    CHECK(have_h0);
}

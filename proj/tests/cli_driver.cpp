// End-to-end test of the command-line tool: writes input files into a
// scratch directory, runs the binary, and checks outputs and exit codes.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int checks = 0, failed = 0;

void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
        ++failed;
        std::cerr << "FAIL: " << what << "\n";
    }
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& command) {
    std::string out_file = (fs::temp_directory_path() / "smt_cli_out.txt").string();
    std::string full = command + " > " + out_file + " 2>&1";
    int code = std::system(full.c_str());
    std::ifstream in(out_file);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    int exit_code = -1;
    if (WIFEXITED(code)) exit_code = WEXITSTATUS(code);
    return {exit_code, buffer.str()};
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-smt-binary>\n";
        return 2;
    }
    const std::string binary = argv[1];
    fs::path dir = fs::temp_directory_path() / "smt_cli_test";
    fs::create_directories(dir);

    // 3-point space: d(a,b) = d(a,c) = 1, d(b,c) = 2
    fs::path space = dir / "space.csv";
    write_file(space, "a,b,c\na,0,1,1\nb,1,0,2\nc,1,2,0\n");

    // complex: vr at r=1 gives maximal faces {a,b} and {a,c}
    {
        RunResult r = run(binary + " complex --input " + space.string() +
                          " --construction vr --r 1");
        expect(r.exit_code == 0, "complex exits 0");
        json j = json::parse(r.output, nullptr, false);
        expect(!j.is_discarded(), "complex output is JSON");
        if (!j.is_discarded()) {
            expect(j.at("maximal_faces") == json::array({{"a", "b"}, {"a", "c"}}),
                   "complex r=1 maximal faces are [[a,b],[a,c]]");
        }
    }

    // complex at r=0 on a classical space: singletons only
    {
        RunResult r = run(binary + " complex --input " + space.string() +
                          " --construction vr --r 0");
        json j = json::parse(r.output, nullptr, false);
        expect(!j.is_discarded() && j.at("maximal_faces").size() == 3,
               "complex r=0 has three singleton faces");
    }

    // determinism: identical invocations produce identical bytes
    {
        RunResult a = run(binary + " complex --input " + space.string() +
                          " --construction cech --r 1");
        RunResult b = run(binary + " complex --input " + space.string() +
                          " --construction cech --r 1");
        expect(a.output == b.output, "complex output is deterministic");
    }

    // malformed CSV: exit code 2 with a line/column message
    {
        fs::path bad = dir / "bad.csv";
        write_file(bad, "a,b\na,0,zebra\nb,1,0\n");
        RunResult r = run(binary + " complex --input " + bad.string() +
                          " --construction vr --r 1");
        expect(r.exit_code == 2, "malformed CSV exits 2");
        expect(r.output.find("line") != std::string::npos, "parse error names the line");
    }

    // wasserstein: forced coupling 0.5*1 + 0.5*2 = 1.5
    {
        fs::path mu = dir / "mu.json";
        fs::path nu = dir / "nu.json";
        write_file(mu, R"({"space":"space","atoms":[{"point":"b","weight":1.0}]})");
        write_file(nu, R"({"space":"space","atoms":[{"point":"a","weight":0.5},)"
                       R"({"point":"c","weight":0.5}]})");
        RunResult r = run(binary + " wasserstein --space " + space.string() + " --mu " +
                          mu.string() + " --nu " + nu.string() + " --p 1");
        expect(r.exit_code == 0, "wasserstein exits 0");
        json j = json::parse(r.output, nullptr, false);
        expect(!j.is_discarded() && std::abs(j.at("distance").get<double>() - 1.5) < 1e-9,
               "wasserstein distance is 1.5");
    }

    // wasserstein across a coproduct: distance "inf"
    {
        fs::path far = dir / "far.csv";
        write_file(far, "a,b\na,0,inf\nb,inf,0\n");
        fs::path mu = dir / "da.json";
        fs::path nu = dir / "db.json";
        write_file(mu, R"({"space":"far","atoms":[{"point":"a","weight":1.0}]})");
        write_file(nu, R"({"space":"far","atoms":[{"point":"b","weight":1.0}]})");
        RunResult r = run(binary + " wasserstein --space " + far.string() + " --mu " +
                          mu.string() + " --nu " + nu.string());
        json j = json::parse(r.output, nullptr, false);
        expect(!j.is_discarded() && j.at("distance") == "inf",
               "infinite distance prints the string inf");
    }

    // contains: uniform measure on {b,c} is not in VR(X;1)
    {
        fs::path m = dir / "bc.json";
        write_file(m, R"({"space":"space","atoms":[{"point":"b","weight":0.5},)"
                      R"({"point":"c","weight":0.5}]})");
        RunResult r = run(binary + " contains --input " + space.string() +
                          " --construction vr --r 1 --measure " + m.string());
        expect(r.exit_code == 0, "contains exits 0");
        json j = json::parse(r.output, nullptr, false);
        expect(!j.is_discarded() && j.at("contains") == false, "contains says false");
        expect(!j.is_discarded() && j.at("failing_face") == json::array({"b", "c"}),
               "contains reports the failing face");

        RunResult r2 = run(binary + " contains --input " + space.string() +
                           " --construction vr --r 2 --measure " + m.string());
        json j2 = json::parse(r2.output, nullptr, false);
        expect(!j2.is_discarded() && j2.at("contains") == true, "contains says true at r=2");
    }

    // betti on a point cloud, CSV output
    {
        fs::path cloud = dir / "cloud.csv";
        write_file(cloud, "p0,0\np1,1\np2,2\n");
        RunResult r = run(binary + " betti --input " + cloud.string() +
                          " --metric l2 --construction vr --r-grid 0:0.5:2 --dim-cap 2"
                          " --format csv");
        expect(r.exit_code == 0, "betti exits 0");
        expect(r.output.rfind("r,b0,b1,b2", 0) == 0, "betti csv header");
        expect(r.output.find("\n0,3,0,0") != std::string::npos,
               "three components at r=0");
        expect(r.output.find("\n1,1,0,0") != std::string::npos, "connected at r=1");
    }

    // verify: the strict containment suite passes and reports the witness
    {
        RunResult r = run(binary + " verify wedge-strict-containment");
        expect(r.exit_code == 0, "verify wedge-strict-containment exits 0");
        json j = json::parse(r.output, nullptr, false);
        expect(!j.is_discarded() && j.at("pass") == true, "verify reports pass");
        expect(!j.is_discarded() &&
                   j.at("results").at("notes").dump().find("{x,y}") != std::string::npos,
               "witness face {x,y} reported");
    }

    // verify homotopy product on user-provided spaces
    {
        fs::path x = dir / "x.csv";
        fs::path y = dir / "y.csv";
        write_file(x, "a0,a1\na0,0,1\na1,1,0\n");
        write_file(y, "b0,b1\nb0,0,2\nb1,2,0\n");
        RunResult r = run(binary + " verify product --input " + x.string() + " --input2 " +
                          y.string() + " --r 2 --samples 25 --seed 1");
        expect(r.exit_code == 0, "verify product exits 0");
        json j = json::parse(r.output, nullptr, false);
        expect(!j.is_discarded() && j.at("pass") == true, "verify product passes");
        expect(!j.is_discarded() && j.at("results").at("retraction_identity_ok") == true,
               "rho iota identity holds");

        RunResult w = run(binary + " verify wedge --input " + x.string() + " --input2 " +
                          y.string() + " --r 3 --samples 25 --seed 1");
        expect(w.exit_code == 0, "verify wedge exits 0");
        json jw = json::parse(w.output, nullptr, false);
        expect(!jw.is_discarded() && jw.at("pass") == true, "verify wedge passes");
    }

    // unknown suite: usage error
    {
        RunResult r = run(binary + " verify no-such-suite");
        expect(r.exit_code == 2, "unknown suite exits 2");
    }

    std::cout << checks - failed << "/" << checks << " CLI checks passed\n";
    return failed == 0 ? 0 : 1;
}

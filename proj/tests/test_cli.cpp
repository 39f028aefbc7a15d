#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

// runs the installed binary with stdout+stderr captured
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto tmp = fs::temp_directory_path() /
                     ("tl_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    const std::string cmd =
        std::string(TWOLEVEL_CLI_PATH) + " " + args + " > " + tmp.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    if (WIFEXITED(status))
        r.code = WEXITSTATUS(status);
    std::ifstream f(tmp, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    r.out = os.str();
    fs::remove(tmp);
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int count_occurrences(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

void check_rel(double a, double b, double rtol) {
    CHECK(std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b)));
}

} // namespace

TEST_CASE("version and usage") {
    const auto v = run_cli("--version");
    CHECK(v.code == 0);
    CHECK(v.out.find('.') != std::string::npos);

    CHECK(run_cli("").code == 2);             // a subcommand is required
    CHECK(run_cli("transmogrify").code == 2); // unknown subcommand
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("constants") {
    const auto text = run_cli("constants");
    CHECK(text.code == 0);
    CHECK(text.out.find("atom: lithium") != std::string::npos);
    CHECK(text.out.find("t_s_s: ") != std::string::npos);
    CHECK(text.out.find(" ns)") != std::string::npos);

    const auto js = run_cli("constants --format json");
    REQUIRE(js.code == 0);
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j["atom"] == "lithium");
    check_rel(j["t_s_s"].get<double>(), 2.7117288923401404e-8, 1e-12);
    check_rel(j["display"]["gamma_s_mhz"].get<double>(), 36.9, 5e-3);
    check_rel(j["display"]["dipole_au"].get<double>(), 2.3448, 1e-3);
    CHECK(j.contains("fine_splitting_rad_s"));

    const auto bad = run_cli("constants --atom unobtainium");
    CHECK(bad.code == 2);
    CHECK(bad.out.find("lithium") != std::string::npos); // error names the built-ins

    const auto list = run_cli("constants --list");
    CHECK(list.code == 0);
    CHECK(list.out.find("lithium") != std::string::npos);
    const auto list_js = run_cli("constants --list --format json");
    CHECK(nlohmann::json::parse(list_js.out).is_array());

    const auto lasers = run_cli("constants --lasers");
    CHECK(lasers.code == 0);
    CHECK(lasers.out.find("coherent-899-21") != std::string::npos);
    CHECK(lasers.out.find("new-focus-6202") != std::string::npos);
    const auto lasers_js = run_cli("constants --lasers --format json");
    CHECK(nlohmann::json::parse(lasers_js.out)["lasers"].size() == 3);
}

TEST_CASE("constants with a preset file") {
    const auto path = fs::temp_directory_path() / "tl_cli_presets.cfg";
    {
        std::ofstream f(path);
        f << "name = testium\n";
        f << "omega0_rad_s = 2.5e15\n";
        f << "dipole_Cm = 1.5e-29\n";
    }
    const auto r = run_cli("--presets " + path.string() + " constants --atom testium --format json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["omega0_rad_s"].get<double>() == 2.5e15);
    CHECK(!j.contains("fine_splitting_rad_s"));
    fs::remove(path);

    CHECK(run_cli("--presets /no/such/file.cfg constants --atom testium").code == 2);
}

TEST_CASE("surface: dimensionless defaults and explicit axes") {
    const auto def = run_cli("surface --kind p1 --dimensionless --nx 7 --ny 5 --format csv");
    REQUIRE(def.code == 0);
    CHECK(def.out.find("# twolevel-surface\n") == 0);
    CHECK(def.out.find("# axis_source: default\n") != std::string::npos);
    CHECK(def.out.find("# nx: 7\n") != std::string::npos);
    CHECK(count_occurrences(def.out, "\n") == 13 + 7 * 5);

    const auto usr = run_cli("surface --kind p2 --dimensionless --x-min 0 --x-max 6.28 "
                             "--y-min -4 --y-max 4 --nx 9 --ny 7 --format json");
    REQUIRE(usr.code == 0);
    const auto j = nlohmann::json::parse(usr.out);
    CHECK(j["kind"] == "P2");
    CHECK(j["axis_source"] == "user");
    CHECK(j["values"].size() == 9 * 7);
    CHECK(j["x"][0].get<double>() == 0.0);

    const auto partial = run_cli("surface --kind p1 --dimensionless --x-min 0");
    CHECK(partial.code == 2);
    CHECK(partial.out.find("all of") != std::string::npos);
}

TEST_CASE("surface: physical grids demand explicit units") {
    const auto bare = run_cli("surface --kind p1");
    CHECK(bare.code == 2);
    CHECK(bare.out.find("--tau-min-s") != std::string::npos);

    const auto no_omega = run_cli("surface --kind p1 --tau-min-s 0 --tau-max-s 5e-9 "
                                  "--detuning-min-radps -2e9 --detuning-max-radps 2e9");
    CHECK(no_omega.code == 2);
    CHECK(no_omega.out.find("--omega-rabi-radps") != std::string::npos);

    const auto ok = run_cli("surface --kind p1 --tau-min-s 0 --tau-max-s 5e-9 "
                            "--detuning-min-radps -2e9 --detuning-max-radps 2e9 "
                            "--omega-rabi-radps 1e9 --nx 5 --ny 5 --format csv");
    REQUIRE(ok.code == 0);
    CHECK(ok.out.find("# omega_rabi_radps: 1000000000\n") != std::string::npos);
    CHECK(ok.out.find("# x_axis: tau_s\n") != std::string::npos);
    CHECK(ok.out.find("# axis_source: user\n") != std::string::npos);
}

TEST_CASE("surface: resource guard and determinism") {
    CHECK(run_cli("surface --kind p1 --dimensionless --nx 20001 --ny 5001").code == 3);

    const auto f1 = fs::temp_directory_path() / "tl_cli_surf1.txt";
    const auto f3 = fs::temp_directory_path() / "tl_cli_surf3.txt";
    const std::string base = "surface --kind p2 --dimensionless --nx 33 --ny 21 --format matrix ";
    CHECK(run_cli(base + "--threads 1 --out " + f1.string()).code == 0);
    CHECK(run_cli(base + "--threads 3 --out " + f3.string()).code == 0);
    const std::string b1 = slurp(f1), b3 = slurp(f3);
    CHECK(!b1.empty());
    CHECK(b1 == b3);
    fs::remove(f1);
    fs::remove(f3);
}

TEST_CASE("slice") {
    const std::string common = "slice --kind p2 --omega-rabi-radps 1 --tau-s 10 "
                               "--detuning-min-radps -3 --detuning-max-radps 3 --n 101 ";
    const auto plain = run_cli(common + "--format csv");
    REQUIRE(plain.code == 0);
    CHECK(plain.out.find("# twolevel-slice\n") == 0);
    CHECK(plain.out.find("# peaks_computed: 0\n") != std::string::npos);
    CHECK(plain.out.find("# peak: ") == std::string::npos);

    const auto peaked = run_cli(common + "--find-peaks --format csv");
    REQUIRE(peaked.code == 0);
    CHECK(peaked.out.find("# peaks_computed: 1\n") != std::string::npos);
    REQUIRE(count_occurrences(peaked.out, "# peak: ") >= 2);

    // peak list is symmetric about resonance
    std::vector<double> peaks;
    std::istringstream is(peaked.out);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind("# peak: ", 0) == 0)
            peaks.push_back(std::strtod(line.c_str() + 8, nullptr));
    REQUIRE(peaks.size() >= 2);
    for (std::size_t k = 0; k < peaks.size(); ++k)
        CHECK(std::abs(peaks[k] + peaks[peaks.size() - 1 - k]) <= 1e-9);

    CHECK(run_cli("slice --kind p2 --omega-rabi-radps 1 --detuning-min-radps -3 "
                  "--detuning-max-radps 3")
              .code == 2); // --tau-s is required
    CHECK(run_cli(common + "--format yaml").code == 2);
}

TEST_CASE("lifetime") {
    const auto js = run_cli("lifetime --t-s-ns 27.1");
    REQUIRE(js.code == 0);
    const auto j = nlohmann::json::parse(js.out);
    check_rel(j["display"]["t_s_ns"].get<double>(), 27.1, 1e-12);
    check_rel(j["gamma_l_per_s"].get<double>(), 6.101e6, 2e-3);
    check_rel(j["gamma_lg_per_s"].get<double>(), 5.796e6, 2e-3);
    const double diff = j["fixed_point"]["pi_star_minus_pi"].get<double>();
    CHECK(diff >= 0.004);
    CHECK(diff <= 0.005);
    CHECK(j["fixed_point"]["residual_large"].get<double>() <= 1e-12);
    CHECK(j["fixed_point"]["residual_small"].get<double>() <= 1e-12);

    const auto atom = run_cli("lifetime --atom lithium");
    REQUIRE(atom.code == 0);
    const auto ja = nlohmann::json::parse(atom.out);
    check_rel(ja["gamma_s_per_s"].get<double>(), 3.69e7, 5e-3);

    const auto text = run_cli("lifetime --t-s-ns 27.1 --format text");
    CHECK(text.code == 0);
    CHECK(text.out.find("pi_star: ") != std::string::npos);

    CHECK(run_cli("lifetime --atom lithium --t-s-ns 27.1").code == 2); // mutually exclusive
    CHECK(run_cli("lifetime --t-s-ns -5").code == 2);
}

TEST_CASE("validate") {
    const auto ok = run_cli("validate --suite rwa");
    CHECK(ok.code == 0);
    CHECK(nlohmann::json::parse(ok.out)["all_passed"].get<bool>());

    const auto loose = run_cli("validate --suite rwa --rel-tol 1e-3 --abs-tol 1e-3");
    CHECK(loose.code == 1); // report still emitted, exit reflects the failure
    CHECK(!nlohmann::json::parse(loose.out)["all_passed"].get<bool>());

    CHECK(run_cli("validate --suite bichromatic").code == 1);
    CHECK(run_cli("validate --suite bichromatic --informational").code == 0);
    CHECK(run_cli("validate --suite damped").code == 0);
    CHECK(run_cli("validate --suite nonsense").code == 2);
    CHECK(run_cli("validate --suite rwa --rel-tol 1e-2").code == 2);
}

TEST_CASE("output redirection") {
    const auto path = fs::temp_directory_path() / "tl_cli_redirect.csv";
    const auto r =
        run_cli("surface --kind p1 --dimensionless --nx 4 --ny 3 --format csv --out " +
                path.string());
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    const std::string body = slurp(path);
    CHECK(body.rfind("# twolevel-surface\n", 0) == 0);
    fs::remove(path);
}

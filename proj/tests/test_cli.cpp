// End-to-end checks of the tvdlab binary: exit codes, file layout, config
// round-trips. TVDLAB_BIN is injected by the build.

#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TVDLAB_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("tvdlab_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int counter() {
        static int c = 0;
        return c++;
    }
};

const std::string kTinyCampaign =
    "--algorithm naap --rate 0.08 --k-max 3 --scenario constant --delay 2 "
    "--length 600 --realizations 3 --burn-in 100 --seed 5";

}  // namespace

TEST_CASE("invalid naap rate exits with the config code") {
    TempDir tmp;
    CHECK(run_cli("run --algorithm naap --rate 1.5 --out " + tmp.path.string()) == 2);
}

TEST_CASE("unknown reproduce target exits with the config code") {
    TempDir tmp;
    CHECK(run_cli("reproduce --target fig9 --out " + tmp.path.string()) == 2);
}

TEST_CASE("unknown config key is rejected and named") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "bad.cfg";
    std::ofstream(cfg) << "rate = 0.05\nnot_a_key = 7\n";
    CHECK(run_cli("campaign --config " + cfg.string() + " --out " + tmp.path.string()) == 2);
}

TEST_CASE("campaign writes the documented layout") {
    TempDir tmp;
    REQUIRE(run_cli("campaign " + kTinyCampaign + " --svg --out " + tmp.path.string()) == 0);
    CHECK(fs::exists(tmp.path / "campaign.meta"));
    CHECK(fs::exists(tmp.path / "summary.csv"));
    CHECK(fs::exists(tmp.path / "mse.svg"));
    CHECK(fs::exists(tmp.path / "made.svg"));
    const std::string curves = slurp(tmp.path / "curves.csv");
    CHECK(first_line(curves) == "n,mse,made,tau_mean,tau_true");
    const std::string summary = slurp(tmp.path / "summary.csv");
    CHECK(first_line(summary) ==
          "algorithm,rate,snr_db,scenario,time_avg_made,instability_fraction");
    CHECK(slurp(tmp.path / "mse.svg").substr(0, 4) == "<svg");
}

TEST_CASE("campaign.meta feeds back through --config byte-identically") {
    TempDir tmp;
    const fs::path first = tmp.path / "first";
    const fs::path second = tmp.path / "second";
    REQUIRE(run_cli("campaign " + kTinyCampaign + " --out " + first.string()) == 0);
    REQUIRE(run_cli("campaign --config " + (first / "campaign.meta").string() +
                    " --out " + second.string()) == 0);
    CHECK(slurp(first / "curves.csv") == slurp(second / "curves.csv"));
    CHECK(slurp(first / "summary.csv") == slurp(second / "summary.csv"));
}

TEST_CASE("generate is deterministic and writes sensors plus profile") {
    TempDir tmp;
    const fs::path a = tmp.path / "a";
    const fs::path b = tmp.path / "b";
    const std::string args =
        "generate --length 512 --scenario constant --delay 2 --snr-db 20 --seed 9 --binary";
    REQUIRE(run_cli(args + " --out " + a.string()) == 0);
    REQUIRE(run_cli(args + " --out " + b.string()) == 0);
    CHECK(slurp(a / "sensor1.csv") == slurp(b / "sensor1.csv"));
    CHECK(slurp(a / "sensor2.csv") == slurp(b / "sensor2.csv"));
    CHECK(first_line(slurp(a / "sensor1.csv")) == "value");
    CHECK(first_line(slurp(a / "profile.csv")) == "index,delay");
    CHECK(fs::exists(a / "sensor1.f64"));
    CHECK(fs::exists(a / "generate.meta"));
}

TEST_CASE("run emits a per-sample trace with weights") {
    TempDir tmp;
    REQUIRE(run_cli("run " + kTinyCampaign + " --out " + tmp.path.string()) == 0);
    const std::string trace = slurp(tmp.path / "trace.csv");
    CHECK(first_line(trace) == "n,algorithm,e,tau_hat,w1,w2,w3");
    CHECK(trace.find("naap") != std::string::npos);
}

TEST_CASE("sweep writes rate rows and flags nothing at sane rates") {
    TempDir tmp;
    REQUIRE(run_cli("sweep " + kTinyCampaign + " --rates 0.04,0.08 --out " +
                    tmp.path.string()) == 0);
    const std::string sweep = slurp(tmp.path / "sweep.csv");
    CHECK(first_line(sweep) == "rate,time_avg_made,unstable");
    CHECK(sweep.find("false") != std::string::npos);
}

TEST_CASE("a campaign whose every realization diverges exits with code 3") {
    TempDir tmp;
    CHECK(run_cli("campaign --algorithm sun --rate 0.5 --scenario constant --delay 2 "
                  "--length 600 --realizations 2 --burn-in 100 --seed 5 --out " +
                  tmp.path.string()) == 3);
}

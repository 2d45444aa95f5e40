#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kBin = EITCOOL_BIN;
const fs::path kTmp = EITCOOL_TEST_TMP;

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const fs::path out_file = kTmp / "stdout.txt";
    const std::string cmd = kBin + " " + args + " > " + out_file.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

struct TmpDir {
    TmpDir() {
        fs::create_directories(kTmp);
    }
};
const TmpDir tmp_dir_guard;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate reports a clean default set") {
    const auto r = run("validate");
    CHECK(r.code == 0);
    CHECK(r.out.find("no warnings") != std::string::npos);
}

TEST_CASE("validate rejects broken parameters with the config exit code") {
    const auto r = run("validate --set gamma=0");
    CHECK(r.code == 2);
    CHECK(r.out.find("gamma") != std::string::npos);
}

TEST_CASE("unknown keys and bad config paths") {
    CHECK(run("validate --set bogus_key=1").code == 2);
    CHECK(run("validate --config /nonexistent/config.json").code == 3);
    const fs::path bad = kTmp / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run("validate --config " + bad.string()).code == 2);
}

TEST_CASE("set overrides win over the config file") {
    const fs::path cfg = kTmp / "base.json";
    std::ofstream(cfg) << R"({"omega_r": 1.0, "delta_g": 2.5, "delta_r": 2.5})";
    const auto r = run("validate --config " + cfg.string() + " --set omega_r=2.0");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"omega_r\": 2.0") != std::string::npos);
}

TEST_CASE("spectrum scan writes the schema and finds the dark resonance") {
    const fs::path out = kTmp / "spec.csv";
    const auto r = run("spectrum --output " + out.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.find("dark resonance at delta_g = 2.5") != std::string::npos);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 802);  // header + 801 points
    CHECK(rows[0] == std::vector<std::string>{"delta_g", "scatter_rate", "rho_ee",
                                              "rho_gg", "rho_rr"});
    for (const auto& row : rows) CHECK(row.size() == 5);
    // grid argmin at the two-photon resonance
    double best = 1e300, best_d = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double rate = std::stod(rows[i][1]);
        if (rate < best) {
            best = rate;
            best_d = std::stod(rows[i][0]);
        }
    }
    CHECK(std::abs(best_d - 2.5) < 2.0 * 2.0 / 800.0);
    CHECK(best < 1e-10);
}

TEST_CASE("minimal two-point scan") {
    const fs::path out = kTmp / "spec2.csv";
    const auto r = run("spectrum --output " + out.string() +
                       " --set sweep.variable=delta_g --set sweep.start=2.0"
                       " --set sweep.stop=3.0 --set sweep.n_points=2");
    REQUIRE(r.code == 0);
    CHECK(parse_csv(slurp(out)).size() == 3);
}

TEST_CASE("unwritable output path gives the io exit code") {
    CHECK(run("spectrum --output /nonexistent-dir-xyz/s.csv").code == 3);
}

TEST_CASE("rate sweep over the detuning reproduces the cooling-limit curve") {
    const fs::path out = kTmp / "sweep_delta.csv";
    const auto r = run("rate-sweep --output " + out.string() +
                       " --set sweep.variable=delta_g --set sweep.start=0.2"
                       " --set sweep.stop=5.0 --set sweep.n_points=481");
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 482);
    CHECK(rows[0] == std::vector<std::string>{"sweep_var", "a_plus", "a_minus", "n_s",
                                              "w", "status"});
    double best = 1e300, best_d = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 6);
        if (rows[i][5] != "ok") continue;
        const double ns = std::stod(rows[i][3]);
        if (ns < best) {
            best = ns;
            best_d = std::stod(rows[i][0]);
        }
    }
    CHECK(best_d > 2.3);
    CHECK(best_d < 2.6);
    CHECK(best > 0.0105);
    CHECK(best < 0.0112);
}

TEST_CASE("rate sweep flags the poles") {
    const fs::path out = kTmp / "sweep_omega.csv";
    // grid starts exactly at the omega_r = 2 nu pole
    const auto r = run("rate-sweep --output " + out.string() +
                       " --set sweep.variable=omega_r --set sweep.start=0.2"
                       " --set sweep.stop=3.0 --set sweep.n_points=29");
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 30);
    CHECK(rows[1][5] == "pole");
    CHECK(rows[1][3] == "");   // no steady-state value on a pole row
    CHECK(rows[2][5] == "ok");

    const fs::path out2 = kTmp / "sweep_zero.csv";
    const auto r2 = run("rate-sweep --output " + out2.string() +
                        " --set sweep.variable=delta_g --set sweep.start=0"
                        " --set sweep.stop=1.0 --set sweep.n_points=3");
    REQUIRE(r2.code == 0);
    const auto rows2 = parse_csv(slurp(out2));
    CHECK(rows2[1][5] == "pole");  // delta = 0

    const fs::path out3 = kTmp / "sweep_heat.csv";
    const auto r3 = run("rate-sweep --output " + out3.string() +
                        " --set sweep.variable=delta_g --set sweep.start=-2.0"
                        " --set sweep.stop=-1.0 --set sweep.n_points=2");
    REQUIRE(r3.code == 0);
    CHECK(parse_csv(slurp(out3))[1][5] == "heating");
}

TEST_CASE("single-point sweep emits one data row") {
    const fs::path out = kTmp / "sweep_one.csv";
    const auto r = run("rate-sweep --output " + out.string() +
                       " --set sweep.variable=omega_r --set sweep.start=1.0"
                       " --set sweep.stop=1.0 --set sweep.n_points=1");
    REQUIRE(r.code == 0);
    CHECK(parse_csv(slurp(out)).size() == 2);
}

TEST_CASE("cool on the rate layer converges to the closed-form limit") {
    const fs::path out = kTmp / "cool_rate.csv";
    const auto r = run("cool --output " + out.string() + " --set layer=rate");
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(slurp(out));
    CHECK(rows[0] == std::vector<std::string>{"t", "n_mean"});
    const double final_n = std::stod(rows.back()[1]);
    CHECK(std::abs(final_n - 0.0108) < 1e-4);

    const auto pn = parse_csv(slurp(kTmp / "cool_rate_pn.csv"));
    CHECK(pn[0] == std::vector<std::string>{"n", "p"});
    CHECK(std::stod(pn[1][1]) >= 0.98);  // P(0)
    CHECK(r.out.find("rate model: W =") != std::string::npos);
}

TEST_CASE("explicit zero duration is rejected as configuration") {
    CHECK(run("cool --set layer=rate --set sim.t_end=0").code == 2);
}

TEST_CASE("warnings are reported without changing the exit code") {
    const auto r = run("validate --set omega_g=1.0 --set eta=0");
    CHECK(r.code == 0);
    CHECK(r.out.find("cooling laser not weak") != std::string::npos);
}

TEST_CASE("truncation failure aborts with its own exit code") {
    const fs::path out = kTmp / "trunc.csv";
    const auto r = run("cool --output " + out.string() +
                       " --set layer=master --set delta_g=-2.5 --set delta_r=-2.5"
                       " --set sim.n_max=4 --set sim.t_end=200000"
                       " --set sim.n_times=8");
    CHECK(r.code == 4);
}

TEST_CASE("cool on the mc layer is reproducible for a fixed seed") {
    const fs::path out1 = kTmp / "mc1.csv";
    const fs::path out2 = kTmp / "mc2.csv";
    const std::string common =
        " --set layer=mc --set omega_g=0.3 --set sim.n_max=6 --set sim.n_traj=40"
        " --set sim.t_end=300 --set sim.n_times=10 --seed 42";
    REQUIRE(run("cool --output " + out1.string() + common).code == 0);
    REQUIRE(run("cool --output " + out2.string() + common).code == 0);
    const std::string a = slurp(out1), b = slurp(out2);
    CHECK(a == b);
    const auto rows = parse_csv(a);
    CHECK(rows[0] == std::vector<std::string>{"t", "n_mean", "n_stderr", "pop_g",
                                              "pop_r", "pop_e"});
    // metadata sidecar carries the seed
    const std::string meta = slurp(kTmp / "mc1_meta.json");
    CHECK(meta.find("\"seed\": 42") != std::string::npos);
    CHECK(meta.find("\"timestamp\"") != std::string::npos);

    const fs::path out3 = kTmp / "mc3.csv";
    REQUIRE(run("cool --output " + out3.string() + common + " --set sim.seed=43")
                .code == 0);
    // --seed flag wins over --set sim.seed
    CHECK(slurp(out3) == a);
}

TEST_CASE("cool on the master layer emits populations") {
    const fs::path out = kTmp / "master.csv";
    const auto r = run("cool --output " + out.string() +
                       " --set layer=master --set omega_g=0.3 --set sim.n_max=6"
                       " --set sim.t_end=300 --set sim.n_times=8");
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(slurp(out));
    CHECK(rows[0] ==
          std::vector<std::string>{"t", "n_mean", "pop_g", "pop_r", "pop_e"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double total =
            std::stod(rows[i][2]) + std::stod(rows[i][3]) + std::stod(rows[i][4]);
        CHECK(std::abs(total - 1.0) < 1e-8);
    }
}

TEST_CASE("compare-sc prints the narrow-line ratio") {
    const auto r = run("compare-sc");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("0.172413793103") != std::string::npos);

    const auto unity = run("compare-sc --alpha 0");
    CHECK(unity.out.find("n_EIT/n_SC = 1") != std::string::npos);

    const auto steep = run("compare-sc --phi-deg 89.9");
    CHECK(steep.code == 0);

    CHECK(run("compare-sc --phi-deg 90").code == 5);
}

TEST_CASE("json output format") {
    const fs::path out = kTmp / "spec.json";
    const auto r = run("spectrum --output " + out.string() +
                       " --format json --set sweep.variable=delta_g"
                       " --set sweep.start=2.0 --set sweep.stop=3.0"
                       " --set sweep.n_points=5");
    REQUIRE(r.code == 0);
    const std::string text = slurp(out);
    CHECK(text.find("\"columns\"") != std::string::npos);
    CHECK(text.find("\"delta_g\"") != std::string::npos);
}

}  // TEST_SUITE

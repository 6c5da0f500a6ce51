#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args) {
    const auto err_path = std::filesystem::temp_directory_path() / "spikecs_cli_stderr.txt";
    const std::string command =
        std::string(SPIKECS_CLI_PATH) + " " + args + " 2>" + err_path.string();
    CliResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buffer;
    std::size_t got = 0;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.out.append(buffer.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream err(err_path);
    result.err.assign(std::istreambuf_iterator<char>(err), std::istreambuf_iterator<char>());
    return result;
}

std::string collapse_spaces(const std::string& s) {
    std::string out;
    bool in_space = false;
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty() && out.back() != '\n') out.push_back(' ');
        in_space = false;
        out.push_back(c);
    }
    return out;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::size_t count_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

}  // namespace

TEST_CASE("gen writes a csv with the default length") {
    const auto out = temp_file("spikecs_cli_gen.csv");
    const CliResult r =
        run_cli("gen --amplitude 300 --seed 7 --out " + out.string() + " --format csv");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(out) == 256);
    std::filesystem::remove(out);
}

TEST_CASE("gen rejects a template that cannot fit") {
    const auto out = temp_file("spikecs_cli_small.csv");
    const CliResult r = run_cli("gen --n 3 --out " + out.string());
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("gen rejects unknown flags") {
    const CliResult r = run_cli("gen --out x.csv --frobnicate 9");
    CHECK(r.exit_code != 0);
}

TEST_CASE("reconstruct prints a json quality report") {
    const auto signal = temp_file("spikecs_cli_signal.csv");
    REQUIRE(run_cli("gen --n 256 --seed 3 --noise-sigma 5 --out " + signal.string()).exit_code == 0);

    const CliResult r = run_cli("reconstruct --in " + signal.string() +
                                " --basis dct --solver bp_admm --m 128 --seed 5");
    REQUIRE(r.exit_code == 0);
    const auto report = nlohmann::json::parse(r.out);
    CHECK(report.at("cr").get<double>() == 0.5);
    CHECK(report.at("snr_db").is_number());
    CHECK(report.at("psnr_db").is_number());
    CHECK(report.at("runtime_s").get<double>() > 0.0);
    std::filesystem::remove(signal);
}

TEST_CASE("reconstruct rejects unknown basis naming the valid ones") {
    const auto signal = temp_file("spikecs_cli_signal2.csv");
    REQUIRE(run_cli("gen --n 64 --out " + signal.string()).exit_code == 0);
    const CliResult r = run_cli("reconstruct --in " + signal.string() + " --basis bogus");
    CHECK(r.exit_code != 0);
    for (const char* name : {"identity", "dct", "fft_real", "dpss", "gabor", "noiselet_real",
                             "rst", "wavelet_db20"})
        CHECK(r.err.find(name) != std::string::npos);
    std::filesystem::remove(signal);
}

TEST_CASE("reconstruct rejects m greater than n") {
    const auto signal = temp_file("spikecs_cli_signal3.csv");
    REQUIRE(run_cli("gen --n 256 --out " + signal.string()).exit_code == 0);
    const CliResult r = run_cli("reconstruct --in " + signal.string() + " --m 300");
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("300") != std::string::npos);
    std::filesystem::remove(signal);
}

TEST_CASE("bench runs a config and is reproducible modulo runtime") {
    const auto config = temp_file("spikecs_cli_bench.cfg");
    {
        std::ofstream out(config);
        out << "experiment = dict_compare\n"
               "n = 64\n"
               "m = 32\n"
               "bases = dct, rst\n"
               "solvers = bp_admm\n"
               "trials = 2\n"
               "seed = 11\n";
    }
    const auto dir_a = temp_file("spikecs_cli_out_a");
    const auto dir_b = temp_file("spikecs_cli_out_b");
    REQUIRE(run_cli("bench --config " + config.string() + " --out-dir " + dir_a.string())
                .exit_code == 0);
    REQUIRE(run_cli("bench --config " + config.string() + " --out-dir " + dir_b.string())
                .exit_code == 0);

    const auto load_normalized = [](const std::filesystem::path& p) {
        std::ifstream in(p);
        std::string line, all;
        while (std::getline(in, line)) {
            auto j = nlohmann::json::parse(line);
            j.erase("runtime_s");
            all += j.dump() + "\n";
        }
        return all;
    };
    const auto rows_a = load_normalized(dir_a / "records.jsonl");
    CHECK(count_lines(dir_a / "records.jsonl") == 4);  // 2 bases x 1 solver x 2 trials
    CHECK(rows_a == load_normalized(dir_b / "records.jsonl"));
    CHECK(std::filesystem::exists(dir_a / "records.csv"));

    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    std::filesystem::remove(config);
}

TEST_CASE("bench reports malformed configs with positions") {
    const auto config = temp_file("spikecs_cli_bad.cfg");
    {
        std::ofstream out(config);
        out << "experiment = dict_compare\ntrials = soon\n";
    }
    const CliResult r = run_cli("bench --config " + config.string());
    CHECK(r.exit_code != 0);
    CHECK(r.err.find(":2") != std::string::npos);
    CHECK(r.err.find("trials") != std::string::npos);
    std::filesystem::remove(config);
}

TEST_CASE("table renders the reference fixture rows") {
    const std::string fixture = std::string(SPIKECS_DATA_DIR) + "/reference_table.jsonl";
    const CliResult r = run_cli("table --records " + fixture);
    REQUIRE(r.exit_code == 0);
    const std::string flat = collapse_spaces(r.out);
    CHECK(flat.find("Basis PSNR(dB) SNR(dB) CR Time (s)") != std::string::npos);
    CHECK(flat.find("Fourier 30.1583 13.9176 0.5 0.182") != std::string::npos);
    CHECK(flat.find("Noiselet 21.0742 4.8335 0.5 0.201") != std::string::npos);
}

TEST_CASE("table fails cleanly on a missing file") {
    const CliResult r = run_cli("table --records /nonexistent/records.jsonl");
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("error") != std::string::npos);
}

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spikecs/bench.hpp"
#include "spikecs/metrics.hpp"
#include "spikecs/rng.hpp"

namespace {

using namespace spikecs;

int cmd_gen(std::size_t n, double amplitude, double noise_sigma, double depol_width,
            double repol_width, std::uint64_t seed, const std::string& out,
            const std::string& format, double rate) {
    SpikeTemplateParams params;
    params.amplitude_uv = amplitude;
    params.noise_sigma_uv = noise_sigma;
    params.depol_width = depol_width;
    params.repol_width = repol_width;
    params.seed = seed;
    SignalVector signal = generate_spike(n, params);
    signal.sample_rate_hz = rate;
    save_signal(signal, out, parse_sample_format(format));
    return 0;
}

int cmd_reconstruct(const std::string& in, const std::string& format, double rate,
                    const std::string& basis, const std::string& solver, std::size_t m,
                    std::uint64_t seed, const std::string& sensing,
                    const std::string& report_path) {
    const SignalVector x = load_signal(in, parse_sample_format(format), rate);
    const std::size_t n = x.size();
    const DictionaryKind basis_kind = parse_dictionary_kind(basis);
    const SolverKind solver_kind = parse_solver_kind(solver);
    const SensingKind sensing_kind = parse_sensing_kind(sensing);
    if (m == 0) m = n / 2;

    const DictionaryMatrix d = build_dictionary(basis_kind, n);
    const SensingMatrix a = sensing_kind == SensingKind::gaussian
                                ? gaussian_matrix(m, n, seed)
                                : sparse_binary_matrix(m, n, 4, seed);
    const Measurement y = measure(a, x);
    const SolverConfig cfg =
        solver_kind == SolverKind::bp_admm ? SolverConfig{BpConfig{}} : SolverConfig{BsblConfig{}};
    const ReconstructionResult result = reconstruct(y, a, d, cfg);

    const Eigen::Map<const Eigen::VectorXd> xv(x.samples.data(),
                                               static_cast<Eigen::Index>(x.size()));
    QualityReport report;
    report.snr_db = snr_db(xv, result.signal_hat);
    report.psnr_db = psnr_db(xv, result.signal_hat);
    report.cr = compression_ratio(m, n);
    report.runtime_s = result.runtime_s;
    try {
        const auto center = static_cast<std::ptrdiff_t>(detect_spike_center(x, 250.0));
        report.spike_snr_db = spike_snr_db(xv, result.signal_hat, SpikeWindow{center, 30});
    } catch (const NoSpikeError&) {
    }

    nlohmann::ordered_json j;
    j["snr_db"] = report.snr_db;
    j["psnr_db"] = report.psnr_db;
    if (report.spike_snr_db)
        j["spike_snr_db"] = *report.spike_snr_db;
    else
        j["spike_snr_db"] = nullptr;
    j["cr"] = report.cr;
    j["runtime_s"] = report.runtime_s;
    std::cout << j.dump() << '\n';

    if (!report_path.empty()) {
        ExperimentRecord rec;
        rec.experiment = "reconstruct";
        rec.basis = basis;
        rec.solver = solver;
        rec.n = n;
        rec.m = m;
        rec.cr = report.cr;
        rec.snr_db = report.snr_db;
        rec.psnr_db = report.psnr_db;
        rec.spike_snr_db = report.spike_snr_db;
        rec.runtime_s = report.runtime_s;
        rec.iterations = result.iterations;
        rec.converged = result.converged;
        rec.trial_seed = seed;
        write_records({rec}, report_path);
    }
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir) {
    const ExperimentConfig cfg = load_experiment_config(config_path);
    const std::vector<ExperimentRecord> records = run_experiment(cfg);
    std::filesystem::create_directories(out_dir);
    write_records(records, std::filesystem::path(out_dir) / "records.jsonl");
    std::cout << render_table(records);
    return 0;
}

int cmd_table(const std::string& records_path) {
    const std::vector<ExperimentRecord> records = read_records(records_path);
    std::cout << render_table(records);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressed sensing benchmark harness for action potential signals"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Write a synthetic action potential to a file");
    std::size_t gen_n = 256;
    double gen_amplitude = 300.0, gen_noise = 0.0, gen_depol = 6.0, gen_repol = 12.0,
           gen_rate = 15000.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out, gen_format = "csv";
    gen->add_option("--n", gen_n, "Number of samples");
    gen->add_option("--amplitude", gen_amplitude, "Positive peak in microvolts (>= 250)");
    gen->add_option("--noise-sigma", gen_noise, "Additive Gaussian noise std in microvolts");
    gen->add_option("--depol-width", gen_depol, "Positive lobe width in samples");
    gen->add_option("--repol-width", gen_repol, "Negative lobe width in samples");
    gen->add_option("--seed", gen_seed, "Noise seed");
    gen->add_option("--rate", gen_rate, "Sample rate in Hz");
    gen->add_option("--out", gen_out, "Output path")->required();
    gen->add_option("--format", gen_format, "csv, f64le or f32le");

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "Compress and reconstruct one signal file");
    std::string rec_in, rec_format = "csv", rec_basis = "dct", rec_solver = "bsbl_bo",
                rec_sensing = "gaussian", rec_report;
    double rec_rate = 15000.0;
    std::size_t rec_m = 0;
    std::uint64_t rec_seed = 0;
    rec->add_option("--in", rec_in, "Input signal path")->required();
    rec->add_option("--format", rec_format, "csv, f64le or f32le");
    rec->add_option("--rate", rec_rate, "Sample rate in Hz");
    rec->add_option("--basis", rec_basis, "Dictionary kind");
    rec->add_option("--solver", rec_solver, "bp_admm or bsbl_bo");
    rec->add_option("--m", rec_m, "Number of measurements (default n/2)");
    rec->add_option("--seed", rec_seed, "Sensing matrix seed");
    rec->add_option("--sensing", rec_sensing, "gaussian or sparse_binary");
    rec->add_option("--report", rec_report, "Optional record file to write");

    // bench
    auto* bench = app.add_subcommand("bench", "Run an experiment sweep from a config file");
    std::string bench_config, bench_out_dir = ".";
    bench->add_option("--config", bench_config, "Experiment config path")->required();
    bench->add_option("--out-dir", bench_out_dir, "Directory for records.jsonl / records.csv");

    // table
    auto* table = app.add_subcommand("table", "Render a records file as a text table");
    std::string table_records;
    table->add_option("--records", table_records, "JSON-lines records path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gen_n, gen_amplitude, gen_noise, gen_depol, gen_repol, gen_seed,
                           gen_out, gen_format, gen_rate);
        if (rec->parsed())
            return cmd_reconstruct(rec_in, rec_format, rec_rate, rec_basis, rec_solver, rec_m,
                                   rec_seed, rec_sensing, rec_report);
        if (bench->parsed()) return cmd_bench(bench_config, bench_out_dir);
        if (table->parsed()) return cmd_table(table_records);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

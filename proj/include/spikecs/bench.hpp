#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spikecs/dictionaries.hpp"
#include "spikecs/sensing.hpp"
#include "spikecs/signal.hpp"
#include "spikecs/solvers.hpp"

namespace spikecs {

enum class ExperimentKind { dict_compare, cr_sweep, interp_window, solver_compare };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

struct SyntheticSource {
    SpikeTemplateParams spike;
};
struct FileSource {
    std::filesystem::path path;
    SampleFormat format = SampleFormat::csv;
    double sample_rate_hz = 15000.0;
};
using DataSource = std::variant<SyntheticSource, FileSource>;

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::dict_compare;
    std::size_t n = 256;
    std::vector<std::size_t> m_values;       // empty = experiment default
    std::vector<DictionaryKind> bases;       // empty = experiment default
    std::vector<SolverKind> solvers;         // empty = experiment default
    std::size_t trials = 10;
    std::uint64_t seed = 0;
    DataSource source = SyntheticSource{};
    BpConfig bp;
    BsblConfig bsbl;
};

/// One benchmark row; cr = m/n always.
struct ExperimentRecord {
    std::string experiment;
    std::string basis;
    std::string solver;
    std::size_t n = 0;
    std::size_t m = 0;
    double cr = 0.0;
    double snr_db = 0.0;
    double psnr_db = 0.0;
    std::optional<double> spike_snr_db;
    double runtime_s = 0.0;
    int iterations = 0;
    bool converged = false;
    std::uint64_t trial_seed = 0;

    friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

struct ConfigParseError : std::runtime_error {
    ConfigParseError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

/// Key-value experiment config; schema documented in the README.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg);

std::vector<ExperimentRecord> run_dict_compare(const ExperimentConfig& cfg);
std::vector<ExperimentRecord> run_cr_sweep(const ExperimentConfig& cfg);
std::vector<ExperimentRecord> run_interp_window(const ExperimentConfig& cfg);
std::vector<ExperimentRecord> run_solver_compare(const ExperimentConfig& cfg);

/// JSON-lines records with stable key order, plus a csv mirror next to it.
void write_records(const std::vector<ExperimentRecord>& records,
                   const std::filesystem::path& jsonl_path);

std::vector<ExperimentRecord> read_records(const std::filesystem::path& jsonl_path);

/// Column-aligned text table: Experiment Solver Basis PSNR(dB) SNR(dB) CR Time (s).
std::string render_table(const std::vector<ExperimentRecord>& records);

}  // namespace spikecs

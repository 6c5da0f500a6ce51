#include "spikecs/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "spikecs/metrics.hpp"
#include "spikecs/rng.hpp"

namespace spikecs {

namespace {

constexpr std::uint64_t kSensingStream = 0x53454E53;  // sensing matrices
constexpr double kSpikeThresholdUv = 250.0;
constexpr std::size_t kBinaryNnzPerColumn = 4;

std::uint64_t sensing_seed(const ExperimentConfig& cfg, std::size_t n, std::size_t m) {
    return derive_stream(derive_stream(cfg.seed, kSensingStream),
                         (static_cast<std::uint64_t>(n) << 20) + m);
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial) {
    return derive_stream(cfg.seed, trial);
}

Eigen::Map<const Eigen::VectorXd> as_vector(const SignalVector& x) {
    return {x.samples.data(), static_cast<Eigen::Index>(x.size())};
}

SignalVector trial_signal(const ExperimentConfig& cfg, std::size_t n, std::size_t trial) {
    if (std::holds_alternative<SyntheticSource>(cfg.source)) {
        SpikeTemplateParams params = std::get<SyntheticSource>(cfg.source).spike;
        params.seed = trial_seed(cfg, trial);
        return generate_spike(n, params);
    }
    const auto& src = std::get<FileSource>(cfg.source);
    const SignalVector full = load_signal(src.path, src.format, src.sample_rate_hz);
    return segment(full, n, 0);
}

SolverConfig solver_config(const ExperimentConfig& cfg, SolverKind kind) {
    if (kind == SolverKind::bp_admm) return cfg.bp;
    return cfg.bsbl;
}

/// Shared per-run step: measure, reconstruct, score. Solver failures are
/// recorded (converged = false, metrics against the zero reconstruction)
/// so sweeps always complete.
ExperimentRecord run_single(const ExperimentConfig& cfg, const std::string& tag,
                            const SignalVector& x, const DictionaryMatrix& d,
                            const SensingMatrix& a, SolverKind solver, std::size_t trial) {
    ExperimentRecord rec;
    rec.experiment = tag;
    rec.basis = dictionary_kind_name(d.kind);
    rec.solver = solver_kind_name(solver);
    rec.n = x.size();
    rec.m = static_cast<std::size_t>(a.m());
    rec.cr = compression_ratio(rec.m, rec.n);
    rec.trial_seed = trial_seed(cfg, trial);

    const Eigen::VectorXd xv = as_vector(x);
    Eigen::VectorXd xhat = Eigen::VectorXd::Zero(xv.size());
    try {
        const Measurement y = measure(a, x);
        const ReconstructionResult result = reconstruct(y, a, d, solver_config(cfg, solver));
        xhat = result.signal_hat;
        rec.runtime_s = result.runtime_s;
        rec.iterations = result.iterations;
        rec.converged = result.converged;
    } catch (const std::exception&) {
        rec.converged = false;
    }

    rec.snr_db = snr_db(xv, xhat);
    rec.psnr_db = psnr_db(xv, xhat);
    try {
        const auto center = static_cast<std::ptrdiff_t>(detect_spike_center(x, kSpikeThresholdUv));
        rec.spike_snr_db = spike_snr_db(xv, xhat, SpikeWindow{center, 30});
    } catch (const std::exception&) {
        rec.spike_snr_db.reset();
    }
    return rec;
}

struct DictionaryCache {
    const DictionaryMatrix& get(DictionaryKind kind, std::size_t n) {
        const auto key = std::make_pair(kind, n);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, build_dictionary(kind, n)).first;
        return it->second;
    }
    std::map<std::pair<DictionaryKind, std::size_t>, DictionaryMatrix> cache;
};

std::vector<DictionaryKind> default_bases(ExperimentKind experiment) {
    switch (experiment) {
        case ExperimentKind::dict_compare:
            return {DictionaryKind::dct,     DictionaryKind::fft_real, DictionaryKind::gabor,
                    DictionaryKind::dpss,    DictionaryKind::noiselet_real,
                    DictionaryKind::rst,     DictionaryKind::wavelet_db20};
        case ExperimentKind::cr_sweep:
        case ExperimentKind::interp_window:
            return {DictionaryKind::fft_real};
        case ExperimentKind::solver_compare:
            return {DictionaryKind::dct};
    }
    return {};
}

std::vector<SolverKind> default_solvers(ExperimentKind experiment) {
    if (experiment == ExperimentKind::solver_compare)
        return {SolverKind::bp_admm, SolverKind::bsbl_bo};
    return {SolverKind::bsbl_bo};
}

std::vector<std::size_t> default_m_grid(std::size_t n) {
    return {n / 4, 3 * n / 8, n / 2, 5 * n / 8, 3 * n / 4};
}

void validate_m(const ExperimentConfig& cfg, const std::vector<std::size_t>& m_values) {
    for (std::size_t m : m_values)
        if (m < 1 || m > cfg.n)
            throw std::invalid_argument("m = " + std::to_string(m) + " out of range [1, n = " +
                                        std::to_string(cfg.n) + "]");
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
    if (name == "dict_compare") return ExperimentKind::dict_compare;
    if (name == "cr_sweep") return ExperimentKind::cr_sweep;
    if (name == "interp_window") return ExperimentKind::interp_window;
    if (name == "solver_compare") return ExperimentKind::solver_compare;
    throw std::invalid_argument(
        "unknown experiment \"" + name +
        "\" (expected dict_compare, cr_sweep, interp_window or solver_compare)");
}

std::string experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::dict_compare: return "dict_compare";
        case ExperimentKind::cr_sweep: return "cr_sweep";
        case ExperimentKind::interp_window: return "interp_window";
        case ExperimentKind::solver_compare: return "solver_compare";
    }
    return "?";
}

std::vector<ExperimentRecord> run_dict_compare(const ExperimentConfig& cfg) {
    const auto bases = cfg.bases.empty() ? default_bases(cfg.experiment) : cfg.bases;
    const auto solvers = cfg.solvers.empty() ? default_solvers(cfg.experiment) : cfg.solvers;
    const std::size_t m = cfg.m_values.empty() ? cfg.n / 2 : cfg.m_values.front();
    validate_m(cfg, {m});

    const SensingMatrix a = gaussian_matrix(m, cfg.n, sensing_seed(cfg, cfg.n, m));
    std::vector<SignalVector> signals;
    for (std::size_t t = 0; t < cfg.trials; ++t) signals.push_back(trial_signal(cfg, cfg.n, t));

    DictionaryCache dicts;
    std::vector<ExperimentRecord> records;
    for (DictionaryKind basis : bases)
        for (SolverKind solver : solvers)
            for (std::size_t t = 0; t < cfg.trials; ++t)
                records.push_back(run_single(cfg, "dict_compare", signals[t],
                                             dicts.get(basis, cfg.n), a, solver, t));
    return records;
}

std::vector<ExperimentRecord> run_cr_sweep(const ExperimentConfig& cfg) {
    const auto bases = cfg.bases.empty() ? default_bases(cfg.experiment) : cfg.bases;
    const auto solvers = cfg.solvers.empty() ? default_solvers(cfg.experiment) : cfg.solvers;
    const auto m_values = cfg.m_values.empty() ? default_m_grid(cfg.n) : cfg.m_values;
    validate_m(cfg, m_values);
    if (std::adjacent_find(m_values.begin(), m_values.end(),
                           [](std::size_t a, std::size_t b) { return a >= b; }) != m_values.end())
        throw std::invalid_argument("cr_sweep m values must be strictly increasing");

    std::vector<SignalVector> signals;
    for (std::size_t t = 0; t < cfg.trials; ++t) signals.push_back(trial_signal(cfg, cfg.n, t));

    DictionaryCache dicts;
    const DictionaryMatrix& d = dicts.get(bases.front(), cfg.n);
    std::vector<ExperimentRecord> records;
    for (std::size_t m : m_values) {
        const SensingMatrix a =
            sparse_binary_matrix(m, cfg.n, kBinaryNnzPerColumn, sensing_seed(cfg, cfg.n, m));
        for (SolverKind solver : solvers)
            for (std::size_t t = 0; t < cfg.trials; ++t)
                records.push_back(run_single(cfg, "cr_sweep", signals[t], d, a, solver, t));
    }
    return records;
}

std::vector<ExperimentRecord> run_interp_window(const ExperimentConfig& cfg) {
    // pinned pipeline: sparse-binary sensing, real Fourier frame, BSBL-BO
    constexpr std::size_t kWindow = 60;
    constexpr std::size_t kHalfWidth = kWindow / 2;
    if (cfg.n < kWindow)
        throw std::invalid_argument("interp_window needs n >= " + std::to_string(kWindow));

    const std::size_t m_full = cfg.m_values.empty() ? cfg.n / 2 : cfg.m_values.front();
    validate_m(cfg, {m_full});

    DictionaryCache dicts;
    std::vector<ExperimentRecord> records;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const SignalVector full = trial_signal(cfg, cfg.n, t);
        const std::size_t center = detect_spike_center(full, kSpikeThresholdUv);
        const std::size_t start =
            std::min(center > kHalfWidth ? center - kHalfWidth : 0, cfg.n - kWindow);
        const SignalVector raw = segment(full, kWindow, start);
        const SignalVector interp = interpolate_linear(raw, 2);
        const std::size_t m_raw = kWindow / 2;
        const auto m_interp = static_cast<std::size_t>(std::lround(0.5 * interp.size()));

        const auto run_variant = [&](const std::string& tag, const SignalVector& x, std::size_t m) {
            const SensingMatrix a =
                sparse_binary_matrix(m, x.size(), kBinaryNnzPerColumn, sensing_seed(cfg, x.size(), m));
            records.push_back(run_single(cfg, tag, x, dicts.get(DictionaryKind::fft_real, x.size()),
                                         a, SolverKind::bsbl_bo, t));
        };
        run_variant("interp_window.full", full, m_full);
        run_variant("interp_window.raw", raw, m_raw);
        run_variant("interp_window.interp", interp, m_interp);
    }
    return records;
}

std::vector<ExperimentRecord> run_solver_compare(const ExperimentConfig& cfg) {
    const auto bases = cfg.bases.empty() ? default_bases(cfg.experiment) : cfg.bases;
    const auto solvers = cfg.solvers.empty() ? default_solvers(cfg.experiment) : cfg.solvers;
    if (solvers.size() != 2)
        throw std::invalid_argument("solver_compare needs exactly two solvers, got " +
                                    std::to_string(solvers.size()));
    const auto m_values = cfg.m_values.empty() ? default_m_grid(cfg.n) : cfg.m_values;
    validate_m(cfg, m_values);

    std::vector<SignalVector> signals;
    for (std::size_t t = 0; t < cfg.trials; ++t) signals.push_back(trial_signal(cfg, cfg.n, t));

    DictionaryCache dicts;
    const DictionaryMatrix& d = dicts.get(bases.front(), cfg.n);
    std::vector<ExperimentRecord> records;
    for (std::size_t m : m_values) {
        // both solvers see the same matrix at each compression point
        const SensingMatrix a = gaussian_matrix(m, cfg.n, sensing_seed(cfg, cfg.n, m));
        for (SolverKind solver : solvers)
            for (std::size_t t = 0; t < cfg.trials; ++t)
                records.push_back(run_single(cfg, "solver_compare", signals[t], d, a, solver, t));
    }
    return records;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (cfg.n < 2) throw std::invalid_argument("n must be >= 2");
    switch (cfg.experiment) {
        case ExperimentKind::dict_compare: return run_dict_compare(cfg);
        case ExperimentKind::cr_sweep: return run_cr_sweep(cfg);
        case ExperimentKind::interp_window: return run_interp_window(cfg);
        case ExperimentKind::solver_compare: return run_solver_compare(cfg);
    }
    throw std::invalid_argument("unknown experiment kind");
}

namespace {

nlohmann::ordered_json record_to_json(const ExperimentRecord& r) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["basis"] = r.basis;
    j["solver"] = r.solver;
    j["n"] = r.n;
    j["m"] = r.m;
    j["cr"] = r.cr;
    j["snr_db"] = r.snr_db;
    j["psnr_db"] = r.psnr_db;
    if (r.spike_snr_db)
        j["spike_snr_db"] = *r.spike_snr_db;
    else
        j["spike_snr_db"] = nullptr;
    j["runtime_s"] = r.runtime_s;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["trial_seed"] = r.trial_seed;
    return j;
}

ExperimentRecord record_from_json(const nlohmann::json& j) {
    ExperimentRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.basis = j.at("basis").get<std::string>();
    r.solver = j.at("solver").get<std::string>();
    r.n = j.at("n").get<std::size_t>();
    r.m = j.at("m").get<std::size_t>();
    r.cr = j.at("cr").get<double>();
    r.snr_db = j.at("snr_db").get<double>();
    r.psnr_db = j.at("psnr_db").get<double>();
    if (j.contains("spike_snr_db") && !j.at("spike_snr_db").is_null())
        r.spike_snr_db = j.at("spike_snr_db").get<double>();
    r.runtime_s = j.value("runtime_s", 0.0);
    r.iterations = j.value("iterations", 0);
    r.converged = j.value("converged", false);
    r.trial_seed = j.value("trial_seed", std::uint64_t{0});
    return r;
}

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, ptr};
}

}  // namespace

void write_records(const std::vector<ExperimentRecord>& records,
                   const std::filesystem::path& jsonl_path) {
    std::ofstream out(jsonl_path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + jsonl_path.string());
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
    if (!out) throw std::runtime_error("write failed: " + jsonl_path.string());

    std::filesystem::path csv_path = jsonl_path;
    csv_path.replace_extension(".csv");
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open file for writing: " + csv_path.string());
    csv << "experiment,basis,solver,n,m,cr,snr_db,psnr_db,spike_snr_db,runtime_s,iterations,"
           "converged,trial_seed\n";
    for (const auto& r : records) {
        csv << r.experiment << ',' << r.basis << ',' << r.solver << ',' << r.n << ',' << r.m << ','
            << format_double(r.cr) << ',' << format_double(r.snr_db) << ','
            << format_double(r.psnr_db) << ','
            << (r.spike_snr_db ? format_double(*r.spike_snr_db) : "") << ','
            << format_double(r.runtime_s) << ',' << r.iterations << ','
            << (r.converged ? "true" : "false") << ',' << r.trial_seed << '\n';
    }
    if (!csv) throw std::runtime_error("write failed: " + csv_path.string());
}

std::vector<ExperimentRecord> read_records(const std::filesystem::path& jsonl_path) {
    std::ifstream in(jsonl_path);
    if (!in) throw std::runtime_error("cannot open file: " + jsonl_path.string());
    std::vector<ExperimentRecord> records;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("bad record at " + jsonl_path.string() + ":" +
                                     std::to_string(line_number) + ": " + e.what());
        }
    }
    return records;
}

std::string render_table(const std::vector<ExperimentRecord>& records) {
    if (records.empty()) throw std::invalid_argument("cannot render a table from zero records");

    const std::vector<std::string> header = {"Experiment", "Solver",  "Basis", "PSNR(dB)",
                                             "SNR(dB)",    "CR",      "Time (s)"};
    std::vector<std::vector<std::string>> rows;
    rows.push_back(header);
    char buf[40];
    const auto g6 = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };
    for (const auto& r : records)
        rows.push_back({r.experiment, r.solver, r.basis, g6(r.psnr_db), g6(r.snr_db), g6(r.cr),
                        g6(r.runtime_s)});

    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());

    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) out << std::string(widths[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    }
    return out.str();
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("expected true/false, got \"" + v + "\"");
}

double parse_double(const std::string& v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw std::invalid_argument("expected a number, got \"" + v + "\"");
    return out;
}

std::uint64_t parse_u64(const std::string& v) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw std::invalid_argument("expected a non-negative integer, got \"" + v + "\"");
    return out;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const std::size_t comma = v.find(',', pos);
        const std::string item = trim(v.substr(pos, comma - pos));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());

    ExperimentConfig cfg;
    SpikeTemplateParams spike;
    FileSource file_source;
    bool use_file = false;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError(path.string(), line_number, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigParseError(path.string(), line_number, "expected key = value");

        try {
            if (key == "experiment") cfg.experiment = parse_experiment_kind(value);
            else if (key == "n") cfg.n = parse_u64(value);
            else if (key == "m" || key == "m_values") {
                cfg.m_values.clear();
                for (const auto& item : split_list(value)) cfg.m_values.push_back(parse_u64(item));
            } else if (key == "bases") {
                cfg.bases.clear();
                for (const auto& item : split_list(value))
                    cfg.bases.push_back(parse_dictionary_kind(item));
            } else if (key == "solvers") {
                cfg.solvers.clear();
                for (const auto& item : split_list(value))
                    cfg.solvers.push_back(parse_solver_kind(item));
            } else if (key == "trials") cfg.trials = parse_u64(value);
            else if (key == "seed") cfg.seed = parse_u64(value);
            else if (key == "source") {
                if (value == "synthetic") use_file = false;
                else if (value == "file") use_file = true;
                else throw std::invalid_argument("expected synthetic or file, got \"" + value + "\"");
            } else if (key == "file.path") file_source.path = value;
            else if (key == "file.format") file_source.format = parse_sample_format(value);
            else if (key == "file.rate") file_source.sample_rate_hz = parse_double(value);
            else if (key == "spike.amplitude_uv") spike.amplitude_uv = parse_double(value);
            else if (key == "spike.depol_width") spike.depol_width = parse_double(value);
            else if (key == "spike.repol_width") spike.repol_width = parse_double(value);
            else if (key == "spike.noise_sigma_uv") spike.noise_sigma_uv = parse_double(value);
            else if (key == "bp.epsilon") cfg.bp.epsilon = parse_double(value);
            else if (key == "bp.rho") cfg.bp.rho = parse_double(value);
            else if (key == "bp.max_iter") cfg.bp.max_iter = static_cast<int>(parse_u64(value));
            else if (key == "bp.abs_tol") cfg.bp.abs_tol = parse_double(value);
            else if (key == "bp.rel_tol") cfg.bp.rel_tol = parse_double(value);
            else if (key == "bsbl.block_size") cfg.bsbl.block_size = parse_u64(value);
            else if (key == "bsbl.learn_lambda") cfg.bsbl.learn_lambda = parse_bool(value);
            else if (key == "bsbl.lambda_init") cfg.bsbl.lambda_init = parse_double(value);
            else if (key == "bsbl.learn_correlation") cfg.bsbl.learn_correlation = parse_bool(value);
            else if (key == "bsbl.prune_gamma") cfg.bsbl.prune_gamma = parse_double(value);
            else if (key == "bsbl.max_iter") cfg.bsbl.max_iter = static_cast<int>(parse_u64(value));
            else if (key == "bsbl.tol") cfg.bsbl.tol = parse_double(value);
            else throw std::invalid_argument("unknown key \"" + key + "\"");
        } catch (const ConfigParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigParseError(path.string(), line_number, key + ": " + e.what());
        }
    }

    cfg.source = use_file ? DataSource{file_source} : DataSource{SyntheticSource{spike}};
    if (cfg.trials < 1) throw std::runtime_error(path.string() + ": trials must be >= 1");
    for (std::size_t m : cfg.m_values)
        if (m > cfg.n)
            throw std::runtime_error(path.string() + ": m = " + std::to_string(m) +
                                     " exceeds n = " + std::to_string(cfg.n));
    return cfg;
}

}  // namespace spikecs

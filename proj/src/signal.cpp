#include "spikecs/signal.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "spikecs/rng.hpp"

namespace spikecs {

SampleFormat parse_sample_format(const std::string& name) {
    if (name == "csv") return SampleFormat::csv;
    if (name == "f64le") return SampleFormat::f64le;
    if (name == "f32le") return SampleFormat::f32le;
    throw std::invalid_argument("unknown sample format \"" + name + "\" (expected csv, f64le or f32le)");
}

std::string sample_format_name(SampleFormat fmt) {
    switch (fmt) {
        case SampleFormat::csv: return "csv";
        case SampleFormat::f64le: return "f64le";
        case SampleFormat::f32le: return "f32le";
    }
    return "?";
}

SignalVector generate_spike(std::size_t n, const SpikeTemplateParams& params) {
    if (params.amplitude_uv < 250.0)
        throw std::invalid_argument("spike amplitude must be >= 250 uV, got " +
                                    std::to_string(params.amplitude_uv));
    if (!(params.depol_width > 0.0) || !(params.repol_width > 0.0))
        throw std::invalid_argument("spike lobe widths must be positive");
    if (params.noise_sigma_uv < 0.0)
        throw std::invalid_argument("noise sigma must be non-negative");
    const double extent = params.depol_width + params.repol_width;
    if (static_cast<double>(n) < 4.0 * extent)
        throw std::invalid_argument("n = " + std::to_string(n) + " too small for spike template; need n >= " +
                                    std::to_string(4.0 * extent));

    const double center = static_cast<double>(n) / 2.0;
    const double trough = center + 1.5 * extent;
    const double wd = params.depol_width;
    const double wr = params.repol_width;

    SignalVector out;
    out.origin = SignalOrigin::synthetic;
    out.source = "generated";
    out.samples.resize(n);
    // repolarization dips to half the depolarization height, so the
    // largest |sample| is always the positive peak
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j);
        const double pos = std::exp(-0.5 * ((t - center) / wd) * ((t - center) / wd));
        const double neg = std::exp(-0.5 * ((t - trough) / wr) * ((t - trough) / wr));
        out.samples[j] = pos - 0.5 * neg;
    }
    // positive peak = amplitude_uv; peak-to-peak then strictly exceeds it
    const double peak = *std::max_element(out.samples.begin(), out.samples.end());
    const double scale = params.amplitude_uv / peak;
    for (double& s : out.samples) s *= scale;

    if (params.noise_sigma_uv > 0.0) {
        Rng rng(params.seed);
        for (double& s : out.samples) s += params.noise_sigma_uv * rng.next_gaussian();
    }
    return out;
}

namespace {

std::vector<double> parse_csv(const std::string& path, std::ifstream& in) {
    std::vector<double> samples;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        // tolerate trailing CR and surrounding blanks
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t\r") + 1;
        const char* first = line.data() + begin;
        const char* last = line.data() + end;
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) {
            if (line_number == 1 && samples.empty()) continue;  // optional header
            throw CsvParseError(path, line_number, line.substr(begin, end - begin));
        }
        samples.push_back(value);
    }
    return samples;
}

template <typename Float>
std::vector<double> parse_packed(const std::string& path, const std::string& bytes) {
    static_assert(std::endian::native == std::endian::little,
                  "packed readers assume a little-endian host");
    if (bytes.size() % sizeof(Float) != 0)
        throw TruncatedFileError(path, bytes.size(), sizeof(Float));
    const std::size_t count = bytes.size() / sizeof(Float);
    std::vector<double> samples(count);
    for (std::size_t i = 0; i < count; ++i) {
        Float v;
        std::memcpy(&v, bytes.data() + i * sizeof(Float), sizeof(Float));
        samples[i] = static_cast<double>(v);
    }
    return samples;
}

}  // namespace

SignalVector load_signal(const std::filesystem::path& path, SampleFormat format,
                         double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("sample_rate_hz must be positive");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open file: " + path.string());

    std::vector<double> samples;
    if (format == SampleFormat::csv) {
        samples = parse_csv(path.string(), in);
    } else {
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string bytes = buf.str();
        if (bytes.empty()) throw EmptyFileError(path.string());
        samples = format == SampleFormat::f64le ? parse_packed<double>(path.string(), bytes)
                                                : parse_packed<float>(path.string(), bytes);
    }
    if (samples.empty()) throw EmptyFileError(path.string());
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (!std::isfinite(samples[i]))
            throw LoadError("non-finite sample at index " + std::to_string(i) + " in " + path.string());

    SignalVector out;
    out.samples = std::move(samples);
    out.sample_rate_hz = sample_rate_hz;
    out.origin = SignalOrigin::file;
    out.source = path.string();
    return out;
}

void save_signal(const SignalVector& signal, const std::filesystem::path& path,
                 SampleFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot open file for writing: " + path.string());
    switch (format) {
        case SampleFormat::csv: {
            char buf[64];
            for (double s : signal.samples) {
                auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), s);
                assert(ec == std::errc{});
                out.write(buf, ptr - buf);
                out.put('\n');
            }
            break;
        }
        case SampleFormat::f64le:
            static_assert(std::endian::native == std::endian::little);
            out.write(reinterpret_cast<const char*>(signal.samples.data()),
                      static_cast<std::streamsize>(signal.samples.size() * sizeof(double)));
            break;
        case SampleFormat::f32le: {
            for (double s : signal.samples) {
                const float v = static_cast<float>(s);
                out.write(reinterpret_cast<const char*>(&v), sizeof(v));
            }
            break;
        }
    }
    if (!out) throw LoadError("write failed: " + path.string());
}

SignalVector segment(const SignalVector& signal, std::size_t n, std::size_t offset) {
    if (n == 0) throw std::invalid_argument("segment length must be positive");
    if (offset + n > signal.size())
        throw std::out_of_range("segment [" + std::to_string(offset) + ", " +
                                std::to_string(offset + n) + ") exceeds signal length " +
                                std::to_string(signal.size()));
    SignalVector out;
    out.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                       signal.samples.begin() + static_cast<std::ptrdiff_t>(offset + n));
    out.sample_rate_hz = signal.sample_rate_hz;
    out.origin = signal.origin;
    out.source = signal.source;
    return out;
}

std::size_t detect_spike_center(const SignalVector& signal, double threshold_uv) {
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const double mag = std::abs(signal.samples[i]);
        if (mag > best_mag) {
            best_mag = mag;
            best = i;
        }
    }
    if (best_mag < threshold_uv)
        throw NoSpikeError("no spike found: max |sample| = " + std::to_string(best_mag) +
                           " uV below threshold " + std::to_string(threshold_uv) + " uV");
    return best;
}

SignalVector interpolate_linear(const SignalVector& signal, std::size_t factor) {
    if (factor < 2) throw std::invalid_argument("interpolation factor must be >= 2");
    const std::size_t n = signal.size();
    if (n < 2) throw std::invalid_argument("interpolation needs at least 2 samples");

    SignalVector out;
    out.sample_rate_hz = signal.sample_rate_hz * static_cast<double>(factor);
    out.origin = signal.origin;
    out.source = signal.source;
    out.samples.resize(factor * (n - 1) + 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = signal.samples[i];
        const double b = signal.samples[i + 1];
        out.samples[factor * i] = a;
        for (std::size_t k = 1; k < factor; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(factor);
            out.samples[factor * i + k] = a + t * (b - a);
        }
    }
    out.samples.back() = signal.samples.back();
    return out;
}

}  // namespace spikecs

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikecs {

enum class SignalOrigin { synthetic, file };

enum class SampleFormat { csv, f64le, f32le };

SampleFormat parse_sample_format(const std::string& name);
std::string sample_format_name(SampleFormat fmt);

/// A length-N real sample vector in microvolts plus acquisition metadata.
struct SignalVector {
    std::vector<double> samples;
    double sample_rate_hz = 15000.0;
    SignalOrigin origin = SignalOrigin::synthetic;
    std::string source;

    std::size_t size() const { return samples.size(); }
};

/// Half-open window [center - half_width, center + half_width) clipped to
/// the signal extent.
struct SpikeWindow {
    std::ptrdiff_t center_index = 0;
    std::ptrdiff_t half_width = 30;
};

struct SpikeTemplateParams {
    double amplitude_uv = 300.0;   // minimum peak-to-peak, >= 250
    double depol_width = 6.0;      // samples
    double repol_width = 12.0;     // samples
    double noise_sigma_uv = 0.0;
    std::uint64_t seed = 0;
};

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyFileError : LoadError {
    explicit EmptyFileError(const std::string& path)
        : LoadError("empty file: " + path) {}
};
struct CsvParseError : LoadError {
    CsvParseError(const std::string& path, std::size_t line, const std::string& content)
        : LoadError("unparsable value at " + path + ":" + std::to_string(line) + ": \"" + content + "\""),
          line_number(line) {}
    std::size_t line_number;
};
struct TruncatedFileError : LoadError {
    TruncatedFileError(const std::string& path, std::size_t bytes, std::size_t sample_bytes)
        : LoadError("truncated binary file " + path + ": " + std::to_string(bytes) +
                    " bytes is not a multiple of " + std::to_string(sample_bytes)),
          byte_count(bytes) {}
    std::size_t byte_count;
};
struct NoSpikeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Synthetic biphasic action potential: a positive Gaussian lobe of width
/// depol_width followed by a negative lobe of width repol_width, centered
/// at n/2, scaled so the positive peak equals amplitude_uv (peak-to-peak
/// therefore exceeds it), plus i.i.d. Gaussian noise of std
/// noise_sigma_uv. Deterministic per seed.
SignalVector generate_spike(std::size_t n, const SpikeTemplateParams& params);

SignalVector load_signal(const std::filesystem::path& path, SampleFormat format,
                         double sample_rate_hz = 15000.0);

void save_signal(const SignalVector& signal, const std::filesystem::path& path,
                 SampleFormat format);

/// Contiguous slice [offset, offset + n); metadata preserved.
SignalVector segment(const SignalVector& signal, std::size_t n, std::size_t offset);

/// Index of the largest |sample| that reaches threshold_uv; ties break to
/// the lowest index. Throws NoSpikeError when nothing reaches threshold.
std::size_t detect_spike_center(const SignalVector& signal, double threshold_uv);

/// Linear interpolation by an integer factor >= 2. Output length is
/// factor*(N-1)+1 with the original samples preserved at indices factor*i;
/// sample rate scales by factor.
SignalVector interpolate_linear(const SignalVector& signal, std::size_t factor);

}  // namespace spikecs

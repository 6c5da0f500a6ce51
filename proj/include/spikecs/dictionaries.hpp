#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace spikecs {

enum class DictionaryKind {
    identity,
    dct,
    fft_real,
    dpss,
    gabor,
    noiselet_real,
    rst,
    wavelet_db20,
};

DictionaryKind parse_dictionary_kind(const std::string& name);
std::string dictionary_kind_name(DictionaryKind kind);
const std::vector<DictionaryKind>& all_dictionary_kinds();

/// Gabor atom grid: one atom per (center, spread, frequency, phase) tuple,
///   g(j) = exp(-(j - n0)^2 / sigma^2) * cos(omega * j + theta).
struct GaborParams {
    std::vector<double> centers;
    std::vector<double> spreads;      // sigma > 0
    std::vector<double> frequencies;  // omega > 0
    std::vector<double> phases;
};

/// 32 centers spanning [0, n), sigma in {4, 8, 16, 32}, omega = 2*pi*k/64
/// for k = 1..8, theta in {0, pi/2}. 2048 atoms at n = 256.
GaborParams default_gabor_params(std::size_t n);

struct DpssParams {
    double nw = 8.5;  // time-half-bandwidth product
};
struct WaveletParams {
    std::size_t levels = 4;
};

using DictionaryParams = std::variant<std::monostate, DpssParams, GaborParams, WaveletParams>;

/// N x K matrix of unit-norm atoms (columns); x = atoms * s.
struct DictionaryMatrix {
    Eigen::MatrixXd atoms;
    DictionaryKind kind = DictionaryKind::identity;
    DictionaryParams params;

    Eigen::Index n() const { return atoms.rows(); }
    Eigen::Index k() const { return atoms.cols(); }
};

DictionaryMatrix build_identity(std::size_t n);

/// Orthonormal DCT-II synthesis matrix: atom k at sample j is
/// c_k * cos(pi * (2j+1) * k / (2n)), c_0 = sqrt(1/n), c_k = sqrt(2/n).
DictionaryMatrix build_dct(std::size_t n);

/// Slepian sequences for bandwidth W = nw/n, columns ordered by decreasing
/// spectral concentration; computed from the symmetric tridiagonal form.
DictionaryMatrix build_dpss(std::size_t n, double nw = 8.5);

/// Real Fourier frame: unit-normalized cos(2*pi*k*j/n) and sin(2*pi*k*j/n)
/// atoms for k = 0..n-1 with the zero-norm sine atoms dropped (K = 2n - 2
/// for even n).
DictionaryMatrix build_fft_real(std::size_t n);

DictionaryMatrix build_gabor(std::size_t n, const GaborParams& params);

/// Real noiselet frame: the complex noiselet recursion at depth log2(n),
/// realified by stacking unit-normalized real and imaginary parts.
DictionaryMatrix build_noiselet_real(std::size_t n);

/// Orthonormal real sinusoid basis: constant atom, cosines k = 1..n/2-1,
/// Nyquist atom, sines k = 1..n/2-1. Requires even n >= 4.
DictionaryMatrix build_rst(std::size_t n);

/// Periodized orthogonal Daubechies wavelet with 20 filter taps, cascaded
/// over `levels` scales. Columns: scaling atoms coarsest-first, then
/// wavelet atoms coarse-to-fine.
DictionaryMatrix build_wavelet_db20(std::size_t n, std::size_t levels = 4);

/// Build any kind with its default parameters.
DictionaryMatrix build_dictionary(DictionaryKind kind, std::size_t n);

/// The embedded 20-tap scaling filter (sums to sqrt(2)).
const std::vector<double>& daubechies20_taps();

}  // namespace spikecs

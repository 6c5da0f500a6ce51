#include "spikecs/dictionaries.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace spikecs {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n) {
    std::size_t l = 0;
    while ((std::size_t{1} << l) < n) ++l;
    return l;
}

/// Keep columns with norm >= 1e-12, unit-normalized.
Eigen::MatrixXd normalize_and_drop(const Eigen::MatrixXd& raw) {
    std::vector<Eigen::Index> keep;
    keep.reserve(raw.cols());
    for (Eigen::Index c = 0; c < raw.cols(); ++c)
        if (raw.col(c).norm() >= 1e-12) keep.push_back(c);
    Eigen::MatrixXd out(raw.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
        out.col(static_cast<Eigen::Index>(i)) = raw.col(keep[i]) / raw.col(keep[i]).norm();
    return out;
}

void fix_sign_largest_positive(Eigen::MatrixXd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        Eigen::Index at = 0;
        m.col(c).cwiseAbs().maxCoeff(&at);
        if (m(at, c) < 0.0) m.col(c) = -m.col(c);
    }
}

}  // namespace

DictionaryKind parse_dictionary_kind(const std::string& name) {
    for (DictionaryKind kind : all_dictionary_kinds())
        if (dictionary_kind_name(kind) == name) return kind;
    std::string valid;
    for (DictionaryKind kind : all_dictionary_kinds())
        valid += (valid.empty() ? "" : ", ") + dictionary_kind_name(kind);
    throw std::invalid_argument("unknown dictionary kind \"" + name + "\" (expected one of: " + valid + ")");
}

std::string dictionary_kind_name(DictionaryKind kind) {
    switch (kind) {
        case DictionaryKind::identity: return "identity";
        case DictionaryKind::dct: return "dct";
        case DictionaryKind::fft_real: return "fft_real";
        case DictionaryKind::dpss: return "dpss";
        case DictionaryKind::gabor: return "gabor";
        case DictionaryKind::noiselet_real: return "noiselet_real";
        case DictionaryKind::rst: return "rst";
        case DictionaryKind::wavelet_db20: return "wavelet_db20";
    }
    return "?";
}

const std::vector<DictionaryKind>& all_dictionary_kinds() {
    static const std::vector<DictionaryKind> kinds = {
        DictionaryKind::identity,   DictionaryKind::dct,  DictionaryKind::fft_real,
        DictionaryKind::dpss,       DictionaryKind::gabor, DictionaryKind::noiselet_real,
        DictionaryKind::rst,        DictionaryKind::wavelet_db20,
    };
    return kinds;
}

DictionaryMatrix build_identity(std::size_t n) {
    if (n < 1) throw std::invalid_argument("identity dictionary needs n >= 1");
    DictionaryMatrix d;
    d.kind = DictionaryKind::identity;
    d.atoms = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    return d;
}

DictionaryMatrix build_dct(std::size_t n) {
    if (n < 2) throw std::invalid_argument("dct dictionary needs n >= 2");
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd atoms(ni, ni);
    const double c0 = std::sqrt(1.0 / static_cast<double>(n));
    const double ck = std::sqrt(2.0 / static_cast<double>(n));
    for (Eigen::Index k = 0; k < ni; ++k) {
        const double scale = k == 0 ? c0 : ck;
        for (Eigen::Index j = 0; j < ni; ++j)
            atoms(j, k) = scale * std::cos(kPi * (2.0 * j + 1.0) * k / (2.0 * static_cast<double>(n)));
    }
    DictionaryMatrix d;
    d.kind = DictionaryKind::dct;
    d.atoms = std::move(atoms);
    return d;
}

DictionaryMatrix build_dpss(std::size_t n, double nw) {
    if (n < 2) throw std::invalid_argument("dpss dictionary needs n >= 2");
    if (!(nw > 0.0) || !(nw < static_cast<double>(n) / 2.0))
        throw std::invalid_argument("dpss time-half-bandwidth must satisfy 0 < nw < n/2, got " +
                                    std::to_string(nw));
    const auto ni = static_cast<Eigen::Index>(n);
    const double w = nw / static_cast<double>(n);
    const double cos_term = std::cos(2.0 * kPi * w);

    Eigen::VectorXd diag(ni), subdiag(ni - 1);
    for (Eigen::Index j = 0; j < ni; ++j) {
        const double half_span = (static_cast<double>(n) - 1.0 - 2.0 * static_cast<double>(j)) / 2.0;
        diag(j) = half_span * half_span * cos_term;
    }
    for (Eigen::Index j = 1; j < ni; ++j)
        subdiag(j - 1) = static_cast<double>(j) * (static_cast<double>(n) - static_cast<double>(j)) / 2.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dpss tridiagonal eigensolver failed");

    // eigenvalues come out ascending; concentration order is descending
    Eigen::MatrixXd atoms(ni, ni);
    for (Eigen::Index c = 0; c < ni; ++c) atoms.col(c) = solver.eigenvectors().col(ni - 1 - c);
    fix_sign_largest_positive(atoms);

    DictionaryMatrix d;
    d.kind = DictionaryKind::dpss;
    d.params = DpssParams{nw};
    d.atoms = std::move(atoms);
    return d;
}

DictionaryMatrix build_fft_real(std::size_t n) {
    if (n < 2) throw std::invalid_argument("fft_real dictionary needs n >= 2");
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd raw(ni, 2 * ni);
    for (Eigen::Index k = 0; k < ni; ++k) {
        for (Eigen::Index j = 0; j < ni; ++j) {
            const double angle = 2.0 * kPi * static_cast<double>(k) * static_cast<double>(j) /
                                 static_cast<double>(n);
            raw(j, k) = std::cos(angle);
            raw(j, ni + k) = std::sin(angle);
        }
    }
    DictionaryMatrix d;
    d.kind = DictionaryKind::fft_real;
    d.atoms = normalize_and_drop(raw);
    return d;
}

GaborParams default_gabor_params(std::size_t n) {
    GaborParams p;
    const double step = static_cast<double>(n) / 32.0;
    for (int i = 0; i < 32; ++i) p.centers.push_back(step * i);
    p.spreads = {4.0, 8.0, 16.0, 32.0};
    for (int k = 1; k <= 8; ++k) p.frequencies.push_back(2.0 * kPi * k / 64.0);
    p.phases = {0.0, kPi / 2.0};
    return p;
}

DictionaryMatrix build_gabor(std::size_t n, const GaborParams& params) {
    if (n < 1) throw std::invalid_argument("gabor dictionary needs n >= 1");
    if (params.centers.empty() || params.spreads.empty() || params.frequencies.empty() ||
        params.phases.empty())
        throw std::invalid_argument("gabor parameter grids must be non-empty");
    for (double s : params.spreads)
        if (!(s > 0.0)) throw std::invalid_argument("gabor spread must be positive");
    for (double w : params.frequencies)
        if (!(w > 0.0)) throw std::invalid_argument("gabor frequency must be positive");

    const auto ni = static_cast<Eigen::Index>(n);
    const auto total = static_cast<Eigen::Index>(params.centers.size() * params.spreads.size() *
                                                 params.frequencies.size() * params.phases.size());
    Eigen::MatrixXd raw(ni, total);
    Eigen::Index c = 0;
    for (double n0 : params.centers)
        for (double sigma : params.spreads)
            for (double omega : params.frequencies)
                for (double theta : params.phases) {
                    for (Eigen::Index j = 0; j < ni; ++j) {
                        const double t = static_cast<double>(j) - n0;
                        raw(j, c) = std::exp(-(t * t) / (sigma * sigma)) *
                                    std::cos(omega * static_cast<double>(j) + theta);
                    }
                    ++c;
                }

    Eigen::MatrixXd atoms = normalize_and_drop(raw);
    if (atoms.cols() == 0) throw std::invalid_argument("all gabor atoms are degenerate");
    DictionaryMatrix d;
    d.kind = DictionaryKind::gabor;
    d.params = params;
    d.atoms = std::move(atoms);
    return d;
}

DictionaryMatrix build_noiselet_real(std::size_t n) {
    if (!is_power_of_two(n))
        throw std::invalid_argument("noiselet dictionary needs n to be a power of 2, got " +
                                    std::to_string(n));
    const std::size_t depth = log2_exact(n);

    // children of f: [(1-i) f ; (1+i) f] and [(1+i) f ; (1-i) f]
    Eigen::MatrixXcd cur = Eigen::MatrixXcd::Ones(1, 1);
    const std::complex<double> a(1.0, -1.0), b(1.0, 1.0);
    for (std::size_t level = 0; level < depth; ++level) {
        const Eigen::Index m = cur.rows();
        Eigen::MatrixXcd next(2 * m, 2 * m);
        for (Eigen::Index col = 0; col < m; ++col) {
            next.col(2 * col).head(m) = a * cur.col(col);
            next.col(2 * col).tail(m) = b * cur.col(col);
            next.col(2 * col + 1).head(m) = b * cur.col(col);
            next.col(2 * col + 1).tail(m) = a * cur.col(col);
        }
        cur = std::move(next);
    }

    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd raw(ni, 2 * ni);
    raw.leftCols(ni) = cur.real();
    raw.rightCols(ni) = cur.imag();

    DictionaryMatrix d;
    d.kind = DictionaryKind::noiselet_real;
    d.atoms = normalize_and_drop(raw);
    return d;
}

DictionaryMatrix build_rst(std::size_t n) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("rst dictionary needs even n >= 4, got " + std::to_string(n));
    const auto ni = static_cast<Eigen::Index>(n);
    const double nd = static_cast<double>(n);
    Eigen::MatrixXd atoms(ni, ni);
    Eigen::Index c = 0;
    atoms.col(c++).setConstant(std::sqrt(1.0 / nd));
    for (Eigen::Index k = 1; k < ni / 2; ++k, ++c)
        for (Eigen::Index j = 0; j < ni; ++j)
            atoms(j, c) = std::sqrt(2.0 / nd) * std::cos(2.0 * kPi * k * j / nd);
    for (Eigen::Index j = 0; j < ni; ++j) atoms(j, c) = (j % 2 == 0 ? 1.0 : -1.0) * std::sqrt(1.0 / nd);
    ++c;
    for (Eigen::Index k = 1; k < ni / 2; ++k, ++c)
        for (Eigen::Index j = 0; j < ni; ++j)
            atoms(j, c) = std::sqrt(2.0 / nd) * std::sin(2.0 * kPi * k * j / nd);

    DictionaryMatrix d;
    d.kind = DictionaryKind::rst;
    d.atoms = std::move(atoms);
    return d;
}

const std::vector<double>& daubechies20_taps() {
    static const std::vector<double> taps = {
        0.026670057900555554,   0.18817680007769149,    0.52720118893172559,
        0.68845903945360357,    0.28117234366057746,    -0.24984642432731538,
        -0.19594627437737704,   0.12736934033579326,    0.093057364603572351,
        -0.071394147166397087,  -0.029457536821875813,  0.033212674059341002,
        0.0036065535669561697,  -0.010733175483330575,  0.0013953517470529012,
        0.0019924052951850561,  -0.00068585669495971163, -0.00011646685512928545,
        9.3588670320069591e-05, -1.3264202894521245e-05,
    };
    return taps;
}

DictionaryMatrix build_wavelet_db20(std::size_t n, std::size_t levels) {
    if (!is_power_of_two(n))
        throw std::invalid_argument("wavelet dictionary needs n to be a power of 2, got " +
                                    std::to_string(n));
    if (levels < 1) throw std::invalid_argument("wavelet levels must be >= 1");
    if ((std::size_t{1} << levels) > n)
        throw std::invalid_argument("wavelet needs 2^levels <= n: 2^" + std::to_string(levels) +
                                    " > " + std::to_string(n));
    const std::size_t coarsest = n >> (levels - 1);
    if (coarsest < 20)
        throw std::invalid_argument("wavelet needs filter length 20 <= n/2^(levels-1) = " +
                                    std::to_string(coarsest));

    const auto& h = daubechies20_taps();
    const std::size_t taps = h.size();
    std::vector<double> g(taps);  // quadrature mirror
    for (std::size_t k = 0; k < taps; ++k)
        g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[taps - 1 - k];

    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd atoms = Eigen::MatrixXd::Identity(ni, ni);

    // single periodized synthesis step at size m applied to the leading
    // m rows: [approx; detail] -> samples
    const auto synth_step = [&](Eigen::Index m, Eigen::VectorXd& column) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
        const Eigen::Index half = m / 2;
        for (Eigen::Index k = 0; k < half; ++k) {
            const double a = column(k);
            const double dcoef = column(half + k);
            if (a == 0.0 && dcoef == 0.0) continue;
            for (std::size_t i = 0; i < taps; ++i) {
                const Eigen::Index j = (2 * k + static_cast<Eigen::Index>(i)) % m;
                x(j) += a * h[i] + dcoef * g[i];
            }
        }
        column.head(m) = x;
    };

    for (std::size_t level = levels; level >= 1; --level) {
        const auto m = static_cast<Eigen::Index>(n >> (level - 1));
        for (Eigen::Index c = 0; c < ni; ++c) {
            Eigen::VectorXd col = atoms.col(c);
            synth_step(m, col);
            atoms.col(c) = col;
        }
    }

    DictionaryMatrix d;
    d.kind = DictionaryKind::wavelet_db20;
    d.params = WaveletParams{levels};
    d.atoms = std::move(atoms);
    return d;
}

DictionaryMatrix build_dictionary(DictionaryKind kind, std::size_t n) {
    switch (kind) {
        case DictionaryKind::identity: return build_identity(n);
        case DictionaryKind::dct: return build_dct(n);
        case DictionaryKind::fft_real: return build_fft_real(n);
        case DictionaryKind::dpss: return build_dpss(n);
        case DictionaryKind::gabor: return build_gabor(n, default_gabor_params(n));
        case DictionaryKind::noiselet_real: return build_noiselet_real(n);
        case DictionaryKind::rst: return build_rst(n);
        case DictionaryKind::wavelet_db20: {
            std::size_t levels = 1;
            while (levels < 4 && (std::size_t{1} << (levels + 1)) <= n && (n >> levels) >= 20) ++levels;
            return build_wavelet_db20(n, levels);
        }
    }
    throw std::invalid_argument("unknown dictionary kind");
}

}  // namespace spikecs

#include "spikecs/sensing.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spikecs/rng.hpp"

namespace spikecs {

SensingKind parse_sensing_kind(const std::string& name) {
    if (name == "gaussian") return SensingKind::gaussian;
    if (name == "sparse_binary") return SensingKind::sparse_binary;
    throw std::invalid_argument("unknown sensing kind \"" + name +
                                "\" (expected gaussian or sparse_binary)");
}

std::string sensing_kind_name(SensingKind kind) {
    return kind == SensingKind::gaussian ? "gaussian" : "sparse_binary";
}

namespace {

void check_shape(std::size_t m, std::size_t n) {
    if (m < 1 || n < 1) throw std::invalid_argument("sensing matrix needs m, n >= 1");
    if (m > n)
        throw std::invalid_argument("sensing matrix must not expand: m = " + std::to_string(m) +
                                    " > n = " + std::to_string(n));
}

}  // namespace

SensingMatrix gaussian_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
    check_shape(m, n);
    Rng rng(seed);
    const double sigma = 1.0 / std::sqrt(static_cast<double>(m));
    SensingMatrix a;
    a.kind = SensingKind::gaussian;
    a.seed = seed;
    a.entries.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    // row-major fill order is part of the reproducibility contract
    for (Eigen::Index i = 0; i < a.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < a.entries.cols(); ++j)
            a.entries(i, j) = sigma * rng.next_gaussian();
    return a;
}

SensingMatrix sparse_binary_matrix(std::size_t m, std::size_t n, std::size_t nnz_per_column,
                                   std::uint64_t seed) {
    check_shape(m, n);
    if (nnz_per_column < 1 || nnz_per_column > m)
        throw std::invalid_argument("nnz_per_column = " + std::to_string(nnz_per_column) +
                                    " must lie in [1, m = " + std::to_string(m) + "]");
    Rng rng(seed);
    SensingMatrix a;
    a.kind = SensingKind::sparse_binary;
    a.seed = seed;
    a.nnz_per_column = nnz_per_column;
    a.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));

    std::vector<std::size_t> rows(m);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) rows[i] = i;
        // partial Fisher-Yates: first nnz entries are a uniform sample
        for (std::size_t i = 0; i < nnz_per_column; ++i) {
            const std::size_t pick = i + static_cast<std::size_t>(rng.next_below(m - i));
            std::swap(rows[i], rows[pick]);
            a.entries(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(j)) = 1.0;
        }
    }
    return a;
}

Measurement measure(const SensingMatrix& a, const SignalVector& x) {
    if (static_cast<std::size_t>(a.n()) != x.size())
        throw std::invalid_argument("dimension mismatch: sensing matrix has n = " +
                                    std::to_string(a.n()) + " columns, signal has " +
                                    std::to_string(x.size()) + " samples");
    const Eigen::Map<const Eigen::VectorXd> xv(x.samples.data(),
                                               static_cast<Eigen::Index>(x.size()));
    Measurement out;
    out.y = a.entries * xv;
    out.sensing_seed = a.seed;
    out.n_original = x.size();
    return out;
}

double compression_ratio(std::size_t m, std::size_t n) {
    check_shape(m, n);
    return static_cast<double>(m) / static_cast<double>(n);
}

}  // namespace spikecs

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "spikecs/signal.hpp"

namespace spikecs {

enum class SensingKind { gaussian, sparse_binary };

SensingKind parse_sensing_kind(const std::string& name);
std::string sensing_kind_name(SensingKind kind);

/// M x N measurement operator, reproducible from (shape, seed).
struct SensingMatrix {
    Eigen::MatrixXd entries;
    SensingKind kind = SensingKind::gaussian;
    std::uint64_t seed = 0;
    std::size_t nnz_per_column = 0;  // sparse_binary only

    Eigen::Index m() const { return entries.rows(); }
    Eigen::Index n() const { return entries.cols(); }
};

/// Compressed observation y = A x.
struct Measurement {
    Eigen::VectorXd y;
    std::uint64_t sensing_seed = 0;
    std::size_t n_original = 0;
};

/// i.i.d. N(0, 1/m) entries; m = n allowed for the CR = 1 case.
SensingMatrix gaussian_matrix(std::size_t m, std::size_t n, std::uint64_t seed);

/// Per column, nnz_per_column distinct rows chosen uniformly are set to 1.
SensingMatrix sparse_binary_matrix(std::size_t m, std::size_t n, std::size_t nnz_per_column,
                                   std::uint64_t seed);

Measurement measure(const SensingMatrix& a, const SignalVector& x);

/// m / n; 1 means no compression.
double compression_ratio(std::size_t m, std::size_t n);

}  // namespace spikecs

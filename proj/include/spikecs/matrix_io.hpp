#pragma once

#include <filesystem>

#include <Eigen/Core>

namespace spikecs {

/// One row of comma-separated values per matrix row, full precision.
/// Used to export dictionaries and sensing matrices for fixture tests
/// against other implementations.
void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path);

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

}  // namespace spikecs

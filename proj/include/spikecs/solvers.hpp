#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "spikecs/dictionaries.hpp"
#include "spikecs/sensing.hpp"

namespace spikecs {

enum class SolverKind { bp_admm, bsbl_bo };

SolverKind parse_solver_kind(const std::string& name);
std::string solver_kind_name(SolverKind kind);

/// ADMM basis pursuit: minimize |s|_1 subject to |theta s - y|_2 <= epsilon,
/// with epsilon = 0 selecting the equality-constrained form.
struct BpConfig {
    double epsilon = 0.0;
    double rho = 1.0;
    int max_iter = 2000;
    double abs_tol = 1e-6;
    double rel_tol = 1e-4;
};

struct BsblConfig {
    std::size_t block_size = 8;
    bool learn_lambda = false;
    double lambda_init = 1e-8;  // scaled by mean(y^2)
    bool learn_correlation = true;
    double prune_gamma = 1e-4;
    int max_iter = 600;
    double tol = 1e-8;
    /// Test hook, called once per iteration with (iteration, gamma, mu).
    std::function<void(int, const Eigen::VectorXd&, const Eigen::VectorXd&)> observer;
};

using SolverConfig = std::variant<BpConfig, BsblConfig>;

struct BpSolution {
    Eigen::VectorXd coefficients;
    int iterations = 0;
    bool converged = false;
    Eigen::VectorXd dual;  // rho * u; subgradient estimate of |.|_1 at the solution
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

struct BsblSolution {
    Eigen::VectorXd coefficients;
    int iterations = 0;
    bool converged = false;
    Eigen::VectorXd gamma;  // final block variances, padded length / block_size
};

struct SolverDivergedError : std::runtime_error {
    SolverDivergedError(const std::string& what, int iteration)
        : std::runtime_error(what + " at iteration " + std::to_string(iteration)),
          iteration(iteration) {}
    int iteration;
};

BpSolution solve_bp(const Eigen::VectorXd& y, const Eigen::MatrixXd& theta, const BpConfig& cfg);

BsblSolution solve_bsbl_bo(const Eigen::VectorXd& y, const Eigen::MatrixXd& theta,
                           const BsblConfig& cfg);

struct ReconstructionResult {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd signal_hat;  // = dictionary.atoms * coefficients
    int iterations = 0;
    double runtime_s = 0.0;
    bool converged = false;
    SolverKind solver = SolverKind::bp_admm;
};

/// Full pipeline step: theta = A * D, solve, map back to signal space.
/// Wall time is measured around the solver call only.
ReconstructionResult reconstruct(const Measurement& y, const SensingMatrix& a,
                                 const DictionaryMatrix& d, const SolverConfig& cfg);

}  // namespace spikecs

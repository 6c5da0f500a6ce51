#include "spikecs/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace spikecs {

SolverKind parse_solver_kind(const std::string& name) {
    if (name == "bp_admm") return SolverKind::bp_admm;
    if (name == "bsbl_bo") return SolverKind::bsbl_bo;
    throw std::invalid_argument("unknown solver \"" + name + "\" (expected bp_admm or bsbl_bo)");
}

std::string solver_kind_name(SolverKind kind) {
    return kind == SolverKind::bp_admm ? "bp_admm" : "bsbl_bo";
}

namespace {

void check_finite(const Eigen::VectorXd& y, const Eigen::MatrixXd& theta) {
    if (!y.allFinite()) throw std::invalid_argument("measurement vector contains non-finite values");
    if (!theta.allFinite()) throw std::invalid_argument("system matrix contains non-finite values");
    if (theta.rows() != y.size())
        throw std::invalid_argument("system matrix has " + std::to_string(theta.rows()) +
                                    " rows but measurement has " + std::to_string(y.size()) +
                                    " entries");
}

/// Cholesky with escalating diagonal jitter; singular inputs are worked
/// around rather than reported.
Eigen::LLT<Eigen::MatrixXd> robust_llt(Eigen::MatrixXd g, double relative_jitter) {
    const Eigen::Index m = g.rows();
    double jitter = relative_jitter * std::max(g.trace() / static_cast<double>(m), 1e-300);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    for (int attempt = 0; attempt < 60 && llt.info() != Eigen::Success; ++attempt) {
        g.diagonal().array() += jitter;
        jitter *= 100.0;
        llt.compute(g);
    }
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("cholesky factorization failed despite jitter");
    return llt;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double kappa) {
    return v.unaryExpr([kappa](double x) {
        if (x > kappa) return x - kappa;
        if (x < -kappa) return x + kappa;
        return 0.0;
    });
}

BpSolution solve_bp_equality(const Eigen::VectorXd& y, const Eigen::MatrixXd& theta,
                             const BpConfig& cfg) {
    const Eigen::Index k = theta.cols();
    const auto llt = robust_llt(theta * theta.transpose(), 1e-12);
    const Eigen::VectorXd particular = theta.transpose() * llt.solve(y);

    const auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return v - theta.transpose() * llt.solve(theta * v) + particular;
    };

    Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(k);

    BpSolution sol;
    const double sqrt_k = std::sqrt(static_cast<double>(k));
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        x = project(z - u);
        const Eigen::VectorXd z_old = z;
        z = soft_threshold(x + u, 1.0 / cfg.rho);
        u += x - z;

        sol.iterations = iter;
        sol.primal_residual = (x - z).norm();
        sol.dual_residual = cfg.rho * (z - z_old).norm();
        const double eps_pri = sqrt_k * cfg.abs_tol + cfg.rel_tol * std::max(x.norm(), z.norm());
        const double eps_dual = sqrt_k * cfg.abs_tol + cfg.rel_tol * cfg.rho * u.norm();
        if (sol.primal_residual <= eps_pri && sol.dual_residual <= eps_dual) {
            sol.converged = true;
            break;
        }
    }
    sol.coefficients = x;  // the projected iterate satisfies theta x = y
    sol.dual = cfg.rho * u;
    if (!sol.coefficients.allFinite())
        throw SolverDivergedError("basis pursuit produced a non-finite iterate", sol.iterations);
    return sol;
}

BpSolution solve_bp_denoising(const Eigen::VectorXd& y, const Eigen::MatrixXd& theta,
                              const BpConfig& cfg) {
    const Eigen::Index k = theta.cols();
    const Eigen::Index m = theta.rows();
    Eigen::MatrixXd gram = theta * theta.transpose();
    const auto llt_g = robust_llt(gram, 1e-12);
    gram.diagonal().array() += 1.0;
    const auto llt_ig = robust_llt(gram, 1e-12);

    // Woodbury solve of (I + theta' theta) s = rhs
    const auto solve_normal = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
        return rhs - theta.transpose() * llt_ig.solve(theta * rhs);
    };

    Eigen::VectorXd s = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);

    BpSolution sol;
    const double sqrt_km = std::sqrt(static_cast<double>(k + m));
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        s = solve_normal((z - u) + theta.transpose() * (y + w - v));
        const Eigen::VectorXd residual = theta * s - y;
        const Eigen::VectorXd z_old = z;
        const Eigen::VectorXd w_old = w;
        z = soft_threshold(s + u, 1.0 / cfg.rho);
        Eigen::VectorXd zeta = residual + v;
        const double zeta_norm = zeta.norm();
        w = zeta_norm > cfg.epsilon && zeta_norm > 0.0 ? (cfg.epsilon / zeta_norm) * zeta : zeta;
        u += s - z;
        v += residual - w;

        sol.iterations = iter;
        const double r1 = (s - z).norm();
        const double r2 = (residual - w).norm();
        sol.primal_residual = std::hypot(r1, r2);
        sol.dual_residual = cfg.rho * ((z - z_old) + theta.transpose() * (w - w_old)).norm();
        const double scale =
            std::max({std::hypot(s.norm(), (theta * s).norm()), std::hypot(z.norm(), (w + y).norm()),
                      y.norm()});
        const double eps_pri = sqrt_km * cfg.abs_tol + cfg.rel_tol * scale;
        const double eps_dual = std::sqrt(static_cast<double>(k)) * cfg.abs_tol +
                                cfg.rel_tol * cfg.rho * (u + theta.transpose() * v).norm();
        if (sol.primal_residual <= eps_pri && sol.dual_residual <= eps_dual) {
            sol.converged = true;
            break;
        }
    }

    // trim back onto the feasible tube if the split left us outside it
    Eigen::VectorXd residual = theta * s - y;
    const double res_norm = residual.norm();
    if (res_norm > cfg.epsilon && res_norm > 0.0) {
        const double shrink = cfg.epsilon / res_norm - 1.0;
        s += theta.transpose() * llt_g.solve(shrink * residual);
    }
    sol.coefficients = s;
    sol.dual = cfg.rho * u;
    if (!sol.coefficients.allFinite())
        throw SolverDivergedError("basis pursuit denoising produced a non-finite iterate",
                                  sol.iterations);
    return sol;
}

}  // namespace

BpSolution solve_bp(const Eigen::VectorXd& y, const Eigen::MatrixXd& theta, const BpConfig& cfg) {
    check_finite(y, theta);
    if (cfg.epsilon < 0.0) throw std::invalid_argument("bp epsilon must be >= 0");
    if (!(cfg.rho > 0.0)) throw std::invalid_argument("bp rho must be positive");
    if (cfg.max_iter < 1) throw std::invalid_argument("bp max_iter must be >= 1");
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0))
        throw std::invalid_argument("bp tolerances must be positive");
    return cfg.epsilon == 0.0 ? solve_bp_equality(y, theta, cfg) : solve_bp_denoising(y, theta, cfg);
}

namespace {

Eigen::MatrixXd ar1_toeplitz(std::size_t b, double r) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b));
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = std::pow(r, std::abs(i - j));
    return out;
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    return es.eigenvectors() *
           es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

}  // namespace

BsblSolution solve_bsbl_bo(const Eigen::VectorXd& y, const Eigen::MatrixXd& theta,
                           const BsblConfig& cfg) {
    check_finite(y, theta);
    if (cfg.block_size < 1) throw std::invalid_argument("bsbl block_size must be >= 1");
    if (!(cfg.prune_gamma > 0.0) || !(cfg.prune_gamma < 1.0))
        throw std::invalid_argument("bsbl prune_gamma must lie in (0, 1)");
    if (cfg.max_iter < 1) throw std::invalid_argument("bsbl max_iter must be >= 1");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("bsbl tol must be positive");
    if (!(cfg.lambda_init > 0.0)) throw std::invalid_argument("bsbl lambda_init must be positive");

    const Eigen::Index m = theta.rows();
    const Eigen::Index k0 = theta.cols();
    const auto b = static_cast<Eigen::Index>(cfg.block_size);
    const Eigen::Index blocks = (k0 + b - 1) / b;
    const Eigen::Index kp = blocks * b;

    // zero-pad so the block partition is exact; padded coefficients stay zero
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(m, kp);
    phi.leftCols(k0) = theta;

    double lambda = cfg.lambda_init * y.squaredNorm() / static_cast<double>(m);
    Eigen::VectorXd gamma = Eigen::VectorXd::Ones(blocks);
    std::vector<bool> pruned(static_cast<std::size_t>(blocks), false);
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(b, b);

    Eigen::VectorXd mu = Eigen::VectorXd::Zero(kp);
    Eigen::VectorXd mu_prev = Eigen::VectorXd::Zero(kp);

    BsblSolution sol;
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        sol.iterations = iter;

        std::vector<Eigen::Index> active;
        for (Eigen::Index i = 0; i < blocks; ++i)
            if (!pruned[static_cast<std::size_t>(i)] && gamma(i) > 0.0) active.push_back(i);
        if (active.empty()) {
            mu.setZero();
            sol.converged = true;
            break;
        }

        Eigen::MatrixXd c = lambda * Eigen::MatrixXd::Identity(m, m);
        for (Eigen::Index i : active) {
            const auto phi_i = phi.middleCols(i * b, b);
            c.noalias() += gamma(i) * (phi_i * corr * phi_i.transpose());
        }
        const auto llt = robust_llt(c, 1e-10);
        const Eigen::VectorXd cy = llt.solve(y);

        mu.setZero();
        for (Eigen::Index i : active) {
            const auto phi_i = phi.middleCols(i * b, b);
            mu.segment(i * b, b) = gamma(i) * (corr * (phi_i.transpose() * cy));
        }
        if (!mu.allFinite())
            throw SolverDivergedError("bsbl posterior mean became non-finite", iter);
        if (cfg.observer) cfg.observer(iter, gamma, mu);

        const double delta = (mu - mu_prev).cwiseAbs().maxCoeff();
        mu_prev = mu;
        if (delta < cfg.tol) {
            sol.converged = true;
            break;
        }

        const Eigen::MatrixXd corr_sqrt = symmetric_sqrt(corr);
        double residual_scale = 0.0;
        for (Eigen::Index i : active) {
            const auto phi_i = phi.middleCols(i * b, b);
            const Eigen::VectorXd q_i = phi_i.transpose() * cy;
            const Eigen::MatrixXd w_i = llt.solve(phi_i);
            const double denom_sq = (phi_i.transpose() * w_i).cwiseProduct(corr).sum();
            residual_scale += gamma(i) * denom_sq;
            if (denom_sq <= 0.0 || !std::isfinite(denom_sq)) {
                gamma(i) = 0.0;
                pruned[static_cast<std::size_t>(i)] = true;
                continue;
            }
            gamma(i) *= (corr_sqrt * q_i).norm() / std::sqrt(denom_sq);
        }

        if (cfg.learn_lambda) {
            lambda = ((y - phi * mu).squaredNorm() + lambda * residual_scale) /
                     static_cast<double>(m);
        }

        if (cfg.learn_correlation && b > 1) {
            double num = 0.0, den = 0.0;
            for (Eigen::Index i : active) {
                const auto block = mu.segment(i * b, b);
                for (Eigen::Index j = 0; j + 1 < b; ++j) num += block(j) * block(j + 1);
                den += block.squaredNorm();
            }
            const double r = den > 0.0 ? std::clamp(num / den, -0.99, 0.99) : 0.0;
            corr = ar1_toeplitz(cfg.block_size, r);
        }

        const double gamma_max = gamma.maxCoeff();
        for (Eigen::Index i : active) {
            if (gamma(i) < cfg.prune_gamma * gamma_max) {
                gamma(i) = 0.0;
                pruned[static_cast<std::size_t>(i)] = true;
            }
        }
    }

    // zero out anything pruned after the last posterior update
    for (Eigen::Index i = 0; i < blocks; ++i)
        if (pruned[static_cast<std::size_t>(i)]) mu.segment(i * b, b).setZero();

    sol.coefficients = mu.head(k0);
    sol.gamma = gamma;
    return sol;
}

ReconstructionResult reconstruct(const Measurement& y, const SensingMatrix& a,
                                 const DictionaryMatrix& d, const SolverConfig& cfg) {
    if (a.n() != d.n())
        throw std::invalid_argument("sensing matrix n = " + std::to_string(a.n()) +
                                    " does not match dictionary n = " + std::to_string(d.n()));
    if (y.y.size() != a.m())
        throw std::invalid_argument("measurement length " + std::to_string(y.y.size()) +
                                    " does not match sensing matrix m = " + std::to_string(a.m()));

    const Eigen::MatrixXd theta = a.entries * d.atoms;

    ReconstructionResult result;
    const auto start = std::chrono::steady_clock::now();
    if (std::holds_alternative<BpConfig>(cfg)) {
        BpSolution s = solve_bp(y.y, theta, std::get<BpConfig>(cfg));
        result.coefficients = std::move(s.coefficients);
        result.iterations = s.iterations;
        result.converged = s.converged;
        result.solver = SolverKind::bp_admm;
    } else {
        BsblSolution s = solve_bsbl_bo(y.y, theta, std::get<BsblConfig>(cfg));
        result.coefficients = std::move(s.coefficients);
        result.iterations = s.iterations;
        result.converged = s.converged;
        result.solver = SolverKind::bsbl_bo;
    }
    const auto stop = std::chrono::steady_clock::now();
    result.runtime_s = std::chrono::duration<double>(stop - start).count();
    result.signal_hat = d.atoms * result.coefficients;
    return result;
}

}  // namespace spikecs

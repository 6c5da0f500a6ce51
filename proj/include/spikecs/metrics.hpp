#pragma once

#include <optional>

#include <Eigen/Core>

#include "spikecs/signal.hpp"

namespace spikecs {

/// Reconstruction fidelity caps at this value instead of +inf so reports
/// stay serializable.
inline constexpr double kSnrCapDb = 300.0;

struct QualityReport {
    double snr_db = 0.0;
    double psnr_db = 0.0;
    std::optional<double> spike_snr_db;
    double cr = 1.0;
    double runtime_s = 0.0;
};

/// 20*log10(|x| / |x - xhat|), capped at 300 dB.
double snr_db(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat);

/// 10*log10(max_j x_j^2 / MSE), MSE = |x - xhat|^2 / N, capped at 300 dB.
double psnr_db(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat);

/// snr_db restricted to the window [center - half_width, center + half_width)
/// clipped to [0, N).
double spike_snr_db(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat,
                    const SpikeWindow& window);

}  // namespace spikecs

#include "spikecs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spikecs {

namespace {

void check_pair(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat) {
    if (x.size() != xhat.size())
        throw std::invalid_argument("metric inputs differ in length: " + std::to_string(x.size()) +
                                    " vs " + std::to_string(xhat.size()));
    if (x.size() == 0) throw std::invalid_argument("metric inputs are empty");
    if (x.isZero(0.0)) throw std::invalid_argument("reference signal is identically zero");
}

}  // namespace

double snr_db(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat) {
    check_pair(x, xhat);
    const double signal_norm = x.norm();
    const double err_norm = (x - xhat).norm();
    if (err_norm < 1e-15 * signal_norm) return kSnrCapDb;
    return std::min(kSnrCapDb, 20.0 * std::log10(signal_norm / err_norm));
}

double psnr_db(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat) {
    check_pair(x, xhat);
    const double err_norm = (x - xhat).norm();
    if (err_norm < 1e-15 * x.norm()) return kSnrCapDb;
    const double peak_sq = x.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff();
    const double mse = err_norm * err_norm / static_cast<double>(x.size());
    return std::min(kSnrCapDb, 10.0 * std::log10(peak_sq / mse));
}

double spike_snr_db(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat,
                    const SpikeWindow& window) {
    if (x.size() != xhat.size())
        throw std::invalid_argument("metric inputs differ in length");
    if (window.half_width <= 0) throw std::invalid_argument("window half_width must be positive");
    const std::ptrdiff_t n = x.size();
    const std::ptrdiff_t begin = std::clamp<std::ptrdiff_t>(window.center_index - window.half_width, 0, n);
    const std::ptrdiff_t end = std::clamp<std::ptrdiff_t>(window.center_index + window.half_width, 0, n);
    if (begin >= end)
        throw std::invalid_argument("spike window [" + std::to_string(begin) + ", " +
                                    std::to_string(end) + ") is empty for length " + std::to_string(n));
    return snr_db(x.segment(begin, end - begin), xhat.segment(begin, end - begin));
}

}  // namespace spikecs

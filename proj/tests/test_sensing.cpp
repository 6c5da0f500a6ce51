#include <doctest.h>

#include <filesystem>

#include "spikecs/matrix_io.hpp"
#include "spikecs/rng.hpp"
#include "spikecs/sensing.hpp"

using namespace spikecs;

TEST_CASE("gaussian matrix shape, determinism, scaling") {
    const SensingMatrix a = gaussian_matrix(128, 256, 7);
    CHECK(a.m() == 128);
    CHECK(a.n() == 256);
    CHECK(compression_ratio(128, 256) == 0.5);

    const SensingMatrix b = gaussian_matrix(128, 256, 7);
    CHECK(a.entries == b.entries);
    const SensingMatrix c = gaussian_matrix(128, 256, 8);
    CHECK(a.entries != c.entries);

    CHECK_THROWS_AS(gaussian_matrix(300, 256, 0), std::invalid_argument);
    CHECK_NOTHROW(gaussian_matrix(256, 256, 0));
}

TEST_CASE("gaussian row norms concentrate near 1") {
    // band frozen from a 10^4-seed study at m = 128
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SensingMatrix a = gaussian_matrix(128, 256, seed);
        for (Eigen::Index i = 0; i < a.m(); ++i) {
            const double norm = a.entries.row(i).norm();
            REQUIRE(norm > 0.7);
            REQUIRE(norm < 1.3);
        }
    }
}

TEST_CASE("gaussian column norms average to 1") {
    const SensingMatrix a = gaussian_matrix(128, 256, 3);
    double mean_sq = 0.0;
    for (Eigen::Index j = 0; j < a.n(); ++j) mean_sq += a.entries.col(j).squaredNorm();
    mean_sq /= static_cast<double>(a.n());
    CHECK(mean_sq > 0.9);
    CHECK(mean_sq < 1.1);
}

TEST_CASE("sparse binary matrix") {
    const SensingMatrix a = sparse_binary_matrix(128, 256, 4, 9);
    for (Eigen::Index j = 0; j < a.n(); ++j) {
        CHECK(a.entries.col(j).sum() == 4.0);
        for (Eigen::Index i = 0; i < a.m(); ++i) {
            const double v = a.entries(i, j);
            REQUIRE((v == 0.0 || v == 1.0));
        }
    }
    CHECK(sparse_binary_matrix(128, 256, 4, 9).entries == a.entries);

    const SensingMatrix saturated = sparse_binary_matrix(8, 16, 8, 1);
    CHECK(saturated.entries == Eigen::MatrixXd::Ones(8, 16));

    CHECK_THROWS_AS(sparse_binary_matrix(8, 16, 9, 0), std::invalid_argument);
    CHECK_THROWS_AS(sparse_binary_matrix(8, 16, 0, 0), std::invalid_argument);
}

TEST_CASE("measure") {
    SignalVector x;
    x.samples.assign(256, 0.0);
    const SensingMatrix a = gaussian_matrix(128, 256, 5);
    CHECK(measure(a, x).y.isZero(0.0));

    SignalVector ramp;
    ramp.samples.resize(64);
    for (std::size_t i = 0; i < 64; ++i) ramp.samples[i] = static_cast<double>(i) - 31.5;

    SensingMatrix identity;
    identity.entries = Eigen::MatrixXd::Identity(64, 64);
    identity.kind = SensingKind::gaussian;
    const Measurement y = measure(identity, ramp);
    for (Eigen::Index i = 0; i < 64; ++i) CHECK(y.y(i) == ramp.samples[static_cast<std::size_t>(i)]);

    SignalVector wrong;
    wrong.samples.assign(100, 1.0);
    CHECK_THROWS_WITH_AS(measure(a, wrong), doctest::Contains("100"), std::invalid_argument);
}

TEST_CASE("measure is exactly linear") {
    const SensingMatrix a = gaussian_matrix(32, 64, 21);
    Rng rng(4);
    SignalVector x, z, combo;
    x.samples.resize(64);
    z.samples.resize(64);
    combo.samples.resize(64);
    const double alpha = 2.25, beta = -0.5;  // exactly representable
    for (std::size_t i = 0; i < 64; ++i) {
        x.samples[i] = rng.next_gaussian();
        z.samples[i] = rng.next_gaussian();
        combo.samples[i] = alpha * x.samples[i] + beta * z.samples[i];
    }
    const Eigen::VectorXd lhs = measure(a, combo).y;
    const Eigen::VectorXd rhs = alpha * measure(a, x).y + beta * measure(a, z).y;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("compression ratio") {
    CHECK(compression_ratio(128, 256) == 0.5);
    CHECK(compression_ratio(256, 256) == 1.0);
    CHECK(compression_ratio(64, 256) == 0.25);
    CHECK_THROWS_AS(compression_ratio(300, 256), std::invalid_argument);
}

TEST_CASE("sensing matrix csv round-trip") {
    const SensingMatrix a = sparse_binary_matrix(16, 32, 3, 2);
    const auto path = std::filesystem::temp_directory_path() / "spikecs_sensing.csv";
    write_matrix_csv(a.entries, path);
    const Eigen::MatrixXd back = read_matrix_csv(path);
    CHECK(back == a.entries);
    std::filesystem::remove(path);
}

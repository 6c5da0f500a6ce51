#include <doctest.h>

#include <array>
#include <cmath>

#include "spikecs/rng.hpp"

using namespace spikecs;

TEST_CASE("rng determinism and stream separation") {
    Rng a(123), b(123), c(124);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    bool differs = false;
    Rng a2(123);
    for (int i = 0; i < 100; ++i) differs |= a2.next_u64() != c.next_u64();
    CHECK(differs);

    CHECK(derive_stream(1, 0) != derive_stream(1, 1));
    CHECK(derive_stream(1, 0) != derive_stream(2, 0));
    CHECK(derive_stream(1, 5) == derive_stream(1, 5));
}

TEST_CASE("rng uniform range and mean") {
    Rng rng(7);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / 20000.0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("rng gaussian moments") {
    Rng rng(11);
    const int n = 50000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.next_gaussian();
        sum += z;
        sum_sq += z * z;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("rng next_below stays in range and covers it") {
    Rng rng(3);
    std::array<int, 7> counts{};
    for (int i = 0; i < 7000; ++i) {
        const auto v = rng.next_below(7);
        REQUIRE(v < 7);
        ++counts[static_cast<std::size_t>(v)];
    }
    for (int count : counts) CHECK(count > 700);
}

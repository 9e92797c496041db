#include "bksvm/fwht.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace bksvm;

TEST_CASE("small transforms by hand") {
    std::vector<double> a{1, 0, 0, 0};
    fwht_inplace(a);
    CHECK(a == std::vector<double>{1, 1, 1, 1});
    std::vector<double> b{1, 1, 1, 1};
    fwht_inplace(b);
    CHECK(b == std::vector<double>{4, 0, 0, 0});
    std::vector<double> c{1, 2};
    fwht_inplace(c);
    CHECK(c == std::vector<double>{3, -1});
}

TEST_CASE("matches the explicit Hadamard matrix on integer inputs") {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<int> dist(-50, 50);
    for (std::size_t d = 2; d <= 32; d *= 2) {
        const auto h = oracle::hadamard(d);
        std::vector<double> x(d);
        for (auto& v : x) v = dist(gen);
        const auto expected = oracle::matvec(h, x);
        fwht_inplace(x);
        CHECK(x == expected);
    }
}

TEST_CASE("involution and norm scaling") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> dist;
    for (std::size_t d = 2; d <= 4096; d *= 2) {
        std::vector<double> x(d);
        for (auto& v : x) v = dist(gen);
        auto y = x;
        fwht_inplace(y);
        double nx = 0, ny = 0;
        for (std::size_t i = 0; i < d; ++i) {
            nx += x[i] * x[i];
            ny += y[i] * y[i];
        }
        CHECK(ny == doctest::Approx(nx * static_cast<double>(d)).epsilon(1e-12));
        fwht_inplace(y);
        for (std::size_t i = 0; i < d; ++i) {
            CHECK(std::abs(y[i] - static_cast<double>(d) * x[i]) <= 1e-9 * static_cast<double>(d) * (1 + std::abs(x[i])));
        }
    }
}

TEST_CASE("rejects lengths that are not a power of two >= 2") {
    std::vector<double> v3(3), v1(1), v0;
    CHECK_THROWS_AS(fwht_inplace(v3), std::invalid_argument);
    CHECK_THROWS_AS(fwht_inplace(v1), std::invalid_argument);
    CHECK_THROWS_AS(fwht_inplace(v0), std::invalid_argument);
}

TEST_CASE("next_pow2_min2") {
    CHECK(next_pow2_min2(0) == 2);
    CHECK(next_pow2_min2(1) == 2);
    CHECK(next_pow2_min2(2) == 2);
    CHECK(next_pow2_min2(3) == 4);
    CHECK(next_pow2_min2(256) == 256);
    CHECK(next_pow2_min2(257) == 512);
}

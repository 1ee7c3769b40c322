#include "gu/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

TEST_CASE("identical seeds give identical streams") {
    gu::Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derive_seed separates stages") {
    std::uint64_t s1 = gu::derive_seed(7, "train");
    std::uint64_t s2 = gu::derive_seed(7, "request");
    std::uint64_t s3 = gu::derive_seed(8, "train");
    CHECK(s1 != s2);
    CHECK(s1 != s3);
    CHECK(s1 == gu::derive_seed(7, "train"));
}

TEST_CASE("uniform_int stays in range") {
    gu::Rng rng(3);
    for (int i = 0; i < 1000; ++i) CHECK(rng.uniform_int(17) < 17);
}

TEST_CASE("normal draws have sane moments") {
    gu::Rng rng(11);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double draw = rng.normal();
        sum += draw;
        sum_sq += draw * draw;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(std::abs(sum_sq / n - 1.0) < 0.05);
}

TEST_CASE("sample_without_replacement yields distinct indices") {
    gu::Rng rng(5);
    auto sample = rng.sample_without_replacement(50, 20);
    std::set<std::size_t> unique(sample.begin(), sample.end());
    CHECK(unique.size() == 20);
    for (std::size_t idx : sample) CHECK(idx < 50);
}

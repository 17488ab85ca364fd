#include <algorithm>
#include <set>

#include "doctest.h"
#include "lockleak/rng.hpp"

using namespace lockleak;

TEST_CASE("same seed gives the same stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("different seeds diverge") {
    Rng a(1), b(2);
    bool differ = false;
    for (int i = 0; i < 8 && !differ; ++i) differ = a.next() != b.next();
    CHECK(differ);
}

TEST_CASE("split streams are independent of the parent and each other") {
    Rng base(7);
    Rng s1 = base.split("alpha");
    Rng s2 = base.split("beta");
    Rng s1again = base.split("alpha");
    CHECK(s1.next() == s1again.next());
    bool differ = false;
    for (int i = 0; i < 8 && !differ; ++i) differ = s1.next() != s2.next();
    CHECK(differ);
    // splitting does not advance the parent
    Rng fresh(7);
    CHECK(base.next() == fresh.next());
}

TEST_CASE("below stays in range and covers small bounds") {
    Rng rng(3);
    std::set<uint64_t> seen;
    for (int i = 0; i < 200; ++i) {
        uint64_t v = rng.below(5);
        CHECK(v < 5);
        seen.insert(v);
    }
    CHECK(seen.size() == 5);
}

TEST_CASE("unit is in [0, 1)") {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("shuffle permutes in place") {
    Rng rng(11);
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<int> orig = v;
    rng.shuffle(v);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == orig);
}

TEST_CASE("sample_indices returns k distinct ascending indices below n") {
    Rng rng(13);
    for (uint32_t n : {10u, 100u, 1000u}) {
        for (uint32_t k : {1u, 3u, n / 2, n}) {
            std::vector<uint32_t> s = rng.sample_indices(n, k);
            REQUIRE(s.size() == k);
            for (size_t i = 0; i < s.size(); ++i) {
                CHECK(s[i] < n);
                if (i) CHECK(s[i] > s[i - 1]);
            }
        }
    }
}

TEST_CASE("sample_indices eventually hits every index") {
    Rng rng(17);
    std::set<uint32_t> seen;
    for (int rep = 0; rep < 200; ++rep)
        for (uint32_t i : rng.sample_indices(8, 3)) seen.insert(i);
    CHECK(seen.size() == 8);
}

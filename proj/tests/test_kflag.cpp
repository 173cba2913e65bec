#include <doctest.h>

#include <algorithm>
#include <set>

#include "om/clan.hpp"
#include "om/error.hpp"
#include "om/kflag.hpp"

using namespace om;

TEST_CASE("the six orbits on Gr(2,4) under GL(2)xGL(2)") {
    const auto y = kflag::build_kflag(2, 2, {2});
    REQUIRE(y.orbits.size() == 6);
    std::vector<long long> dims;
    for (const auto& o : y.orbits) dims.push_back(o.dimension);
    CHECK(dims == std::vector<long long>{0, 0, 2, 3, 3, 4});
    // exactly one open orbit, two closed points of the two coordinate planes
    CHECK(y.dim_K() == 8);
    // signatures identify orbits uniquely (build_kflag would throw otherwise)
    std::set<std::string> sig;
    for (const auto& o : y.orbits) CHECK(sig.insert(o.signature.str()).second);
}

TEST_CASE("full flag variety: orbit count and dimensions equal the clan picture") {
    for (const auto [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}, {3, 1}}) {
        const int n = p + q;
        std::vector<int> steps;
        for (int d = 1; d < n; ++d) steps.push_back(d);
        const auto y = kflag::build_kflag(p, q, steps);
        CAPTURE(p);
        CAPTURE(q);
        CHECK(y.orbits.size() == y.block.clans.size());
        for (const auto& o : y.orbits) {
            // geometric dimension == combinatorial length + closed-orbit dim
            const long long base = p * (p - 1) / 2 + q * (q - 1) / 2;
            CHECK(o.dimension == clan::length(o.lift) + base);
            CHECK(o.dimension == clan::dimension(o.lift, p, q));
        }
    }
}

TEST_CASE("base points land in their own orbit") {
    const auto y = kflag::build_kflag(2, 2, {1, 3});
    for (const auto& o : y.orbits) {
        CHECK(kflag::identify_orbit(y, o.base_point) == o.id);
        // and the signature recomputes identically
        CHECK(kflag::flag_signature(o.base_point, y.theta) == o.signature);
    }
}

TEST_CASE("identify_orbit validates its input") {
    const auto y = kflag::build_kflag(2, 2, {2});
    kflag::PartialFlag wrong;
    wrong.steps = {1, 2};
    wrong.basis = MatQ::Identity(4, 2);
    CHECK_THROWS_AS((void)kflag::identify_orbit(y, wrong), Error);
}

TEST_CASE("closure order: reflexive, graded by dimension, one open orbit") {
    for (const auto [p, q] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}}) {
        const int n = p + q;
        for (const auto& steps :
             std::vector<std::vector<int>>{{1}, {n - 1}, {1, n - 1}}) {
            const auto y = kflag::build_kflag(p, q, steps);
            int open = 0;
            for (const auto& a : y.orbits) {
                CHECK(kflag::korbit_closure_leq(y, a.id, a.id));
                bool maximal = true;
                for (const auto& b : y.orbits) {
                    if (kflag::korbit_closure_leq(y, a.id, b.id) && a.id != b.id) {
                        CHECK(a.dimension < b.dimension);
                        maximal = false;
                    }
                }
                if (maximal) ++open;
            }
            CHECK(open == 1);
        }
    }
}

TEST_CASE("partial flag polynomials: diagonal one, zero off closure") {
    const auto y = kflag::build_kflag(2, 2, {2});
    for (const auto& a : y.orbits)
        for (const auto& b : y.orbits) {
            const Poly P = kflag::partial_flag_polynomial(y, a.id, b.id);
            if (a.id == b.id) CHECK(P.str() == "1");
            if (!kflag::korbit_closure_leq(y, a.id, b.id)) CHECK(P.is_zero());
        }
}

TEST_CASE("theta patterns other than the default are honored") {
    // interleaved signature (+,-,+,-): V+ = span(e0,e2)
    const std::vector<int> theta = {1, -1, 1, -1};
    const auto y = kflag::build_kflag(2, 2, {2}, theta);
    CHECK(y.orbits.size() == 6);
    std::vector<long long> dims;
    for (const auto& o : y.orbits) dims.push_back(o.dimension);
    CHECK(dims == std::vector<long long>{0, 0, 2, 3, 3, 4});
}

TEST_CASE("invalid construction data is rejected") {
    CHECK_THROWS_AS((void)kflag::build_kflag(2, 2, {0}), Error);
    CHECK_THROWS_AS((void)kflag::build_kflag(2, 2, {4}), Error);
    CHECK_THROWS_AS((void)kflag::build_kflag(2, 2, {3, 1}), Error);
    CHECK_THROWS_AS((void)kflag::build_kflag(2, 2, {2}, {1, 1, 1, 1}), Error);
}

TEST_CASE("retained positions complement the step set") {
    CHECK(kflag::retained_positions(4, {2}) == std::vector<int>{0, 2});
    CHECK(kflag::retained_positions(4, {1, 3}) == std::vector<int>{1});
    CHECK(kflag::retained_positions(4, {1, 2, 3}).empty());
    CHECK(kflag::retained_positions(5, {2}) == std::vector<int>{0, 2, 3});
}

#include <doctest.h>

#include <set>
#include <vector>

#include "om/error.hpp"
#include "om/lorbits.hpp"
#include "om/rootdata.hpp"
#include "support/oracles.hpp"

using namespace om;
using rootdata::CartanType;

namespace {

rootdata::Grading gl_grading(int n, std::vector<long long> diag) {
    std::vector<Rat> lambda;
    for (long long v : diag) lambda.emplace_back(v);
    return rootdata::grade_by_lambda(rootdata::build_root_system(CartanType::GL, n), lambda);
}

std::vector<rootdata::Grading> all_classes(int n) {
    std::vector<rootdata::Grading> out;
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rest) -> void {
        if (rest == 0) {
            comps.push_back(cur);
            return;
        }
        for (int part = 1; part <= rest; ++part) {
            cur.push_back(part);
            self(self, rest - part);
            cur.pop_back();
        }
    };
    rec(rec, n);
    for (const auto& comp : comps) {
        const int k = static_cast<int>(comp.size());
        for (int mask = 0; mask < (1 << std::max(0, k - 1)); ++mask) {
            std::vector<long long> val(static_cast<std::size_t>(k), 0);
            for (int i = k - 2; i >= 0; --i)
                val[static_cast<std::size_t>(i)] =
                    val[static_cast<std::size_t>(i) + 1] + ((mask >> i) & 1 ? 2 : 1);
            std::vector<long long> diag;
            for (int b = 0; b < k; ++b)
                for (int rep = 0; rep < comp[static_cast<std::size_t>(b)]; ++rep)
                    diag.push_back(val[static_cast<std::size_t>(b)]);
            out.push_back(gl_grading(n, diag));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("two-block grading: orbits are matrix ranks") {
    const auto g = gl_grading(4, {1, 1, 0, 0});
    const auto orbits = lorbits::enumerate_L_orbits(g);
    REQUIRE(orbits.size() == 3);
    CHECK(orbits[0].dimension == 0);
    CHECK(orbits[1].dimension == 3);
    CHECK(orbits[2].dimension == 4);
    for (const auto& o : orbits) CHECK(o.component_group_order == 1);
    // closure order is the rank order
    CHECK(lorbits::closure_leq(orbits[0], orbits[1]));
    CHECK(lorbits::closure_leq(orbits[1], orbits[2]));
    CHECK_FALSE(lorbits::closure_leq(orbits[2], orbits[1]));
}

TEST_CASE("orbit counts match the multisegment oracle on every class, n <= 5") {
    for (int n = 1; n <= 5; ++n)
        for (const auto& g : all_classes(n)) {
            CAPTURE(n);
            const auto orbits = lorbits::enumerate_L_orbits(g);
            CHECK(static_cast<long long>(orbits.size()) == oracles::lorbit_count(g));
            // ids are positions, rank triangles are distinct
            std::set<std::vector<int>> seen;
            for (std::size_t i = 0; i < orbits.size(); ++i) {
                CHECK(orbits[i].id == static_cast<int>(i));
                CHECK(seen.insert(orbits[i].triangle.rank_vector()).second);
            }
        }
}

TEST_CASE("orbit dimensions match the interval-multiplicity oracle, n <= 5") {
    for (int n = 2; n <= 5; ++n)
        for (const auto& g : all_classes(n))
            for (const auto& o : lorbits::enumerate_L_orbits(g)) {
                CAPTURE(n);
                CHECK(o.dimension == oracles::quiver_orbit_dimension(g, o.triangle));
            }
}

TEST_CASE("representatives realize their rank triangle") {
    for (const auto& g : all_classes(4))
        for (const auto& o : lorbits::enumerate_L_orbits(g)) {
            CHECK(lorbits::rank_triangle_of(g, o.representative) == o.triangle);
            CHECK(lorbits::orbit_dimension(g, o.representative) == o.dimension);
            for (std::uint64_t seed : {7ull, 99ull}) {
                const auto r = lorbits::random_representative(g, o, seed);
                CHECK(lorbits::rank_triangle_of(g, r) == o.triangle);
            }
        }
}

TEST_CASE("closure order is a partial order refining dimension") {
    for (const auto& g : all_classes(4)) {
        const auto orbits = lorbits::enumerate_L_orbits(g);
        const std::size_t m = orbits.size();
        for (std::size_t a = 0; a < m; ++a) {
            CHECK(lorbits::closure_leq(orbits[a], orbits[a]));
            for (std::size_t b = 0; b < m; ++b) {
                const bool ab = lorbits::closure_leq(orbits[a], orbits[b]);
                if (ab && a != b) {
                    CHECK(orbits[a].dimension < orbits[b].dimension);
                    CHECK_FALSE(lorbits::closure_leq(orbits[b], orbits[a]));
                }
                for (std::size_t c = 0; c < m; ++c)
                    if (ab && lorbits::closure_leq(orbits[b], orbits[c]))
                        CHECK(lorbits::closure_leq(orbits[a], orbits[c]));
            }
        }
    }
}

TEST_CASE("closure on two chains is the product order") {
    // (1,1,0,0,2',1',1') style: two junction chains in one grading
    const auto g = gl_grading(5, {3, 2, 0, 0, -1});
    REQUIRE(g.junctions.size() == 2);  // chain {3,2} and chain {0,-1} split by the gap 2
    const auto orbits = lorbits::enumerate_L_orbits(g);
    CHECK(static_cast<long long>(orbits.size()) == oracles::lorbit_count(g));
    for (const auto& a : orbits)
        for (const auto& b : orbits) {
            bool per_chain = true;
            for (const auto& [key, rank] : a.triangle.r) {
                auto it = b.triangle.r.find(key);
                REQUIRE(it != b.triangle.r.end());
                if (rank > it->second) per_chain = false;
            }
            CHECK(lorbits::closure_leq(a, b) == per_chain);
        }
}

TEST_CASE("incomparable gradings are rejected") {
    const auto g1 = gl_grading(4, {1, 1, 0, 0});
    const auto g2 = gl_grading(4, {2, 1, 1, 0});
    const auto o1 = lorbits::enumerate_L_orbits(g1);
    const auto o2 = lorbits::enumerate_L_orbits(g2);
    CHECK_THROWS_AS((void)lorbits::closure_leq(o1[0], o2[0]), Error);
}

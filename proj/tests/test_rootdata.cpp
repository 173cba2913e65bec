#include <doctest.h>

#include <set>

#include "om/error.hpp"
#include "om/rootdata.hpp"
#include "support/oracles.hpp"

using namespace om;
using rootdata::CartanType;

TEST_CASE("root systems have the classified cardinalities") {
    const std::vector<std::pair<CartanType, int>> cases = {
        {CartanType::GL, 2}, {CartanType::GL, 5}, {CartanType::GL, 7}, {CartanType::A, 3},
        {CartanType::B, 2}, {CartanType::B, 4},  {CartanType::C, 3},  {CartanType::C, 6},
        {CartanType::D, 4}, {CartanType::D, 6},  {CartanType::G2, 2}, {CartanType::F4, 4},
        {CartanType::E6, 6},
    };
    for (const auto& [type, rank] : cases) {
        const auto rs = rootdata::build_root_system(type, rank);
        CAPTURE(rootdata::type_name(type));
        CAPTURE(rank);
        CHECK(static_cast<int>(rs.roots.size()) == oracles::root_count(type, rank));
        CHECK(2 * rs.n_positive == static_cast<int>(rs.roots.size()));
        // negatives mirror positives
        for (int i = 0; i < rs.n_positive; ++i)
            CHECK((rs.roots[static_cast<std::size_t>(i + rs.n_positive)] +
                   rs.roots[static_cast<std::size_t>(i)])
                      .isZero());
        // the first `rank` roots are the simple roots: in simple-root
        // coordinates each is a unit vector, and all rank of them appear
        std::set<int> axes;
        for (int i = 0; i < rs.rank; ++i) {
            CHECK(rs.roots[static_cast<std::size_t>(i)].sum() == 1);
            for (int j = 0; j < rs.rank; ++j)
                if (rs.roots[static_cast<std::size_t>(i)](j) == 1) axes.insert(j);
        }
        CHECK(static_cast<int>(axes.size()) == rs.rank);
    }
    CHECK_THROWS_AS((void)rootdata::build_root_system(CartanType::B, 1), Error);
    CHECK_THROWS_AS((void)rootdata::build_root_system(CartanType::GL, 0), Error);
}

TEST_CASE("gl gradings expose blocks, junctions, and symmetric eigenspaces") {
    const auto rs = rootdata::build_root_system(CartanType::GL, 4);
    const auto g = rootdata::grade_by_lambda(rs, {Rat(1), Rat(1), Rat(0), Rat(0)});
    CHECK(g.is_gl());
    CHECK(g.block_sizes == std::vector<int>{2, 2});
    CHECK(g.junctions == std::vector<int>{0});
    CHECK(g.dim_g(-1) == 4);
    CHECK(g.dim_g(0) == 8);
    CHECK(g.dim_g(1) == 4);
    CHECK(g.dim_g(-2) == 0);
    CHECK(g.two_step());
    CHECK(g.p == 2);  // two even entries on the shifted diagonal
    CHECK(g.q == 2);

    long long total = 0;
    for (const auto& [k, d] : g.eigenspace_dim) {
        total += d;
        CHECK(g.dim_g(k) == g.dim_g(-k));
    }
    CHECK(total == 16);  // all of gl(4), Cartan included in g(0)

    const auto g2 = rootdata::grade_by_lambda(
        rootdata::build_root_system(CartanType::GL, 3), {Rat(2), Rat(1), Rat(0)});
    CHECK(g2.block_sizes == std::vector<int>{1, 1, 1});
    CHECK(g2.junctions == std::vector<int>{0, 1});
    CHECK(g2.two_step());  // concentrated in |i| <= 2
    CHECK(g2.dim_g(-2) == 1);

    const auto g3 = rootdata::grade_by_lambda(
        rootdata::build_root_system(CartanType::GL, 4), {Rat(3), Rat(2), Rat(1), Rat(0)});
    CHECK_FALSE(g3.two_step());  // g(3) is the corner entry
    CHECK(g3.dim_g(3) == 1);
}

TEST_CASE("lambda validation: dominance and integrality") {
    const auto rs = rootdata::build_root_system(CartanType::GL, 3);
    try {
        (void)rootdata::grade_by_lambda(rs, {Rat(0), Rat(1), Rat(0)});
        CHECK_MESSAGE(false, "non-dominant lambda must throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonDominantLambda);
    }
    const auto b3 = rootdata::build_root_system(CartanType::B, 3);
    try {
        (void)rootdata::grade_by_lambda(b3, {Rat(1, 2), Rat(0), Rat(0)});
        CHECK_MESSAGE(false, "non-integral pairing must throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonIntegralLambda);
    }
    // half-integral lambda is fine when all pairings are integers
    const auto gl2 = rootdata::build_root_system(CartanType::GL, 2);
    const auto gh = rootdata::grade_by_lambda(gl2, {Rat(1, 2), Rat(-1, 2)});
    CHECK(gh.dim_g(-1) == 1);
}

TEST_CASE("parabolic family: abelian two-block case is a single full Levi") {
    const auto rs = rootdata::build_root_system(CartanType::GL, 4);
    const auto g = rootdata::grade_by_lambda(rs, {Rat(1), Rat(1), Rat(0), Rat(0)});
    const auto fam = rootdata::minimal_parabolic_family(g);
    REQUIRE(fam.status == rootdata::FamilyStatus::Valid);
    REQUIRE(fam.members.size() == 1);
    CHECK(fam.members[0] == std::vector<int>{0, 1, 2});
    // strict coverage: the member Levis partition g(-1)
    std::set<int> covered;
    for (const auto& roots : fam.covered)
        for (int r : roots) CHECK(covered.insert(r).second);
    CHECK(covered.size() == 4);
}

TEST_CASE("parabolic family: three-block chain splits into two members") {
    const auto rs = rootdata::build_root_system(CartanType::GL, 3);
    const auto g = rootdata::grade_by_lambda(rs, {Rat(2), Rat(1), Rat(0)});
    const auto fam = rootdata::minimal_parabolic_family(g);
    REQUIRE(fam.status == rootdata::FamilyStatus::Valid);
    REQUIRE(fam.members.size() == 2);
    std::set<int> covered;
    std::size_t total = 0;
    for (const auto& roots : fam.covered) {
        total += roots.size();
        for (int r : roots) covered.insert(r);
    }
    CHECK(covered.size() == total);          // disjoint
    CHECK(static_cast<long long>(total) == g.dim_g(-1));  // exhaustive
}

TEST_CASE("parabolic family honors strict coverage on every gl class, n <= 5") {
    for (int n = 1; n <= 5; ++n) {
        // canonical classes: compositions x gap patterns in {1,2}
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
        const auto rs = rootdata::build_root_system(CartanType::GL, n);
        for (const auto& comp : comps) {
            const int k = static_cast<int>(comp.size());
            for (int mask = 0; mask < (1 << std::max(0, k - 1)); ++mask) {
                std::vector<Rat> lambda;
                std::vector<long long> val(static_cast<std::size_t>(k), 0);
                for (int i = k - 2; i >= 0; --i)
                    val[static_cast<std::size_t>(i)] =
                        val[static_cast<std::size_t>(i) + 1] + ((mask >> i) & 1 ? 2 : 1);
                for (int b = 0; b < k; ++b)
                    for (int rep = 0; rep < comp[static_cast<std::size_t>(b)]; ++rep)
                        lambda.emplace_back(val[static_cast<std::size_t>(b)]);
                const auto g = rootdata::grade_by_lambda(rs, lambda);
                const auto fam = rootdata::minimal_parabolic_family(g);
                CAPTURE(n);
                CAPTURE(mask);
                REQUIRE(fam.status == rootdata::FamilyStatus::Valid);
                std::set<int> covered;
                long long total = 0;
                for (const auto& roots : fam.covered) {
                    total += static_cast<long long>(roots.size());
                    for (int r : roots) CHECK(covered.insert(r).second);
                }
                CHECK(total == g.dim_g(-1));
                CHECK(fam.grading_key == g.key());
            }
        }
    }
}

TEST_CASE("hypothesis checker rejects the exceptional cocharacters") {
    const auto f4 = rootdata::build_root_system(CartanType::F4, 4);
    const auto gf = rootdata::grade_by_lambda(f4, {Rat(0), Rat(1), Rat(0), Rat(0)});
    CHECK(rootdata::minimal_parabolic_family(gf).status ==
          rootdata::FamilyStatus::NoFamilyExists);

    const auto g2 = rootdata::build_root_system(CartanType::G2, 2);
    const auto gg = rootdata::grade_by_lambda(g2, {Rat(0), Rat(1)});
    CHECK(rootdata::minimal_parabolic_family(gg).status ==
          rootdata::FamilyStatus::NoFamilyExists);
}

TEST_CASE("a failed family search carries a diagnostic and recheck agrees") {
    const auto rs = rootdata::build_root_system(CartanType::B, 2);
    const auto g = rootdata::grade_by_lambda(rs, {Rat(0), Rat(1)});
    const auto fam = rootdata::minimal_parabolic_family(g);
    CHECK(fam.status == rootdata::FamilyStatus::NoFamilyExists);
    CHECK_FALSE(fam.diagnostic.empty());

    // re-check a hand-built family over a grading it does not belong to
    const auto gl = rootdata::grade_by_lambda(
        rootdata::build_root_system(CartanType::GL, 4), {Rat(1), Rat(1), Rat(0), Rat(0)});
    const auto good = rootdata::minimal_parabolic_family(gl);
    REQUIRE(good.status == rootdata::FamilyStatus::Valid);
    std::string diag;
    CHECK(rootdata::check_hypotheses(gl, good, &diag) == rootdata::FamilyStatus::Valid);
    try {
        (void)rootdata::check_hypotheses(g, good);
        CHECK_MESSAGE(false, "family from another grading must be rejected");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MismatchedGrading);
    }
}

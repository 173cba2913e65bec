#include <doctest.h>

#include <set>
#include <utility>
#include <vector>

#include "om/epsmap.hpp"
#include "om/error.hpp"
#include "om/kflag.hpp"
#include "om/linalg.hpp"
#include "om/lorbits.hpp"
#include "om/rootdata.hpp"

using namespace om;
using rootdata::CartanType;

namespace {

rootdata::Grading gl_grading(int n, std::vector<long long> diag) {
    std::vector<Rat> lambda;
    for (long long v : diag) lambda.emplace_back(v);
    return rootdata::grade_by_lambda(rootdata::build_root_system(CartanType::GL, n), lambda);
}

eps::EpsilonMap default_map(const rootdata::Grading& g,
                            eps::Mode mode = eps::Mode::Truncated) {
    return eps::make_epsilon_map(g, rootdata::minimal_parabolic_family(g), mode);
}

bool same_flag(const kflag::PartialFlag& a, const kflag::PartialFlag& b) {
    if (a.steps != b.steps) return false;
    for (std::size_t s = 0; s < a.steps.size(); ++s) {
        const auto d = a.steps[s];
        MatQ fa = a.basis.leftCols(d), fb = b.basis.leftCols(d);
        if (!span_contains(fa, fb) || !span_contains(fb, fa)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("nilpotent exponential is the exact finite series") {
    MatQ x = MatQ::Zero(3, 3);
    x(0, 1) = Rat(2);
    x(1, 2) = Rat(3);
    const MatQ e = eps::exp_nilpotent(x);
    CHECK(e(0, 0) == Rat(1));
    CHECK(e(0, 1) == Rat(2));
    CHECK(e(1, 2) == Rat(3));
    CHECK(e(0, 2) == Rat(3));  // (2*3)/2!
    MatQ notnil = MatQ::Identity(2, 2);
    CHECK_THROWS_AS((void)eps::exp_nilpotent(notnil), Error);
}

TEST_CASE("flag steps and theta come from the diagonal") {
    const auto g = gl_grading(4, {1, 1, 0, 0});
    CHECK(eps::flag_steps(g) == std::vector<int>{2});
    CHECK(eps::theta_pattern(g) == std::vector<int>{-1, -1, 1, 1});
    const auto g3 = gl_grading(5, {2, 1, 1, 0, 0});
    CHECK(eps::flag_steps(g3) == std::vector<int>{1, 3});
    CHECK(eps::theta_pattern(g3) == std::vector<int>{1, -1, -1, 1, 1});
}

TEST_CASE("member components partition x") {
    const auto g = gl_grading(4, {2, 1, 1, 0});
    const auto fam = rootdata::minimal_parabolic_family(g);
    REQUIRE(fam.status == rootdata::FamilyStatus::Valid);
    const auto m = eps::make_epsilon_map(g, fam);
    for (const auto& o : lorbits::enumerate_L_orbits(g)) {
        MatQ sum = MatQ::Zero(4, 4);
        for (std::size_t k = 0; k < fam.members.size(); ++k)
            sum += eps::member_component(m, o.representative, static_cast<int>(k));
        MatQ x = o.representative.cast<Rat>();
        CHECK((sum - x).isZero(Rat(0)));
    }
}

TEST_CASE("epsilon of zero is the base flag") {
    const auto g = gl_grading(4, {1, 1, 0, 0});
    const auto m = default_map(g);
    const auto f = eps::epsilon_flag(m, Eigen::MatrixXi::Zero(4, 4));
    kflag::PartialFlag base;
    base.steps = {2};
    base.basis = MatQ::Zero(4, 2);
    base.basis(0, 0) = Rat(1);
    base.basis(1, 1) = Rat(1);
    CHECK(same_flag(f, base));
}

TEST_CASE("the map is L-equivariant") {
    // For l in L (block-diagonal, grading-preserving), eps(l x l^-1) and
    // l . eps(x) agree on the nose: conjugation respects the member
    // decomposition and l fixes the base flag.  Integral shears and a sign
    // torus keep the conjugate an integer matrix.
    for (auto diag : std::vector<std::vector<long long>>{
             {1, 1, 0, 0}, {2, 1, 0}, {2, 1, 1, 0}, {2, 2, 1, 0, 0}}) {
        const int n = static_cast<int>(diag.size());
        const auto g = gl_grading(n, diag);
        const auto m = default_map(g);
        const auto off = lorbits::block_offsets(g);

        using MatI = Eigen::MatrixXi;
        std::vector<std::pair<MatI, MatI>> levis;  // (l, l^-1)
        for (std::size_t b = 0; b + 1 < off.size(); ++b) {
            if (off[b + 1] - off[b] < 2) continue;
            MatI l = MatI::Identity(n, n), linv = MatI::Identity(n, n);
            l(off[b], off[b] + 1) = 1;
            linv(off[b], off[b] + 1) = -1;
            levis.emplace_back(l, linv);
        }
        MatI sgn = MatI::Identity(n, n);
        sgn(0, 0) = -1;
        levis.emplace_back(sgn, sgn);

        for (const auto& o : lorbits::enumerate_L_orbits(g)) {
            for (const auto& [l, linv] : levis) {
                REQUIRE(((l * linv) - MatI::Identity(n, n)).isZero());
                const MatI xc = l * o.representative * linv;
                const kflag::PartialFlag fx = eps::epsilon_flag(m, o.representative);
                kflag::PartialFlag lfx = fx;
                lfx.basis = l.cast<Rat>() * fx.basis;
                CHECK(same_flag(eps::epsilon_flag(m, xc), lfx));
            }
        }
    }
}

TEST_CASE("orderings change the parametrization, not the orbit matching") {
    const auto g = gl_grading(4, {2, 1, 1, 0});
    const auto fam = rootdata::minimal_parabolic_family(g);
    REQUIRE(fam.members.size() == 2);
    const auto y = kflag::build_kflag(g.p, g.q, eps::flag_steps(g), eps::theta_pattern(g));
    const auto m01 = eps::make_epsilon_map(g, fam, eps::Mode::Truncated, {0, 1});
    const auto m10 = eps::make_epsilon_map(g, fam, eps::Mode::Truncated, {1, 0});
    for (const auto& o : lorbits::enumerate_L_orbits(g)) {
        const auto a = eps::match_orbit(m01, y, o, 11);
        const auto b = eps::match_orbit(m10, y, o, 11);
        CHECK(a.target == b.target);
        CHECK(a.local_system_map == "trivial");
        CHECK(a.source == o.id);
    }
}

TEST_CASE("two-step mode agrees with the truncated map on abelian gradings") {
    const auto g = gl_grading(4, {1, 1, 0, 0});
    const auto m = default_map(g);
    const auto m2 = default_map(g, eps::Mode::TwoStep);
    for (const auto& o : lorbits::enumerate_L_orbits(g))
        CHECK(same_flag(eps::epsilon_flag(m, o.representative),
                        eps::epsilon_flag(m2, o.representative)));
}

TEST_CASE("two-step mode rejects deep gradings") {
    const auto g = gl_grading(4, {3, 2, 1, 0});
    REQUIRE_FALSE(g.two_step());
    const auto fam = rootdata::minimal_parabolic_family(g);
    try {
        (void)eps::make_epsilon_map(g, fam, eps::Mode::TwoStep);
        CHECK_MESSAGE(false, "TwoStep on a deep grading must throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ModeMismatch);
    }
}

TEST_CASE("orderings are validated and family/grading keys must agree") {
    const auto g = gl_grading(4, {2, 1, 1, 0});
    const auto fam = rootdata::minimal_parabolic_family(g);
    CHECK_THROWS_AS((void)eps::make_epsilon_map(g, fam, eps::Mode::Truncated, {0, 0}), Error);
    CHECK_THROWS_AS((void)eps::make_epsilon_map(g, fam, eps::Mode::Truncated, {0, 1, 2}),
                    Error);
    const auto gother = gl_grading(4, {1, 1, 0, 0});
    try {
        (void)eps::make_epsilon_map(gother, fam);
        CHECK_MESSAGE(false, "family checked for a different grading must be rejected");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MismatchedGrading);
    }
}

TEST_CASE("stabilizer laws and the conormal kernel on the two-block grading") {
    const auto g = gl_grading(4, {1, 1, 0, 0});
    const auto m = default_map(g);
    for (const auto& o : lorbits::enumerate_L_orbits(g)) {
        const auto f = eps::epsilon_flag(m, o.representative);
        CHECK(eps::levi_stabilizers_equal(g, o.representative, f));
        CHECK(eps::levi_stabilizer_dim_x(g, o.representative) ==
              eps::levi_stabilizer_dim_flag(g, f));
        // rank r inside a 2x2 block: ker(ad x: g(1) -> g(0)) has dim (2-r)^2
        const long long r = o.dimension == 0 ? 0 : (o.dimension == 3 ? 1 : 2);
        CHECK(eps::conormal_kernel_dim(g, o.representative) == (2 - r) * (2 - r));
    }
}

TEST_CASE("matching on the two-block grading is injective and dimension-true") {
    const auto g = gl_grading(4, {1, 1, 0, 0});
    const auto m = default_map(g);
    const auto y = kflag::build_kflag(g.p, g.q, eps::flag_steps(g), eps::theta_pattern(g));
    std::set<int> targets;
    for (const auto& o : lorbits::enumerate_L_orbits(g)) {
        const auto match = eps::match_orbit(m, y, o, 5);
        CHECK(targets.insert(match.target).second);
        // the grading is abelian, so the base K-orbit is a point and
        // dim Q_O = dim O on the nose
        CHECK(y.orbits[static_cast<std::size_t>(match.target)].dimension == o.dimension);
    }
    CHECK(targets == std::set<int>{0, 3, 5});
}

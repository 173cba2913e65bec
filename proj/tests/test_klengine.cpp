#include <doctest.h>

#include <algorithm>
#include <set>

#include "om/error.hpp"
#include "om/klengine.hpp"
#include "support/oracles.hpp"

using namespace om;
using kl::Perm;

TEST_CASE("permutation primitives") {
    CHECK(kl::perm_length({0, 1, 2, 3}) == 0);
    CHECK(kl::perm_length({3, 2, 1, 0}) == 6);
    CHECK(kl::compose({1, 0, 2}, {2, 0, 1}) == Perm{2, 1, 0});
    CHECK(kl::inverse({2, 0, 1}) == Perm{1, 2, 0});
    CHECK(kl::longest_element(4) == Perm{3, 2, 1, 0});
    CHECK(kl::bruhat_leq({0, 1, 2}, {2, 1, 0}));
    CHECK(kl::bruhat_leq({1, 0, 2}, {2, 0, 1}));
    CHECK_FALSE(kl::bruhat_leq({2, 0, 1}, {1, 0, 2}));
    // bruhat order: x <= w iff l(x) counts agree with a subword; spot-check
    // antisymmetry on all of S4
    Perm p = kl::identity(4);
    std::vector<Perm> s4;
    do s4.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    for (const auto& x : s4)
        for (const auto& w : s4)
            if (x != w && kl::bruhat_leq(x, w)) {
                CHECK(kl::perm_length(x) < kl::perm_length(w));
                CHECK_FALSE(kl::bruhat_leq(w, x));
            }
}

TEST_CASE("coset representatives for parabolic subgroups") {
    const std::vector<int> J = {0, 2};  // W_J = <s0> x <s2> in S4
    CHECK(kl::longest_element_J(4, J) == Perm{1, 0, 3, 2});
    CHECK(kl::perm_length(kl::longest_element_J(4, {0, 1})) == 3);
    const Perm w = {2, 0, 3, 1};
    const Perm m = kl::min_coset_rep(w, J);
    CHECK(kl::is_min_rep(m, J));
    // the Poincare series of the minimal representatives of S4 / (S2 x S2)
    // is the Gaussian binomial [4 2]_q
    Perm p = kl::identity(4);
    Poly series;
    do {
        if (kl::is_min_rep(p, J)) series += Poly::q_power(kl::perm_length(p), 1);
    } while (std::next_permutation(p.begin(), p.end()));
    CHECK(series == oracles::qbinom(4, 2));
}

TEST_CASE("kl table of S4 matches the R-polynomial oracle") {
    const auto t = kl::build_kl_table(4);
    oracles::KLByR oracle(4);
    for (std::size_t wi = 0; wi < t.elements.size(); ++wi)
        for (std::size_t xi = 0; xi < t.elements.size(); ++xi) {
            const Poly mine = kl::kl_polynomial(t, t.elements[xi], t.elements[wi]);
            const Poly ref = oracle.P(t.elements[xi], t.elements[wi]);
            CAPTURE(wi);
            CAPTURE(xi);
            CHECK(mine == ref);
        }
    // the famous singular Schubert variety in S4
    const Poly p3412 = kl::kl_polynomial(t, kl::identity(4), {2, 3, 0, 1});
    CHECK(p3412.str() == "1+q");
    const Poly p4231 = kl::kl_polynomial(t, kl::identity(4), {3, 1, 2, 0});
    CHECK(p4231.str() == "1+q");
}

TEST_CASE("kl table of S5 matches the R-polynomial oracle on a sample") {
    const auto t = kl::build_kl_table(5);
    oracles::KLByR oracle(5);
    // all pairs against the open cell, plus a pseudo-random slice
    const Perm w0 = kl::longest_element(5);
    for (const auto& x : t.elements) CHECK(kl::kl_polynomial(t, x, w0) == oracle.P(x, w0));
    for (std::size_t k = 0; k < t.elements.size(); k += 7)
        for (std::size_t j = k; j < t.elements.size(); j += 11)
            CHECK(kl::kl_polynomial(t, t.elements[k], t.elements[j]) ==
                  oracle.P(t.elements[k], t.elements[j]));
    // S5 is the first rank with quadratic entries; the table must contain some
    int quadratic = 0;
    for (const auto& row : t.P)
        for (const auto& [x, poly] : row)
            if (poly.degree() == 2) ++quadratic;
    CHECK(quadratic > 0);
}

TEST_CASE("partial stalks: empty J is the full table, cosets are constant") {
    const auto t = kl::build_kl_table(4);
    for (const auto& x : t.elements)
        for (const auto& w : t.elements)
            CHECK(kl::partial_kl(t, x, w, {}) == kl::kl_polynomial(t, x, w));

    const std::vector<int> J = {1};
    for (const auto& w : t.elements) {
        if (!kl::is_min_rep(w, J)) continue;
        const Perm wmax = kl::compose(w, kl::longest_element_J(4, J));
        for (const auto& x : t.elements) {
            if (!kl::is_min_rep(x, J)) continue;
            // stalk must be constant over the fiber x W_J
            Perm xs = x;
            std::swap(xs[1], xs[2]);
            CHECK(kl::partial_kl(t, x, w, J) == kl::kl_polynomial(t, xs, wmax));
        }
    }
    CHECK_THROWS_AS((void)kl::partial_kl(t, {1, 0, 2, 3}, kl::longest_element(4), {0}),
                    Error);
}

TEST_CASE("double cosets: extremes, sizes, invariance") {
    const std::vector<int> J = {0, 2};
    std::set<Perm> seen;
    Perm p = kl::identity(4);
    do {
        const auto coset = kl::double_coset(p, J);
        const Perm mx = kl::max_double_coset_rep(p, J);
        const Perm mn = kl::min_double_coset_rep(p, J);
        CHECK(std::find(coset.begin(), coset.end(), mx) != coset.end());
        CHECK(std::find(coset.begin(), coset.end(), mn) != coset.end());
        for (const auto& z : coset) {
            CHECK(kl::perm_length(z) <= kl::perm_length(mx));
            CHECK(kl::perm_length(z) >= kl::perm_length(mn));
            // extremes are invariants of the coset
            CHECK(kl::max_double_coset_rep(z, J) == mx);
            CHECK(kl::min_double_coset_rep(z, J) == mn);
        }
        seen.insert(mn);
    } while (std::next_permutation(p.begin(), p.end()));
    // S2 \ S4 / S2 with both factors <s0>, <s2>: the cosets partition S4
    std::size_t total = 0;
    for (const auto& mn : seen) total += kl::double_coset(mn, J).size();
    CHECK(total == 24);
}

TEST_CASE("schubert cells of explicit flags") {
    const std::vector<int> steps = {2};
    // identity flag: E_2 itself
    MatQ base(4, 2);
    base << Rat(1), Rat(0), Rat(0), Rat(1), Rat(0), Rat(0), Rat(0), Rat(0);
    CHECK(kl::cell_of_flag(base, steps) == Perm{0, 1, 2, 3});

    // span of e0+e2, e1+e3: jump positions of dim(E_i cap F_2) are {3, 4}
    MatQ f(4, 2);
    f << Rat(1), Rat(0), Rat(0), Rat(1), Rat(1), Rat(0), Rat(0), Rat(1);
    const Perm cell = kl::cell_of_flag(f, steps);
    CHECK(cell == Perm{2, 3, 0, 1});
    CHECK(kl::is_min_rep(cell, {0, 2}));

    // a rank-deficient basis is rejected
    MatQ bad(4, 2);
    bad << Rat(1), Rat(2), Rat(1), Rat(2), Rat(0), Rat(0), Rat(0), Rat(0);
    CHECK_THROWS_AS((void)kl::cell_of_flag(bad, steps), Error);
}

TEST_CASE("stratum parameter: the two-block witness") {
    // lambda = (1,1,0,0): g(-1) = Mat(2x2), steps (2), J = {0,2}
    const std::vector<int> steps = {2};
    const std::vector<int> J = {0, 2};

    // rank-1 point x = E_{20}: flag spanned by (e0 + e2, e1)
    MatQ f1(4, 2);
    f1 << Rat(1), Rat(0), Rat(0), Rat(1), Rat(1), Rat(0), Rat(0), Rat(0);
    const Perm cell1 = kl::cell_of_flag(f1, steps);
    const Perm z1 = kl::stratum_param(cell1, J);
    CHECK(z1 == Perm{1, 3, 0, 2});
    CHECK(kl::max_double_coset_rep(cell1, J) == Perm{3, 1, 2, 0});  // 4231

    // rank-2 point: flag (e0+e2, e1+e3)
    MatQ f2(4, 2);
    f2 << Rat(1), Rat(0), Rat(0), Rat(1), Rat(1), Rat(0), Rat(0), Rat(1);
    const Perm z2 = kl::stratum_param(kl::cell_of_flag(f2, steps), J);
    CHECK(kl::max_double_coset_rep(z2, J) == kl::longest_element(4));

    // rank-0: base flag, parameter is the identity
    MatQ f0(4, 2);
    f0 << Rat(1), Rat(0), Rat(0), Rat(1), Rat(0), Rat(0), Rat(0), Rat(0);
    CHECK(kl::stratum_param(kl::cell_of_flag(f0, steps), J) == kl::identity(4));

    // the p-adic polynomial of the witness pair: P(e -> rank-1 stratum) = 1+q
    const auto t = kl::build_kl_table(4);
    CHECK(kl::partial_kl(t, kl::identity(4), z1, J).str() == "1+q");
    CHECK(kl::partial_kl(t, z1, z1, J).str() == "1");
    // and the determinantal cone oracle agrees
    CHECK(kl::partial_kl(t, kl::identity(4), z1, J) == oracles::determinantal_stalk(2, 2, 0, 1));
}

TEST_CASE("contingency tables identify strata") {
    const std::vector<int> steps = {1, 3};
    Perm p = kl::identity(4);
    do {
        const Eigen::MatrixXi byperm = kl::contingency_table(p, steps);
        // build the T-fixed flag of p explicitly: F_{d} = span(e_{p(0)}, ..)
        MatQ basis = MatQ::Zero(4, 3);
        for (int c = 0; c < 3; ++c) basis(p[static_cast<std::size_t>(c)], c) = Rat(1);
        const Eigen::MatrixXi byflag = kl::contingency_of_flag(basis, steps);
        CHECK((byperm - byflag).isZero());
    } while (std::next_permutation(p.begin(), p.end()));
}

TEST_CASE("dimension of a stratum is the length gap to the coset floor") {
    // dim (P-orbit of z) on G/P_J = l(maxdc(z)) - l(w0J); check against the
    // rank-1 determinantal orbit dims {0, 3, 4} of the two-block witness
    const std::vector<int> J = {0, 2};
    const long long lw0j = kl::perm_length(kl::longest_element_J(4, J));
    CHECK(kl::perm_length(kl::max_double_coset_rep(kl::identity(4), J)) - lw0j == 0);
    CHECK(kl::perm_length(Perm{3, 1, 2, 0}) - lw0j == 3);
    CHECK(kl::perm_length(kl::longest_element(4)) - lw0j == 4);
}

#ifndef OM_KLENGINE_HPP
#define OM_KLENGINE_HPP

/*
 * Classical Kazhdan–Lusztig polynomials for the symmetric group, used as
 * the p-adic side of the comparison.  Everything is elementary and exact:
 *
 *  - Bruhat order by rank-matrix dominance:
 *      r_w(i,j) = #{a <= i : w(a) <= j},   x <= w  iff  r_x >= r_w entrywise;
 *  - P_{x,w} by the descent recursion: with s a right descent of w, v = ws,
 *      P_{x,w} = q^{1-c} P_{xs,v} + q^c P_{x,v}
 *                - Σ_{x <= z <= v, zs < z} μ(z,v) q^{(l(w)-l(z))/2} P_{x,z},
 *    c = [xs < x], μ(z,v) the top allowed coefficient of P_{z,v};
 *  - stalks on a partial flag variety by pullback along G/B -> G/P:
 *      P^J(x, w) = P(x, w·w0J)  for x, w in W^J, constant on cosets xW_J.
 *
 * Tables are built per rank n once and reused; n <= 7 is comfortable.
 */

#include <Eigen/Core>

#include <map>
#include <vector>

#include "om/linalg.hpp"
#include "om/poly.hpp"

namespace om::kl {

using Perm = std::vector<int>;  // one-line notation, 0-based values

int perm_length(const Perm& w);
Perm identity(int n);
Perm compose(const Perm& a, const Perm& b);  // (a*b)[i] = a[b[i]]
Perm inverse(const Perm& a);
Perm longest_element(int n);
bool bruhat_leq(const Perm& x, const Perm& w);

/* Longest element of the parabolic W_J, J a set of simple positions. */
Perm longest_element_J(int n, const std::vector<int>& J);
/* Minimal coset representative: sort the values inside every J-run. */
Perm min_coset_rep(const Perm& w, const std::vector<int>& J);
bool is_min_rep(const Perm& w, const std::vector<int>& J);

struct KLTable {
    int n = 0;
    std::vector<Perm> elements;  // sorted by (length, one-line lex)
    std::map<Perm, int> index;
    std::vector<int> len;
    std::vector<std::vector<char>> leq;  // leq[x][w]
    std::vector<std::map<int, Poly>> P;  // P[w][x] for x <= w
};

KLTable build_kl_table(int n);

Poly kl_polynomial(const KLTable& t, const Perm& x, const Perm& w);

/* Geometric stalk polynomial on G/P_J at (cell x, variety w), x,w ∈ W^J. */
Poly partial_kl(const KLTable& t, const Perm& x, const Perm& w, const std::vector<int>& J);

/*
 * Double cosets W_J w W_J, by breadth-first closure under left/right
 * multiplication by the J-transpositions.  Both extremes are unique.
 */
std::vector<Perm> double_coset(const Perm& w, const std::vector<int>& J);
Perm max_double_coset_rep(const Perm& w, const std::vector<int>& J);
Perm min_double_coset_rep(const Perm& w, const std::vector<int>& J);

/*
 * Schubert cell of a flag on G/P: the unique z ∈ W^J with
 *     dim(E_i ∩ F_{d_t}) = #{ a ∈ A_t(z) : a <= i },
 * computed from the exact jump sets of the given column basis (proper
 * steps d_1 < ... < d_m < n; columns 0..d_t-1 span F_{d_t}).
 */
Perm cell_of_flag(const MatQ& basis, const std::vector<int>& steps);

/*
 * The stratum parameter of the whole P-orbit P·F ⊇ B·F through a cell z:
 * the minimal coset representative of max(W_J z W_J)·W_J.  The map is an
 * order isomorphism onto its image and sends the base flag to the
 * identity; stalks of P-orbit closures are then partial_kl values.
 */
Perm stratum_param(const Perm& cell, const std::vector<int>& J);

/* r[s][t] = dim(E_{d_s} ∩ F_{d_t}) over the proper steps: once for the
 * T-fixed flag of the permutation w, once exactly for an explicit basis. */
Eigen::MatrixXi contingency_table(const Perm& w, const std::vector<int>& steps);
Eigen::MatrixXi contingency_of_flag(const MatQ& basis, const std::vector<int>& steps);

}  // namespace om::kl

#endif  // OM_KLENGINE_HPP

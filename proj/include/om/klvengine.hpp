#ifndef OM_KLVENGINE_HPP
#define OM_KLVENGINE_HPP

/*
 * Real-side polynomials P_{ψ,γ} for the K = GL(p) x GL(q) action, computed
 * in the Hecke module with clan basis.  The wall operator is
 *
 *   T_s γ = q γ                                   (compact imaginary)
 *         = s×γ + c^s(γ)                          (noncompact imaginary I)
 *         = (q-2) γ + (q-1)(γ+- + γ-+)            (real I)
 *         = s×γ                                   (complex ascent)
 *         = q (s×γ) + (q-1) γ                     (complex descent),
 *
 * self-dual elements are built by descent recursion
 *
 *   C_γ = γ                                        (sign strings)
 *   (T_s + 1) C_δ = C_γ + Σ_ψ μ_ψ q^{(lγ-lψ)/2} C_ψ   (s a descent, δ lowered)
 *
 * and the corrections are peeled off top-down: at even length gap the
 * residual coefficient may exceed the degree bound (lγ-lψ-1)/2 only in the
 * single monomial μ q^{(lγ-lψ)/2}; at odd gap it must not exceed it at all.
 * The engine verifies monicity, nonnegativity, positive constant terms,
 * and support = closure for every element it produces.
 *
 * Passage to a partial flag variety is by fibration: orbits downstairs are
 * the equivalence classes generated by the P_s saturation for retained
 * simple positions, the open member of a class is its unique lift, and
 * P^{partial}(ψ-class, γ-class) = P(lift ψ, lift γ).
 */

#include <Eigen/Core>

#include <map>
#include <set>
#include <vector>

#include "om/clan.hpp"
#include "om/poly.hpp"

namespace om::klv {

using clan::Clan;

struct Block {
    int p = 0, q = 0;
    std::vector<Clan> clans;        // sorted by (length, canonical string)
    std::map<Clan, int> index;
    std::vector<int> len;
    /* c_exp[g]: expansion of C_γ as (clan index, polynomial), index-sorted. */
    std::vector<std::vector<std::pair<int, Poly>>> c_exp;
    /* closure[g]: indices of orbits in the closure of O_γ. */
    std::vector<std::set<int>> closure;
};

/* Full block computation; every C_γ is built and cross-checked. */
Block build_block(int p, int q);

/* P_{ψ,γ}; zero polynomial when ψ is not in the closure of γ. */
Poly klv_polynomial(const Block& b, int psi, int gamma);

/* M_{ψγ} = (-1)^{l(γ)-l(ψ)} P_{ψγ}(1), rows ψ / columns γ in block order;
 * unitriangular with determinant 1. */
Eigen::MatrixXi multiplicity_matrix(const Block& b);

/* Hecke-module wall operator on a finitely supported element. */
std::map<int, Poly> apply_wall(const Block& b, int s, const std::map<int, Poly>& elt);

/* Orbit classes on a partial flag variety keeping the simple positions J
 * (0-based; s in J means positions s, s+1 lie in a common flag gap). */
struct ParabolicReduction {
    std::vector<int> J;
    std::vector<int> cls;                   // clan index -> class id
    std::vector<std::vector<int>> members;  // class id -> clan indices
    std::vector<int> lift;                  // class id -> open member
    int levi_positive_roots = 0;            // l(w0 of W_J)
};

ParabolicReduction reduce_to_parabolic(const Block& b, const std::vector<int>& J);

long long partial_dimension(const Block& b, const ParabolicReduction& r, int cls);

/* Whether the ψ-class lies in the closure of the γ-class downstairs. */
bool partial_closure_leq(const Block& b, const ParabolicReduction& r, int cls_psi, int cls_gamma);

Poly partial_klv(const Block& b, const ParabolicReduction& r, int cls_psi, int cls_gamma);

}  // namespace om::klv

#endif  // OM_KLVENGINE_HPP

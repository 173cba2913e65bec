#ifndef OM_ROOTDATA_HPP
#define OM_ROOTDATA_HPP

/*
 * Root systems, integral gradings g(i) cut out by a dominant rational
 * cocharacter lambda, and parabolic families satisfying the two key
 * hypotheses
 *
 *   (key0)  l_i ∩ g(-1) ≠ 0                      for every member, and
 *   (key)   g(-1) = ⊕_i ( l_i ∩ ubar )           as an exact direct sum,
 *
 * where l_i is the Levi factor of the i-th member and ubar = ⊕_{i<0} g(i).
 * The direct-sum form of (key) forces each l_i ∩ ubar to lie inside g(-1):
 * a Levi that meets g(-2) or lower disqualifies its parabolic outright.
 *
 * Roots are kept in simple-root coordinates (paired with coroot
 * coordinates), generated by reflection closure from the Cartan matrix in
 * Bourbaki numbering, so every construction below is type-independent.
 * GL(n) carries a block-structure sidecar (block sizes, block values,
 * junction set S) because the downstream orbit theory is phrased in blocks.
 */

#include <Eigen/Core>

#include <map>
#include <string>
#include <vector>

#include "om/error.hpp"
#include "om/rat.hpp"

namespace om::rootdata {

enum class CartanType { GL, A, B, C, D, E6, E7, E8, F4, G2 };

std::string type_name(CartanType t);
CartanType parse_type(const std::string& s);  // throws ParseError

struct RootSystem {
    CartanType type = CartanType::A;
    int rank = 0;   // number of simple roots
    int gl_n = 0;   // GL only: ambient matrix size (rank = gl_n - 1)
    Eigen::MatrixXi cartan;                // cartan(i,j) = <alpha_j, alpha_i^vee>
    std::vector<Eigen::VectorXi> roots;    // positives first (by height, then lex), then negatives mirrored
    std::vector<Eigen::VectorXi> coroots;  // coroot coordinates, aligned with roots
    int n_positive = 0;                    // roots[k + n_positive] == -roots[k]
};

/* Full root system with simple roots in Bourbaki order; throws InvalidType. */
RootSystem build_root_system(CartanType type, int rank);

struct Grading {
    RootSystem rs;
    std::vector<Rat> lambda;                  // as supplied
    std::vector<long long> simple_pairing;    // <alpha_i, lambda>, one per simple root
    std::vector<long long> grade;             // per root, aligned with rs.roots
    std::map<long long, long long> eigenspace_dim;  // grade 0 includes the Cartan

    /* GL sidecar (empty unless rs.type == GL). */
    std::vector<long long> diag;          // centrally shifted integer diagonal, non-increasing
    std::vector<int> block_sizes;         // n_1..n_k
    std::vector<long long> block_values;  // a_1 > ... > a_k
    std::vector<int> junctions;           // 0-based block indices j with a_j - a_{j+1} == 1
    int p = 0;                            // # even diagonal entries  (dim V+)
    int q = 0;                            // # odd  diagonal entries  (dim V-)

    bool is_gl() const { return rs.type == CartanType::GL; }
    long long dim_g(long long i) const {
        auto it = eigenspace_dim.find(i);
        return it == eigenspace_dim.end() ? 0 : it->second;
    }
    bool two_step() const {
        for (const auto& [i, d] : eigenspace_dim)
            if ((i > 2 || i < -2) && d > 0) return false;
        return true;
    }
    /* Distinct key used to detect a family checked against the wrong grading. */
    std::string key() const;
};

/*
 * lambda input: for GL, the n diagonal entries (weakly decreasing; any
 * common fractional part is removed by the central shift); for every other
 * type, the rank pairings <alpha_i, lambda> directly.  Throws
 * NonIntegralLambda / NonDominantLambda.
 */
Grading grade_by_lambda(const RootSystem& rs, const std::vector<Rat>& lambda);

enum class FamilyStatus { Valid, FailsKey0, FailsKey, NoFamilyExists };

std::string status_name(FamilyStatus s);

struct ParabolicFamily {
    /* Each member is the sorted set J of simple-root indices of its Levi;
     * the parabolic is standard (contains the fixed Borel), so J determines
     * it.  The vector order is the ordering of the family — reorderings are
     * distinct values. */
    std::vector<std::vector<int>> members;
    /* Root indices of l_i ∩ g(-1), aligned with members. */
    std::vector<std::vector<int>> covered;
    FamilyStatus status = FamilyStatus::NoFamilyExists;
    std::string diagnostic;
    std::string grading_key;  // back-reference to the grading checked against
};

/*
 * Canonical family construction.  Candidates are the standard parabolics
 * properly above p (J strictly containing J0 = {simple alpha : <alpha,
 * lambda> = 0}) whose Levi meets g(-1) and avoids g(<=-2); the search looks
 * for an exact cover of the g(-1) roots by candidate Levi intersections,
 * preferring members minimal under containment, and falls back to the full
 * admissible candidate pool (the antichain search) before reporting
 * NoFamilyExists.  Canonical member order: a distinguished member whose
 * Levi contains the tail simple root comes first (relevant for B/C/D
 * tails); the rest ascend by their smallest added simple index.
 *
 * An empty g(-1) yields status Valid with an empty family: both hypotheses
 * are vacuous and the matching map degenerates gracefully to x = 0.
 */
ParabolicFamily minimal_parabolic_family(const Grading& g);

/*
 * Re-check (key0)/(key) for an arbitrary family over g.  Throws
 * MismatchedGrading if the family was built against a different grading or
 * a member fails to properly contain p.  When diag is non-null it receives
 * the uncovered / doubly covered / out-of-grade root lists on failure.
 */
FamilyStatus check_hypotheses(const Grading& g, const ParabolicFamily& fam,
                              std::string* diag = nullptr);

/* Indices into rs.roots of the roots whose support lies inside J. */
std::vector<int> levi_root_indices(const Grading& g, const std::vector<int>& J);

/* J0: simple-root indices with pairing zero (the Levi of p itself). */
std::vector<int> base_levi_set(const Grading& g);

/* GL helper: block indices (0-based j, junction at blocks j,j+1) merged by
 * a family member, i.e. the junction boundaries added to J0. */
std::vector<int> gl_member_junctions(const Grading& g, const std::vector<int>& member);

}  // namespace om::rootdata

#endif  // OM_ROOTDATA_HPP

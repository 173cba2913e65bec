#ifndef OM_EPSMAP_HPP
#define OM_EPSMAP_HPP

/*
 * The matching map from nilpotent L-orbit data to points of the partial
 * flag variety.
 *
 * A valid parabolic family (p_1, ..., p_l) splits x ∈ g(-1) into components
 * x_i' ∈ l_i ∩ ubar, and
 *
 *     epsilon(x) = exp(x_1') ... exp(x_l') · p          (Truncated mode)
 *     epsilon'(x) = exp(x) · p                          (TwoStep mode)
 *
 * where p is the base flag of the grading.  Everything is computed over
 * exact rationals; exp of a nilpotent matrix is its finite series.  The
 * family ordering is part of the map: reorderings compose the exponentials
 * differently and may land in different flags.
 *
 * TwoStep mode requires the grading to be concentrated in degrees |i| <= 2;
 * it exists so the two constructions can be compared on their common
 * domain.
 */

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

#include "om/error.hpp"
#include "om/kflag.hpp"
#include "om/linalg.hpp"
#include "om/lorbits.hpp"
#include "om/rootdata.hpp"

namespace om::eps {

enum class Mode { Truncated, TwoStep };

struct EpsilonMap {
    rootdata::Grading g;
    rootdata::ParabolicFamily family;
    std::vector<int> ordering;  // permutation of family member indices
    Mode mode = Mode::Truncated;
};

/*
 * Validates and freezes the data of the map.  Truncated mode needs a Valid
 * family checked against this very grading (MismatchedGrading otherwise);
 * TwoStep mode needs the grading concentrated in |i| <= 2 (ModeMismatch).
 * An empty ordering means the family's own order.
 */
EpsilonMap make_epsilon_map(const rootdata::Grading& g,
                            const rootdata::ParabolicFamily& family,
                            Mode mode = Mode::Truncated, std::vector<int> ordering = {});

/* Finite exponential series of a nilpotent matrix; throws InvalidType if
 * the argument fails to be nilpotent. */
MatQ exp_nilpotent(const MatQ& x);

/* Matrix position (row, col) of the root space of a GL root. */
std::pair<int, int> gl_root_entry(const rootdata::Grading& g, int root_index);

/* x restricted to the entries covered by family member k. */
MatQ member_component(const EpsilonMap& m, const Eigen::MatrixXi& x, int member);

/* The group element: product of member exponentials (Truncated) or the
 * single exponential (TwoStep). */
MatQ epsilon_matrix(const EpsilonMap& m, const Eigen::MatrixXi& x);

/* Proper step dimensions of the base flag (prefix sums of block sizes). */
std::vector<int> flag_steps(const rootdata::Grading& g);

/* theta = parity pattern of the shifted diagonal: +1 on even entries. */
std::vector<int> theta_pattern(const rootdata::Grading& g);

/* epsilon(x) as an explicit flag. */
kflag::PartialFlag epsilon_flag(const EpsilonMap& m, const Eigen::MatrixXi& x);

/* dim z_l(x), the centralizer of x in the Levi of the grading. */
long long levi_stabilizer_dim_x(const rootdata::Grading& g, const Eigen::MatrixXi& x);

/* dim of the Levi stabilizer of a flag. */
long long levi_stabilizer_dim_flag(const rootdata::Grading& g, const kflag::PartialFlag& f);

/* Exact subspace equality z_l(x) == stab_l(f) inside the Levi. */
bool levi_stabilizers_equal(const rootdata::Grading& g, const Eigen::MatrixXi& x,
                            const kflag::PartialFlag& f);

/* dim ker( ad(x) : g(1) -> g(0) ). */
long long conormal_kernel_dim(const rootdata::Grading& g, const Eigen::MatrixXi& x);

struct OrbitMatch {
    int source = -1;                         // L-orbit id
    int target = -1;                         // K-orbit id
    std::vector<int> ordering;               // member ordering used by the map
    std::string local_system_map = "trivial";  // component groups are trivial here
};

/*
 * The K-orbit through epsilon(O).  The canonical representative and two
 * seeded random representatives must land in the same orbit; a
 * disagreement (which would mean the image fails to be a single orbit)
 * raises DimensionMismatch.
 */
OrbitMatch match_orbit(const EpsilonMap& m, const kflag::KFlagVariety& y,
                       const lorbits::LOrbit& o, std::uint64_t seed);

}  // namespace om::eps

#endif  // OM_EPSMAP_HPP

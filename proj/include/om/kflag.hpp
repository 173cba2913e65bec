#ifndef OM_KFLAG_HPP
#define OM_KFLAG_HPP

/*
 * K-orbits on a partial flag variety, with K = GL(V+) x GL(V-) the
 * centralizer of an involution theta = diag(+-1) acting on C^n.
 *
 * Orbits are enumerated combinatorially (clans reduced to the parabolic),
 * but every orbit also carries an explicit base-point flag, and its
 * dimension and complete signature
 *
 *     dim(F_{d_t} ∩ V±)   and   dim(F_{d_s} + theta F_{d_t})   (s <= t)
 *
 * are recomputed geometrically from that flag by exact rational linear
 * algebra.  The signature separates orbits, so identifying the orbit of an
 * arbitrary flag never consults the combinatorics that produced the list —
 * this is what makes the downstream orbit matching an honest computation
 * rather than a tautology.
 */

#include <Eigen/Core>

#include <map>
#include <string>
#include <vector>

#include "om/clan.hpp"
#include "om/error.hpp"
#include "om/klvengine.hpp"
#include "om/linalg.hpp"

namespace om::kflag {

/* A point of the partial flag variety: F_{d_t} = span of the first d_t
 * columns of `basis`.  Steps are the proper dimensions d_1 < ... < d_m < n;
 * the full space is never listed. */
struct PartialFlag {
    std::vector<int> steps;
    MatQ basis;  // n x d_m

    int n() const { return static_cast<int>(basis.rows()); }
};

struct FlagSignature {
    std::vector<int> steps;
    std::vector<int> plus_dims;   // dim(F_{d_t} ∩ V+)
    std::vector<int> minus_dims;  // dim(F_{d_t} ∩ V-)
    /* cross_dims[s][t-s] = dim(F_{d_s} + theta F_{d_t}) for s <= t. */
    std::vector<std::vector<int>> cross_dims;

    bool operator==(const FlagSignature& o) const {
        return steps == o.steps && plus_dims == o.plus_dims &&
               minus_dims == o.minus_dims && cross_dims == o.cross_dims;
    }
    bool operator<(const FlagSignature& o) const;

    std::string str() const;
};

struct KOrbit {
    int id = -1;   // position in the sorted orbit list
    int cls = -1;  // class id inside the parabolic reduction
    FlagSignature signature;
    long long dimension = 0;  // complex dimension, computed from the base point
    clan::Clan lift;          // open full-flag class member
    PartialFlag base_point;
};

struct KFlagVariety {
    int n = 0, p = 0, q = 0;
    std::vector<int> steps;
    std::vector<int> J;      // retained simple positions (see klv::ParabolicReduction)
    std::vector<int> theta;  // +1 / -1 per ambient coordinate
    klv::Block block;
    klv::ParabolicReduction reduction;
    std::vector<KOrbit> orbits;  // sorted by (dimension, signature)
    std::map<FlagSignature, int> by_signature;
    std::vector<int> cls_to_orbit;  // reduction class id -> orbit id

    long long dim_K() const {
        return static_cast<long long>(p) * p + static_cast<long long>(q) * q;
    }
};

/* theta with the first p coordinates +1 (the test default). */
std::vector<int> default_theta(int n, int p);

/* Retained simple positions: s iff dimension s+1 is not a step. */
std::vector<int> retained_positions(int n, const std::vector<int>& steps);

/* Coordinate bases of V+ / V- as column matrices. */
MatQ plus_space(const std::vector<int>& theta);
MatQ minus_space(const std::vector<int>& theta);

/*
 * Explicit flag realizing a clan: position i contributes e (next unused V+
 * coordinate) for '+', f (next V-) for '-', and a pair (a < b) contributes
 * e+f at a and e-f at b for a fresh (e, f) couple reserved at the opener.
 * Only the first d_m columns are kept.
 */
PartialFlag base_point(const clan::Clan& c, const std::vector<int>& theta,
                       const std::vector<int>& steps);

/* Exact signature; throws DegenerateFlag if some step has deficient rank. */
FlagSignature flag_signature(const PartialFlag& f, const std::vector<int>& theta);

/* dim { k in Lie K : k F_{d_t} ⊆ F_{d_t} for every step }. */
long long stabilizer_dimension(const PartialFlag& f, const std::vector<int>& theta);

/* Full enumeration; empty theta means default_theta(p+q, p).  Throws
 * DegenerateFlag if two orbit classes were to share a signature. */
KFlagVariety build_kflag(int p, int q, const std::vector<int>& steps,
                         std::vector<int> theta = {});

/* Orbit id of an arbitrary flag, by signature; throws MismatchedGrading on a
 * step mismatch and NotInY when no enumerated orbit carries the signature. */
int identify_orbit(const KFlagVariety& y, const PartialFlag& f);

/* Closure order upstairs, transported through the lifts. */
bool korbit_closure_leq(const KFlagVariety& y, int orbit_psi, int orbit_gamma);

/* IC stalk polynomial of the orbit-closure stratification. */
Poly partial_flag_polynomial(const KFlagVariety& y, int orbit_psi, int orbit_gamma);

}  // namespace om::kflag

#endif  // OM_KFLAG_HPP

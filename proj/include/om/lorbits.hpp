#ifndef OM_LORBITS_HPP
#define OM_LORBITS_HPP

/*
 * L-orbits on g(-1) for GL(n).
 *
 * A GL(n) grading presents g(-1) as a chain of matrix blocks
 * ⊕_{j∈S} Mat(n_{j+1}, n_j); the Levi L = ∏ GL(n_i) acts block-wise, and an
 * orbit is determined by the ranks of all composite maps along each run of
 * consecutive junctions (the rank triangle).  Internally an orbit is a
 * multisegment: a multiplicity m_{ab} >= 0 for every block interval [a,b]
 * of a chain with Σ_{[a,b] ∋ v} m_{ab} = n_v, which makes enumeration,
 * feasibility, and canonical representatives (one unit thread per segment)
 * immediate.  Ranks and multiplicities determine each other by inclusion–
 * exclusion, so the enumeration is duplicate-free by construction.
 *
 * Dimensions are never taken from a formula: dim O = dim L - dim Z_L(x) is
 * computed as an exact nullspace dimension on the canonical representative.
 */

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "om/rootdata.hpp"

namespace om::lorbits {

using rootdata::Grading;

struct RankTriangle {
    /* (first_block, block_count) per maximal run of consecutive junctions. */
    std::vector<std::pair<int, int>> chains;
    /* r[(a,b)] = rank of the composite block a -> block b, for blocks
     * a < b inside one chain. */
    std::map<std::pair<int, int>, int> r;

    bool operator==(const RankTriangle& o) const { return chains == o.chains && r == o.r; }

    /* Key order used everywhere (sorting, display, CLI input): adjacent
     * ranks first, then longer composites, i.e. sorted by (b-a, a). */
    std::vector<std::pair<int, int>> key_order() const;
    std::vector<int> rank_vector() const;  // ranks in key order
};

struct LOrbit {
    RankTriangle triangle;
    long long dimension = 0;
    Eigen::MatrixXi representative;  // n x n, supported on the grade -1 blocks
    int component_group_order = 1;
    int id = -1;  // position in the enumerated (sorted) list
};

/* Complete duplicate-free list, sorted by (dimension, rank vector);
 * throws UnsupportedType unless g is a GL grading. */
std::vector<LOrbit> enumerate_L_orbits(const Grading& g);

/* dim L - dim Z_L(x) by exact nullspace computation. */
long long orbit_dimension(const Grading& g, const Eigen::MatrixXi& rep);

/* Rank triangle of an arbitrary element of g(-1). */
RankTriangle rank_triangle_of(const Grading& g, const Eigen::MatrixXi& rep);

/* Componentwise rank comparison (closure order); throws
 * IncomparableGradings when the chain structures differ. */
bool closure_leq(const LOrbit& a, const LOrbit& b);

/* Component group of the stabilizer: trivial in GL (stabilizers are unit
 * groups of finite-dimensional algebras, hence connected). */
int component_group_order(const LOrbit& o);

/* A randomized representative of the same orbit: conjugate the canonical
 * one by a seeded block-diagonal unimodular integer element of L. */
Eigen::MatrixXi random_representative(const Grading& g, const LOrbit& o, std::uint64_t seed);

/* Block offsets (prefix sums of block sizes), length k+1. */
std::vector<int> block_offsets(const Grading& g);

}  // namespace om::lorbits

#endif  // OM_LORBITS_HPP

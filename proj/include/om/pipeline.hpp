#ifndef OM_PIPELINE_HPP
#define OM_PIPELINE_HPP

/*
 * The verification pipeline behind the command-line tool: grade a
 * cocharacter, enumerate both orbit pictures, run the matching map, compute
 * the two polynomial families on independent engines, and compare.
 *
 * Every command returns a JSON report (schema in docs/report_schema.md).
 * Reports are deterministic for fixed flags except for the "volatile"
 * object (timestamp, wall time, cache statistics).
 */

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "om/cache.hpp"
#include "om/klengine.hpp"
#include "om/klvengine.hpp"
#include "om/poly.hpp"
#include "om/rat.hpp"
#include "om/rootdata.hpp"

namespace om::pipeline {

using nlohmann::json;

struct Options {
    rootdata::CartanType type = rootdata::CartanType::GL;
    int rank = 0;               // GL: matrix size n; other types: Lie rank
    std::vector<Rat> lambda;    // GL: diagonal entries; otherwise simple pairings
    std::string ordering = "default";  // "default" | "all" | comma-separated permutation
    char mode = 'K';            // 'K': K-orbits on G/P; 'P': P-orbits (Remark-style)
    bool two_step = false;      // single-exponential construction
    std::uint64_t seed = 0;
    int jobs = 1;
};

/* Polynomial rendering used everywhere: "1+q+2*q^3", zero terms suppressed. */
std::string poly_text(const Poly& p);
json poly_json(const Poly& p);

/* Cache-backed engine tables (recomputed and re-appended on any anomaly). */
kl::KLTable kl_table_cached(int n, cache::Cache& cache);
klv::Block klv_block_cached(int p, int q, cache::Cache& cache);

json run_grade(const Options& opt);
json run_orbits(const Options& opt);
json run_match(const Options& opt, cache::Cache& cache);
json run_kl(int n, cache::Cache& cache);
json run_klv(int p, int q, cache::Cache& cache);

struct VerifyOutcome {
    json report;
    bool ok = false;
};

VerifyOutcome run_verify(const Options& opt, cache::Cache& cache);

/* All λ classes (block compositions x gap patterns in {1,2}) for 2..max_n,
 * plus the trivial n=1 class, each through run_verify. */
VerifyOutcome run_sweep(int max_n, double budget_seconds, const Options& base,
                        cache::Cache& cache);

/* Human-readable rendering of any report produced above. */
std::string render_text(const json& report);

}  // namespace om::pipeline

#endif  // OM_PIPELINE_HPP

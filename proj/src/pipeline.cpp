#include "om/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "om/epsmap.hpp"
#include "om/error.hpp"
#include "om/kflag.hpp"
#include "om/lorbits.hpp"

namespace om::pipeline {

/* ------------------------------------------------------------------ */
/* rendering primitives                                                */

std::string poly_text(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    const auto& c = p.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        if (!out.empty()) out += c[k] > 0 ? "+" : "-";
        else if (c[k] < 0) out += "-";
        const long long a = c[k] > 0 ? c[k] : -c[k];
        if (k == 0) {
            out += std::to_string(a);
        } else {
            if (a != 1) out += std::to_string(a) + "*";
            out += "q";
            if (k > 1) out += "^" + std::to_string(k);
        }
    }
    return out;
}

json poly_json(const Poly& p) {
    json j;
    j["coeffs"] = p.coeffs();
    j["text"] = poly_text(p);
    return j;
}

static std::string lambda_text(const std::vector<Rat>& lambda) {
    std::string s;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (i) s.push_back(',');
        s += lambda[i].str();
    }
    return s;
}

static json volatile_block(std::chrono::steady_clock::time_point start,
                           const cache::Cache& cache) {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    const auto st = cache.stats();
    return json{{"timestamp", buf},
                {"elapsed_ms", elapsed},
                {"cache",
                 {{"hits", st.hits},
                  {"misses", st.misses},
                  {"corrupt_entries", st.corrupt_entries}}}};
}

/* ------------------------------------------------------------------ */
/* cached engine tables                                                */

static std::string serialize_kl(const kl::KLTable& t) {
    std::ostringstream os;
    os << "n " << t.n << "\n";
    for (std::size_t w = 0; w < t.P.size(); ++w)
        for (const auto& [x, poly] : t.P[w]) {
            os << w << ' ' << x;
            for (long long c : poly.coeffs()) os << ' ' << c;
            os << "\n";
        }
    return os.str();
}

static bool deserialize_kl(const std::string& payload, kl::KLTable& t) {
    std::istringstream is(payload);
    std::string tag;
    int n = 0;
    if (!(is >> tag >> n) || tag != "n" || n != t.n) return false;
    std::size_t entries = 0;
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long long w = 0, x = 0;
        if (!(ls >> w >> x)) return false;
        if (w < 0 || x < 0 || w >= static_cast<long long>(t.elements.size()) ||
            x >= static_cast<long long>(t.elements.size()))
            return false;
        std::vector<long long> coeffs;
        long long c = 0;
        while (ls >> c) coeffs.push_back(c);
        Poly p;
        for (std::size_t k = 0; k < coeffs.size(); ++k) p += Poly::q_power(static_cast<int>(k), coeffs[k]);
        if (!t.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(w)]) return false;
        t.P[static_cast<std::size_t>(w)][static_cast<int>(x)] = std::move(p);
        ++entries;
    }
    /* completeness + diagonal sanity */
    std::size_t expected = 0;
    for (std::size_t w = 0; w < t.elements.size(); ++w) {
        for (std::size_t x = 0; x < t.elements.size(); ++x)
            if (t.leq[x][w]) ++expected;
        auto it = t.P[w].find(static_cast<int>(w));
        if (it == t.P[w].end() || !(it->second == Poly(1))) return false;
    }
    return entries == expected;
}

/* Element list, order and Bruhat matrix are cheap to rebuild; only the
 * polynomial table is worth persisting. */
static kl::KLTable kl_skeleton(int n) {
    kl::KLTable t;
    t.n = n;
    kl::Perm p = kl::identity(n);
    do {
        t.elements.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::sort(t.elements.begin(), t.elements.end(),
              [](const kl::Perm& a, const kl::Perm& b) {
                  const int la = kl::perm_length(a), lb = kl::perm_length(b);
                  return std::tie(la, a) < std::tie(lb, b);
              });
    const std::size_t N = t.elements.size();
    for (std::size_t i = 0; i < N; ++i) {
        t.index[t.elements[i]] = static_cast<int>(i);
        t.len.push_back(kl::perm_length(t.elements[i]));
    }
    t.leq.assign(N, std::vector<char>(N, 0));
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t w = 0; w < N; ++w)
            if (t.len[x] <= t.len[w])
                t.leq[x][w] = kl::bruhat_leq(t.elements[x], t.elements[w]);
    t.P.assign(N, {});
    return t;
}

kl::KLTable kl_table_cached(int n, cache::Cache& cache) {
    const std::string key = "sn:n=" + std::to_string(n) + ";conv=q0;fmt=1";
    if (auto payload = cache.get("kl", key)) {
        kl::KLTable skel = kl_skeleton(n);
        if (deserialize_kl(*payload, skel)) return skel;
    }
    kl::KLTable t = kl::build_kl_table(n);
    cache.put("kl", key, serialize_kl(t));
    return t;
}

static std::string serialize_klv(const klv::Block& b) {
    std::ostringstream os;
    os << "pq " << b.p << ' ' << b.q << "\n";
    for (std::size_t g = 0; g < b.c_exp.size(); ++g)
        for (const auto& [psi, poly] : b.c_exp[g]) {
            os << g << ' ' << psi;
            for (long long c : poly.coeffs()) os << ' ' << c;
            os << "\n";
        }
    return os.str();
}

static bool deserialize_klv(const std::string& payload, klv::Block& b) {
    std::istringstream is(payload);
    std::string tag;
    int p = 0, q = 0;
    if (!(is >> tag >> p >> q) || tag != "pq" || p != b.p || q != b.q) return false;
    std::string line;
    std::getline(is, line);
    b.c_exp.assign(b.clans.size(), {});
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long long g = 0, psi = 0;
        if (!(ls >> g >> psi)) return false;
        if (g < 0 || psi < 0 || g >= static_cast<long long>(b.clans.size()) ||
            psi >= static_cast<long long>(b.clans.size()))
            return false;
        std::vector<long long> coeffs;
        long long c = 0;
        while (ls >> c) coeffs.push_back(c);
        Poly poly;
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            poly += Poly::q_power(static_cast<int>(k), coeffs[k]);
        if (poly.is_zero()) return false;
        b.c_exp[static_cast<std::size_t>(g)].emplace_back(static_cast<int>(psi),
                                                          std::move(poly));
    }
    /* structural checks: sorted support, monic diagonal, closure rebuild */
    b.closure.assign(b.clans.size(), {});
    for (std::size_t g = 0; g < b.c_exp.size(); ++g) {
        auto& row = b.c_exp[g];
        if (row.empty()) return false;
        for (std::size_t i = 0; i + 1 < row.size(); ++i)
            if (row[i].first >= row[i + 1].first) return false;
        bool has_diag = false;
        for (const auto& [psi, poly] : row) {
            if (psi == static_cast<int>(g)) has_diag = poly == Poly(1);
            b.closure[g].insert(psi);
        }
        if (!has_diag) return false;
    }
    return true;
}

klv::Block klv_block_cached(int p, int q, cache::Cache& cache) {
    const std::string key =
        "block:p=" + std::to_string(p) + ",q=" + std::to_string(q) + ";conv=q0;fmt=1";
    if (auto payload = cache.get("klv", key)) {
        klv::Block skel;
        skel.p = p;
        skel.q = q;
        skel.clans = clan::generate_clans(p, q);
        for (std::size_t i = 0; i < skel.clans.size(); ++i) {
            skel.index[skel.clans[i]] = static_cast<int>(i);
            skel.len.push_back(clan::length(skel.clans[i]));
        }
        if (deserialize_klv(*payload, skel)) return skel;
        klv::Block b = klv::build_block(p, q);
        cache.put("klv", key, serialize_klv(b));
        return b;
    }
    klv::Block b = klv::build_block(p, q);
    cache.put("klv", key, serialize_klv(b));
    return b;
}

/* ------------------------------------------------------------------ */
/* shared context                                                      */

namespace {

struct Context {
    rootdata::RootSystem rs;
    rootdata::Grading g;
    rootdata::ParabolicFamily family;
};

Context make_context(const Options& opt) {
    if (opt.two_step && opt.mode == 'P')
        throw Error(ErrorKind::ModeMismatch,
                    "two-step mode matches into the partial flag variety; "
                    "it cannot be combined with --mode P");
    Context c;
    c.rs = rootdata::build_root_system(opt.type, opt.rank);
    c.g = rootdata::grade_by_lambda(c.rs, opt.lambda);
    c.family = rootdata::minimal_parabolic_family(c.g);
    return c;
}

void require_gl(const Options& opt, const char* what) {
    if (opt.type != rootdata::CartanType::GL)
        throw Error(ErrorKind::UnsupportedType,
                    std::string(what) + " needs a GL grading (--type gl)");
}

json grading_json(const rootdata::Grading& g) {
    json dims = json::array();
    for (const auto& [grade, dim] : g.eigenspace_dim)
        dims.push_back(json::array({grade, dim}));
    json j{{"eigenspace_dims", dims}, {"two_step_eligible", g.two_step()}};
    if (g.is_gl()) {
        j["diag"] = g.diag;
        j["block_sizes"] = g.block_sizes;
        j["junctions"] = g.junctions;
        j["p"] = g.p;
        j["q"] = g.q;
        j["K"] = "GL(" + std::to_string(g.p) + ")xGL(" + std::to_string(g.q) + ")";
        j["steps"] = eps::flag_steps(g);
    }
    return j;
}

json family_json(const rootdata::ParabolicFamily& fam) {
    json members = json::array();
    for (const auto& m : fam.members) members.push_back(m);
    return json{{"status", rootdata::status_name(fam.status)},
                {"members", members},
                {"diagnostic", fam.diagnostic}};
}

json lorbits_json(const std::vector<lorbits::LOrbit>& orbits) {
    json keys = json::array();
    if (!orbits.empty())
        for (const auto& [a, b] : orbits.front().triangle.key_order())
            keys.push_back("r(" + std::to_string(a) + "," + std::to_string(b) + ")");
    json arr = json::array();
    for (const auto& o : orbits)
        arr.push_back(json{{"id", o.id},
                           {"ranks", o.triangle.rank_vector()},
                           {"dimension", o.dimension},
                           {"component_group_order", o.component_group_order}});
    return json{{"rank_keys", keys}, {"orbits", arr}, {"count", orbits.size()}};
}

std::vector<std::vector<int>> orderings_for(const std::string& spec, int l) {
    std::vector<std::vector<int>> result;
    if (spec == "default" || spec.empty()) {
        std::vector<int> id(static_cast<std::size_t>(l));
        std::iota(id.begin(), id.end(), 0);
        result.push_back(std::move(id));
    } else if (spec == "all") {
        if (l > 4)
            throw Error(ErrorKind::ParseError,
                        "--ordering all is limited to families with at most 4 members");
        std::vector<int> perm(static_cast<std::size_t>(l));
        std::iota(perm.begin(), perm.end(), 0);
        do {
            result.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (result.empty()) result.push_back({});
    } else {
        std::vector<int> perm;
        std::istringstream is(spec);
        std::string piece;
        while (std::getline(is, piece, ',')) {
            try {
                perm.push_back(std::stoi(piece));
            } catch (const std::exception&) {
                throw Error(ErrorKind::ParseError, "bad ordering entry '" + piece + "'");
            }
        }
        if (static_cast<int>(perm.size()) != l)
            throw Error(ErrorKind::ParseError,
                        "ordering must list all " + std::to_string(l) +
                            " member indices (0-based)");
        result.push_back(std::move(perm));
    }
    return result;
}

long long dim_flag_variety(const rootdata::Grading& g) {
    long long d = 0;
    for (const auto& [grade, dim] : g.eigenspace_dim)
        if (grade > 0) d += dim;
    return d;
}

long long dim_base_korbit(const rootdata::Grading& g) {
    long long d = 0;
    for (const auto& [grade, dim] : g.eigenspace_dim)
        if (grade <= -2 && grade % 2 == 0) d += dim;
    return d;
}

/* P-orbits on G/P_J as double cosets, identified by contingency tables. */
struct PCosets {
    std::vector<kl::Perm> mindc, maxdc;
    std::vector<long long> dim;
    std::map<std::string, int> by_table;
};

std::string table_key(const Eigen::MatrixXi& t) {
    std::ostringstream os;
    for (int r = 0; r < t.rows(); ++r) {
        if (r) os << ';';
        for (int c = 0; c < t.cols(); ++c) {
            if (c) os << ',';
            os << t(r, c);
        }
    }
    return os.str();
}

PCosets enumerate_pcosets(int n, const std::vector<int>& steps, const std::vector<int>& J) {
    PCosets pc;
    const long long lw0j = kl::perm_length(kl::longest_element_J(n, J));
    std::set<kl::Perm> seen_min;
    kl::Perm perm = kl::identity(n);
    std::vector<kl::Perm> mins;
    do {
        kl::Perm m = kl::min_double_coset_rep(perm, J);
        if (seen_min.insert(m).second) mins.push_back(m);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(mins.begin(), mins.end(), [](const kl::Perm& a, const kl::Perm& b) {
        const int la = kl::perm_length(a), lb = kl::perm_length(b);
        return std::tie(la, a) < std::tie(lb, b);
    });
    for (const kl::Perm& m : mins) {
        kl::Perm mx = kl::max_double_coset_rep(m, J);
        const int id = static_cast<int>(pc.mindc.size());
        pc.dim.push_back(kl::perm_length(mx) - lw0j);
        pc.by_table[table_key(kl::contingency_table(m, steps))] = id;
        pc.mindc.push_back(std::move(m));
        pc.maxdc.push_back(std::move(mx));
    }
    return pc;
}

struct OrderingReport {
    json j;
    bool ok = false;
};

/* One (ordering, mode) verification pass over a prepared grading. */
OrderingReport verify_ordering(const Context& ctx,
                               const std::vector<lorbits::LOrbit>& orbits,
                               const std::vector<int>& steps,
                               const kflag::KFlagVariety* y, const PCosets* pc,
                               const kl::KLTable& kltab, const std::vector<int>& ordering,
                               const Options& opt) {
    const rootdata::Grading& g = ctx.g;
    const std::vector<int> J = kflag::retained_positions(g.rs.gl_n, steps);
    const eps::Mode mode = opt.two_step ? eps::Mode::TwoStep : eps::Mode::Truncated;
    eps::EpsilonMap m = eps::make_epsilon_map(g, ctx.family, mode, ordering);
    /* The p-adic stratum parameter is intrinsic to the L-orbit; it is read
     * off the truncated construction even when the single-exponential map
     * drives the matching, because the two maps can land in different
     * B-strata of one K-orbit (gl(4), lambda (2,1,0,0) is a witness). */
    eps::EpsilonMap m_param =
        opt.two_step ? eps::make_epsilon_map(g, ctx.family, eps::Mode::Truncated, ordering)
                     : m;

    const long long dimP = dim_flag_variety(g);
    const long long dimQ0 = opt.mode == 'P' ? 0 : dim_base_korbit(g);
    const long long dimG2 = g.dim_g(-2);

    struct Row {
        int target = -1;
        kl::Perm zel;
        long long dim_target = 0;
        json j;
        bool ok = true;
    };
    std::vector<Row> rows;
    bool section4 = true;

    for (const auto& o : orbits) {
        Row row;
        kflag::PartialFlag flag = eps::epsilon_flag(m, o.representative);
        /* target orbit, with the genericity cross-check on random reps */
        if (opt.mode == 'K') {
            eps::OrbitMatch match = eps::match_orbit(m, *y, o, opt.seed);
            row.target = match.target;
            row.dim_target = y->orbits[static_cast<std::size_t>(match.target)].dimension;
            row.j["target_signature"] =
                y->orbits[static_cast<std::size_t>(match.target)].signature.str();
            row.j["local_system_map"] = match.local_system_map;
        } else {
            auto identify = [&](const Eigen::MatrixXi& rep) {
                const kflag::PartialFlag f2 = eps::epsilon_flag(m, rep);
                const std::string key = table_key(kl::contingency_of_flag(f2.basis, steps));
                auto it = pc->by_table.find(key);
                if (it == pc->by_table.end())
                    throw Error(ErrorKind::NotInY, "no coset carries table " + key);
                return it->second;
            };
            row.target = identify(o.representative);
            for (std::uint64_t k = 1; k <= 2; ++k)
                if (identify(lorbits::random_representative(g, o, opt.seed + k)) != row.target)
                    throw Error(ErrorKind::DimensionMismatch,
                                "representatives of one orbit landed in different strata");
            row.dim_target = pc->dim[static_cast<std::size_t>(row.target)];
            row.j["coset_table"] =
                table_key(kl::contingency_table(pc->mindc[static_cast<std::size_t>(row.target)], steps));
        }
        const kflag::PartialFlag param_flag =
            opt.two_step ? eps::epsilon_flag(m_param, o.representative) : flag;
        row.zel = kl::stratum_param(kl::cell_of_flag(param_flag.basis, steps), J);

        const bool dim_ok = row.dim_target == dimQ0 + o.dimension;
        const bool stab_ok = eps::levi_stabilizers_equal(g, o.representative, flag);
        row.j["source"] = o.id;
        row.j["target"] = row.target;
        row.j["dim_source"] = o.dimension;
        row.j["dim_target"] = row.dim_target;
        row.j["dim_law_ok"] = dim_ok;
        row.j["stabilizer_ok"] = stab_ok;
        row.j["zelevinsky"] = row.zel;
        row.ok = dim_ok && stab_ok;
        if (opt.two_step) {
            const long long kern = eps::conormal_kernel_dim(g, o.representative);
            const bool gfinite2_ok = row.dim_target == dimG2 + o.dimension;
            const bool conormal_ok = dimP - row.dim_target == kern;
            row.j["gfinite2_ok"] = gfinite2_ok;
            row.j["conormal_kernel"] = kern;
            row.j["conormal_ok"] = conormal_ok;
            row.ok = row.ok && gfinite2_ok && conormal_ok;
        }
        section4 = section4 && row.ok;
        rows.push_back(std::move(row));
    }

    /* injectivity */
    std::set<int> targets;
    for (const auto& r : rows) targets.insert(r.target);
    const bool injective = targets.size() == rows.size();
    section4 = section4 && injective;

    /* order isomorphism between the two closure orders on matched orbits */
    bool order_iso = true;
    for (std::size_t a = 0; a < orbits.size(); ++a)
        for (std::size_t b = 0; b < orbits.size(); ++b) {
            const bool src = lorbits::closure_leq(orbits[a], orbits[b]);
            bool tgt;
            if (opt.mode == 'K')
                tgt = kflag::korbit_closure_leq(*y, rows[a].target, rows[b].target);
            else
                tgt = kl::bruhat_leq(pc->maxdc[static_cast<std::size_t>(rows[a].target)],
                                     pc->maxdc[static_cast<std::size_t>(rows[b].target)]);
            if (src != tgt) order_iso = false;
        }
    section4 = section4 && order_iso;

    /* the polynomial comparison */
    json pairs = json::array();
    bool all_equal = true;
    for (std::size_t a = 0; a < orbits.size(); ++a)
        for (std::size_t b = 0; b < orbits.size(); ++b) {
            if (!lorbits::closure_leq(orbits[a], orbits[b])) continue;
            Poly real;
            if (opt.mode == 'K') {
                real = kflag::partial_flag_polynomial(*y, rows[a].target, rows[b].target);
            } else {
                real = kl::kl_polynomial(
                    kltab, pc->mindc[static_cast<std::size_t>(rows[a].target)],
                    pc->maxdc[static_cast<std::size_t>(rows[b].target)]);
            }
            const Poly padic = kl::partial_kl(kltab, rows[a].zel, rows[b].zel, J);
            const bool equal = real == padic;
            all_equal = all_equal && equal;
            pairs.push_back(json{{"psi", orbits[a].id},
                                 {"gamma", orbits[b].id},
                                 {"padic", poly_json(padic)},
                                 {"real", poly_json(real)},
                                 {"equal", equal}});
        }

    json matches = json::array();
    for (auto& r : rows) matches.push_back(std::move(r.j));
    json unmatched = json::array();
    if (opt.mode == 'K') {
        for (const auto& orb : y->orbits)
            if (!targets.count(orb.id)) unmatched.push_back(orb.id);
    }

    OrderingReport rep;
    rep.ok = section4 && all_equal;
    rep.j = json{{"ordering", ordering},
                 {"matches", matches},
                 {"injective", injective},
                 {"order_isomorphism", order_iso},
                 {"pairs", pairs},
                 {"all_equal", all_equal},
                 {"section4_ok", section4},
                 {"ok", rep.ok}};
    if (opt.mode == 'K') rep.j["unmatched_targets"] = unmatched;
    return rep;
}

}  // namespace

/* ------------------------------------------------------------------ */
/* commands                                                            */

json run_grade(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    Context ctx = make_context(opt);
    json j{{"schema_version", "1"},
           {"command", "grade"},
           {"type", rootdata::type_name(opt.type)},
           {"rank", opt.rank},
           {"lambda", lambda_text(opt.lambda)},
           {"grading", grading_json(ctx.g)},
           {"family", family_json(ctx.family)}};
    cache::Cache dummy("");
    j["volatile"] = volatile_block(start, dummy);
    return j;
}

json run_orbits(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    require_gl(opt, "orbit enumeration");
    Context ctx = make_context(opt);
    const auto orbits = lorbits::enumerate_L_orbits(ctx.g);
    json j{{"schema_version", "1"},
           {"command", "orbits"},
           {"type", "gl"},
           {"rank", opt.rank},
           {"lambda", lambda_text(opt.lambda)},
           {"grading", grading_json(ctx.g)},
           {"l_orbits", lorbits_json(orbits)}};
    const std::vector<int> steps = eps::flag_steps(ctx.g);
    if (!steps.empty()) {
        kflag::KFlagVariety y =
            kflag::build_kflag(ctx.g.p, ctx.g.q, steps, eps::theta_pattern(ctx.g));
        json ko = json::array();
        for (const auto& o : y.orbits)
            ko.push_back(json{{"id", o.id},
                              {"dimension", o.dimension},
                              {"signature", o.signature.str()},
                              {"lift_clan", o.lift.str()}});
        j["k_orbits"] = json{{"orbits", ko}, {"count", y.orbits.size()}};
    }
    cache::Cache dummy("");
    j["volatile"] = volatile_block(start, dummy);
    return j;
}

static json verify_report(const Options& opt, cache::Cache& cache, bool* ok_out);

json run_match(const Options& opt, cache::Cache& cache) {
    bool ok = false;
    json full = verify_report(opt, cache, &ok);
    /* the match command is the verify pipeline without the polynomials */
    full["command"] = "match";
    if (full.contains("orderings"))
        for (auto& o : full["orderings"]) o.erase("pairs");
    return full;
}

json run_kl(int n, cache::Cache& cache) {
    const auto start = std::chrono::steady_clock::now();
    if (n < 1 || n > 7)
        throw Error(ErrorKind::ParseError, "kl table size must be between 1 and 7");
    kl::KLTable t = kl_table_cached(n, cache);
    json elements = json::array();
    for (const auto& w : t.elements) elements.push_back(w);
    json polys = json::array();
    for (std::size_t w = 0; w < t.P.size(); ++w)
        for (const auto& [x, poly] : t.P[w])
            polys.push_back(
                json{{"psi_id", x}, {"gamma_id", w}, {"poly", poly_json(poly)}});
    json j{{"schema_version", "1"},
           {"command", "kl"},
           {"n", n},
           {"parabolic_convention", "q=0"},
           {"elements", elements},
           {"polys", polys},
           {"volatile", volatile_block(start, cache)}};
    return j;
}

json run_klv(int p, int q, cache::Cache& cache) {
    const auto start = std::chrono::steady_clock::now();
    if (p < 0 || q < 0 || p + q < 1 || p + q > 6)
        throw Error(ErrorKind::ParseError, "klv block needs 1 <= p+q <= 6");
    klv::Block b = klv_block_cached(p, q, cache);
    json clans = json::array();
    for (std::size_t i = 0; i < b.clans.size(); ++i) {
        json moves = json::array();
        for (int s = 0; s + 1 < p + q; ++s) {
            const clan::MoveKind k = clan::move_kind(b.clans[i], s);
            json mv{{"s", s}, {"kind", clan::move_kind_name(k)}};
            if (k == clan::MoveKind::ComplexAscent || k == clan::MoveKind::ComplexDescent)
                mv["cross"] = clan::cross(b.clans[i], s).str();
            if (k == clan::MoveKind::NoncompactImaginaryI)
                mv["cayley_up"] = clan::cayley_up(b.clans[i], s).str();
            if (k == clan::MoveKind::RealI) {
                auto [d1, d2] = clan::cayley_down(b.clans[i], s);
                mv["cayley_down"] = json::array({d1.str(), d2.str()});
            }
            moves.push_back(std::move(mv));
        }
        clans.push_back(json{{"id", i},
                             {"clan", b.clans[i].str()},
                             {"length", b.len[i]},
                             {"dimension", clan::dimension(b.clans[i], p, q)},
                             {"moves", moves}});
    }
    json polys = json::array();
    for (std::size_t gamma = 0; gamma < b.clans.size(); ++gamma)
        for (int psi : b.closure[gamma])
            polys.push_back(json{{"psi_id", psi},
                                 {"gamma_id", gamma},
                                 {"poly", poly_json(klv::klv_polynomial(
                                              b, psi, static_cast<int>(gamma)))}});
    Eigen::MatrixXi mult = klv::multiplicity_matrix(b);
    json mrows = json::array();
    for (int r = 0; r < mult.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < mult.cols(); ++c) row.push_back(mult(r, c));
        mrows.push_back(std::move(row));
    }
    json j{{"schema_version", "1"},
           {"command", "klv"},
           {"p", p},
           {"q", q},
           {"parabolic_convention", "q=0"},
           {"clans", clans},
           {"polys", polys},
           {"multiplicity_matrix", mrows},
           {"volatile", volatile_block(start, cache)}};
    return j;
}

static json verify_report(const Options& opt, cache::Cache& cache, bool* ok_out) {
    const auto start = std::chrono::steady_clock::now();
    require_gl(opt, "verification");
    Context ctx = make_context(opt);
    const rootdata::Grading& g = ctx.g;
    const std::vector<int> steps = eps::flag_steps(g);
    const auto orbits = lorbits::enumerate_L_orbits(g);

    json j{{"schema_version", "1"},
           {"command", "verify"},
           {"type", "gl"},
           {"rank", opt.rank},
           {"lambda", lambda_text(opt.lambda)},
           {"mode", std::string(1, opt.mode)},
           {"construction", opt.two_step ? "two-step" : "truncated"},
           {"parabolic_convention", "q=0"},
           {"grading", grading_json(g)},
           {"family", family_json(ctx.family)},
           {"l_orbits", lorbits_json(orbits)}};

    bool ok = true;
    if (steps.empty()) {
        j["trivial"] = "the base parabolic is all of GL(n); the flag variety is a point";
        j["orderings"] = json::array();
        j["all_pass"] = true;
    } else {
        j["flag"] = json{{"steps", steps},
                         {"dim_flag_variety", dim_flag_variety(g)},
                         {"dim_base_korbit", dim_base_korbit(g)}};
        kflag::KFlagVariety y;
        PCosets pc;
        if (opt.mode == 'K') {
            y = kflag::build_kflag(g.p, g.q, steps, eps::theta_pattern(g));
            json ko = json::array();
            for (const auto& o : y.orbits)
                ko.push_back(json{{"id", o.id},
                                  {"dimension", o.dimension},
                                  {"signature", o.signature.str()},
                                  {"lift_clan", o.lift.str()}});
            j["k_orbits"] = json{{"orbits", ko}, {"count", y.orbits.size()}};
        } else {
            pc = enumerate_pcosets(g.rs.gl_n, steps,
                                   kflag::retained_positions(g.rs.gl_n, steps));
            j["p_orbit_count"] = pc.mindc.size();
        }
        kl::KLTable kltab = kl_table_cached(g.rs.gl_n, cache);
        json ords = json::array();
        for (const auto& ordering :
             orderings_for(opt.ordering, static_cast<int>(ctx.family.members.size()))) {
            OrderingReport rep = verify_ordering(ctx, orbits, steps, &y, &pc, kltab,
                                                 ordering, opt);
            ok = ok && rep.ok;
            ords.push_back(std::move(rep.j));
        }
        j["orderings"] = std::move(ords);
        j["all_pass"] = ok;
    }
    j["volatile"] = volatile_block(start, cache);
    if (ok_out) *ok_out = ok;
    return j;
}

VerifyOutcome run_verify(const Options& opt, cache::Cache& cache) {
    VerifyOutcome out;
    out.report = verify_report(opt, cache, &out.ok);
    return out;
}

/* ------------------------------------------------------------------ */
/* sweep                                                               */

namespace {

struct LambdaClass {
    int n = 0;
    std::vector<Rat> lambda;
};

std::vector<LambdaClass> lambda_classes(int max_n) {
    std::vector<LambdaClass> classes;
    for (int n = 1; n <= max_n; ++n) {
        /* compositions of n, each with every gap pattern in {1,2}^{k-1} */
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
        for (const auto& comp : comps) {
            const int k = static_cast<int>(comp.size());
            for (int mask = 0; mask < (1 << std::max(0, k - 1)); ++mask) {
                std::vector<Rat::Int> values(static_cast<std::size_t>(k), 0);
                for (int i = k - 2; i >= 0; --i)
                    values[static_cast<std::size_t>(i)] =
                        values[static_cast<std::size_t>(i) + 1] +
                        ((mask >> i) & 1 ? 2 : 1);
                LambdaClass lc;
                lc.n = n;
                for (int b = 0; b < k; ++b)
                    for (int rep = 0; rep < comp[static_cast<std::size_t>(b)]; ++rep)
                        lc.lambda.emplace_back(values[static_cast<std::size_t>(b)]);
                classes.push_back(std::move(lc));
            }
        }
    }
    return classes;
}

}  // namespace

VerifyOutcome run_sweep(int max_n, double budget_seconds, const Options& base,
                        cache::Cache& cache) {
    const auto start = std::chrono::steady_clock::now();
    if (max_n < 1 || max_n > 6)
        throw Error(ErrorKind::ParseError, "sweep needs 1 <= max-n <= 6");
    if (base.two_step && base.mode == 'P')
        throw Error(ErrorKind::ModeMismatch,
                    "two-step mode matches into the partial flag variety; "
                    "it cannot be combined with --mode P");
    const std::vector<LambdaClass> classes = lambda_classes(max_n);

    struct Slot {
        json j;
        bool ok = false;
        bool done = false;
        bool ineligible = false;
    };
    std::vector<Slot> slots(classes.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> out_of_budget{false};
    const auto deadline =
        start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(budget_seconds));

    auto worker = [&] {
        for (;;) {
            if (budget_seconds > 0 && std::chrono::steady_clock::now() >= deadline) {
                out_of_budget.store(true);
                return;
            }
            const std::size_t i = next.fetch_add(1);
            if (i >= classes.size()) return;
            const LambdaClass& lc = classes[i];
            Options opt = base;
            opt.type = rootdata::CartanType::GL;
            opt.rank = lc.n;
            opt.lambda = lc.lambda;
            Slot& slot = slots[i];
            slot.done = true;
            json entry{{"n", lc.n}, {"lambda", lambda_text(lc.lambda)}};
            if (base.two_step) {
                /* classes with g(|i|>2) != 0 have no single-exponential
                 * construction at all; a sweep records that and moves on */
                const auto rs = rootdata::build_root_system(opt.type, opt.rank);
                if (!rootdata::grade_by_lambda(rs, opt.lambda).two_step()) {
                    entry["status"] = "skipped_ineligible";
                    slot.ineligible = true;
                    slot.j = std::move(entry);
                    continue;
                }
            }
            try {
                bool ok = false;
                json rep = verify_report(opt, cache, &ok);
                entry["status"] = ok ? "pass" : "fail";
                entry["all_pass"] = ok;
                long long pair_count = 0;
                json failures = json::array();
                for (const auto& o : rep["orderings"]) {
                    pair_count += static_cast<long long>(o["pairs"].size());
                    if (!o["ok"].get<bool>()) {
                        json f{{"ordering", o["ordering"]},
                               {"injective", o["injective"]},
                               {"order_isomorphism", o["order_isomorphism"]},
                               {"all_equal", o["all_equal"]},
                               {"section4_ok", o["section4_ok"]}};
                        for (const auto& pr : o["pairs"])
                            if (!pr["equal"].get<bool>()) {
                                f["first_unequal_pair"] = pr;
                                break;
                            }
                        failures.push_back(std::move(f));
                    }
                }
                entry["ordering_count"] = rep["orderings"].size();
                entry["orbit_count"] = rep["l_orbits"]["count"];
                entry["pair_count"] = pair_count;
                if (!failures.empty()) entry["failures"] = std::move(failures);
                slot.ok = ok;
            } catch (const Error& e) {
                entry["status"] = "error";
                entry["error"] = e.what();
                slot.ok = false;
            } catch (const std::exception& e) {
                entry["status"] = "error";
                entry["error"] = e.what();
                slot.ok = false;
            }
            slot.j = std::move(entry);
        }
    };

    const int jobs = std::max(1, std::min(base.jobs, static_cast<int>(classes.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    json arr = json::array();
    long long passed = 0, failed = 0, budget_skipped = 0, ineligible = 0;
    bool all_pass = true;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].done) {
            ++budget_skipped;
            arr.push_back(json{{"n", classes[i].n},
                               {"lambda", lambda_text(classes[i].lambda)},
                               {"status", "skipped_budget"}});
            continue;
        }
        if (slots[i].ineligible) {
            ++ineligible;
            arr.push_back(std::move(slots[i].j));
            continue;
        }
        slots[i].ok ? ++passed : ++failed;
        all_pass = all_pass && slots[i].ok;
        arr.push_back(std::move(slots[i].j));
    }
    /* an ineligible class is a complete answer; an unvisited one is not */
    all_pass = all_pass && budget_skipped == 0;
    const long long skipped = budget_skipped + ineligible;

    VerifyOutcome out;
    out.ok = all_pass;
    out.report = json{{"schema_version", "1"},
                      {"command", "sweep"},
                      {"max_n", max_n},
                      {"mode", std::string(1, base.mode)},
                      {"construction", base.two_step ? "two-step" : "truncated"},
                      {"ordering", base.ordering},
                      {"classes", std::move(arr)},
                      {"totals",
                       {{"classes", classes.size()},
                        {"passed", passed},
                        {"failed", failed},
                        {"skipped", skipped},
                        {"skipped_ineligible", ineligible}}},
                      {"budget_exhausted", out_of_budget.load()},
                      {"all_pass", all_pass},
                      {"volatile", volatile_block(start, cache)}};
    return out;
}

/* ------------------------------------------------------------------ */
/* text rendering                                                      */

namespace {

void render_verify_like(std::ostringstream& os, const json& r) {
    os << "type gl, n=" << r["rank"].get<int>() << ", lambda=(" << r["lambda"].get<std::string>()
       << "), mode " << r["mode"].get<std::string>() << ", " << r["construction"].get<std::string>()
       << " construction\n";
    const auto& fam = r["family"];
    os << "family: " << fam["status"].get<std::string>() << ", members";
    for (const auto& m : fam["members"]) {
        os << " {";
        bool first = true;
        for (const auto& v : m) {
            if (!first) os << ",";
            os << v.get<int>();
            first = false;
        }
        os << "}";
    }
    os << "\n";
    if (r.contains("trivial")) {
        os << r["trivial"].get<std::string>() << "\nALL PASS\n";
        return;
    }
    os << "L-orbits: " << r["l_orbits"]["count"].get<long long>();
    if (r.contains("k_orbits"))
        os << ", K-orbits: " << r["k_orbits"]["count"].get<long long>();
    if (r.contains("p_orbit_count"))
        os << ", P-strata: " << r["p_orbit_count"].get<long long>();
    os << "\n";
    for (const auto& o : r["orderings"]) {
        os << "ordering [";
        bool first = true;
        for (const auto& v : o["ordering"]) {
            if (!first) os << ",";
            os << v.get<int>();
            first = false;
        }
        os << "]: injective=" << (o["injective"].get<bool>() ? "yes" : "NO")
           << " order_iso=" << (o["order_isomorphism"].get<bool>() ? "yes" : "NO");
        os << " matches:";
        for (const auto& mt : o["matches"])
            os << " " << mt["source"].get<int>() << "->" << mt["target"].get<int>();
        os << "\n";
        for (const auto& mt : o["matches"]) {
            if (!mt["dim_law_ok"].get<bool>())
                os << "  DIM LAW FAIL at source " << mt["source"].get<int>() << "\n";
            if (!mt["stabilizer_ok"].get<bool>())
                os << "  STABILIZER FAIL at source " << mt["source"].get<int>() << "\n";
        }
        if (o.contains("pairs")) {
            for (const auto& pr : o["pairs"])
                os << "  P(" << pr["psi"].get<int>() << "," << pr["gamma"].get<int>()
                   << "): padic=" << pr["padic"]["text"].get<std::string>()
                   << " real=" << pr["real"]["text"].get<std::string>()
                   << (pr["equal"].get<bool>() ? "" : "  *** UNEQUAL ***") << "\n";
            os << "  all_equal=" << (o["all_equal"].get<bool>() ? "yes" : "NO") << "\n";
        }
    }
    os << (r["all_pass"].get<bool>() ? "ALL PASS" : "FAIL") << "\n";
}

}  // namespace

std::string render_text(const json& r) {
    std::ostringstream os;
    const std::string cmd = r.value("command", "");
    if (cmd == "grade") {
        os << "type " << r["type"].get<std::string>() << ", lambda=("
           << r["lambda"].get<std::string>() << ")\n";
        const auto& g = r["grading"];
        os << "eigenspace dims:";
        for (const auto& pr : g["eigenspace_dims"])
            os << " g(" << pr[0].get<long long>() << ")=" << pr[1].get<long long>();
        os << "\n";
        if (g.contains("K")) {
            os << "K = " << g["K"].get<std::string>() << ", flag steps (";
            bool first = true;
            for (const auto& s : g["steps"]) {
                if (!first) os << ",";
                os << s.get<int>();
                first = false;
            }
            os << ")\n";
        }
        os << "two-step eligible: " << (g["two_step_eligible"].get<bool>() ? "yes" : "no")
           << "\n";
        const auto& fam = r["family"];
        os << "family status: " << fam["status"].get<std::string>();
        if (!fam["diagnostic"].get<std::string>().empty())
            os << " (" << fam["diagnostic"].get<std::string>() << ")";
        os << "\n";
    } else if (cmd == "orbits") {
        const auto& lo = r["l_orbits"];
        os << "L-orbits (" << lo["count"].get<long long>() << "), ranks in key order";
        for (const auto& k : lo["rank_keys"]) os << " " << k.get<std::string>();
        os << "\n";
        for (const auto& o : lo["orbits"]) {
            os << "  #" << o["id"].get<int>() << " dim=" << o["dimension"].get<long long>()
               << " ranks=(";
            bool first = true;
            for (const auto& v : o["ranks"]) {
                if (!first) os << ",";
                os << v.get<int>();
                first = false;
            }
            os << ")\n";
        }
        if (r.contains("k_orbits")) {
            os << "K-orbits (" << r["k_orbits"]["count"].get<long long>() << ")\n";
            for (const auto& o : r["k_orbits"]["orbits"])
                os << "  #" << o["id"].get<int>() << " dim=" << o["dimension"].get<long long>()
                   << " clan=" << o["lift_clan"].get<std::string>() << " "
                   << o["signature"].get<std::string>() << "\n";
        }
    } else if (cmd == "kl" || cmd == "klv") {
        os << "# parabolic convention: q=0\npsi_id,gamma_id,poly\n";
        for (const auto& e : r["polys"])
            os << e["psi_id"].get<int>() << "," << e["gamma_id"].get<int>() << ","
               << e["poly"]["text"].get<std::string>() << "\n";
    } else if (cmd == "verify" || cmd == "match") {
        render_verify_like(os, r);
    } else if (cmd == "sweep") {
        for (const auto& c : r["classes"]) {
            os << "n=" << c["n"].get<int>() << " lambda=(" << c["lambda"].get<std::string>()
               << "): " << c["status"].get<std::string>();
            if (c.contains("error")) os << " (" << c["error"].get<std::string>() << ")";
            os << "\n";
        }
        const auto& t = r["totals"];
        os << "classes=" << t["classes"].get<long long>() << " passed="
           << t["passed"].get<long long>() << " failed=" << t["failed"].get<long long>()
           << " skipped=" << t["skipped"].get<long long>() << "\n"
           << (r["all_pass"].get<bool>() ? "ALL PASS" : "FAIL") << "\n";
    } else {
        os << r.dump(2) << "\n";
    }
    return os.str();
}

}  // namespace om::pipeline

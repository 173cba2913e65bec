#include "om/lorbits.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "om/error.hpp"
#include "om/linalg.hpp"

namespace om::lorbits {



std::vector<std::pair<int, int>> RankTriangle::key_order() const {
    std::vector<std::pair<int, int>> keys;
    keys.reserve(r.size());
    for (const auto& [k, v] : r) keys.push_back(k);
    std::sort(keys.begin(), keys.end(), [](const auto& x, const auto& y) {
        return std::pair{x.second - x.first, x.first} < std::pair{y.second - y.first, y.first};
    });
    return keys;
}

std::vector<int> RankTriangle::rank_vector() const {
    std::vector<int> v;
    for (const auto& k : key_order()) v.push_back(r.at(k));
    return v;
}

std::vector<int> block_offsets(const Grading& g) {
    std::vector<int> off(g.block_sizes.size() + 1, 0);
    for (std::size_t i = 0; i < g.block_sizes.size(); ++i) off[i + 1] = off[i] + g.block_sizes[i];
    return off;
}

namespace {

void require_gl(const Grading& g) {
    if (!g.is_gl())
        throw Error(ErrorKind::UnsupportedType, "L-orbit enumeration requires a GL grading");
}

/* Maximal runs of consecutive junctions -> (first_block, block_count). */
std::vector<std::pair<int, int>> chain_list(const Grading& g) {
    std::vector<std::pair<int, int>> chains;
    const auto& S = g.junctions;
    for (std::size_t i = 0; i < S.size();) {
        std::size_t j = i;
        while (j + 1 < S.size() && S[j + 1] == S[j] + 1) ++j;
        chains.emplace_back(S[i], S[j] - S[i] + 2);
        i = j + 1;
    }
    return chains;
}

struct Interval {
    int a, b;  // block indices, a <= b
};

/* All multisegments on one chain: multiplicity per interval [a,b] with
 * vertex sums equal to the block sizes.  Proper intervals are chosen by
 * depth-first search; singleton multiplicities are the forced leftovers. */
void chain_multisegments(const Grading& g, int first, int count,
                         std::vector<std::map<std::pair<int, int>, int>>& out) {
    std::vector<Interval> proper;
    for (int a = first; a < first + count; ++a)
        for (int b = a + 1; b < first + count; ++b) proper.push_back({a, b});
    std::vector<int> cap(count);
    for (int v = 0; v < count; ++v) cap[v] = g.block_sizes[static_cast<std::size_t>(first + v)];

    std::map<std::pair<int, int>, int> mult;
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
        if (idx == proper.size()) {
            auto full = mult;
            for (int v = 0; v < count; ++v)
                if (cap[v] > 0) full[{first + v, first + v}] = cap[v];
            out.push_back(std::move(full));
            return;
        }
        const auto [a, b] = proper[idx];
        int top = cap[a - first];
        for (int v = a; v <= b; ++v) top = std::min(top, cap[v - first]);
        for (int m = 0; m <= top; ++m) {
            if (m > 0) {
                mult[{a, b}] = m;
                for (int v = a; v <= b; ++v) cap[v - first] -= 1;
            }
            rec(idx + 1);
        }
        if (top > 0) {
            mult.erase({a, b});
            for (int v = a; v <= b; ++v) cap[v - first] += top;
        }
    };
    rec(0);
}

/* Ranks from multiplicities: r(a,b) = Σ_{a'<=a, b'>=b} m_{a'b'}. */
void ranks_from_multiplicities(const std::map<std::pair<int, int>, int>& mult, int first, int count,
                               std::map<std::pair<int, int>, int>& r) {
    for (int a = first; a < first + count; ++a)
        for (int b = a + 1; b < first + count; ++b) {
            int total = 0;
            for (const auto& [seg, m] : mult)
                if (seg.first <= a && seg.second >= b) total += m;
            r[{a, b}] = total;
        }
}

/* One unit thread per segment copy, on fresh slots in every block. */
Eigen::MatrixXi representative_from_multiplicities(
    const Grading& g, const std::vector<std::map<std::pair<int, int>, int>>& per_chain) {
    const auto off = block_offsets(g);
    Eigen::MatrixXi x = Eigen::MatrixXi::Zero(g.rs.gl_n, g.rs.gl_n);
    std::vector<int> next(g.block_sizes.size(), 0);
    for (const auto& mult : per_chain)
        for (const auto& [seg, m] : mult)
            for (int copy = 0; copy < m; ++copy) {
                int prev_slot = next[static_cast<std::size_t>(seg.first)]++;
                for (int v = seg.first + 1; v <= seg.second; ++v) {
                    int slot = next[static_cast<std::size_t>(v)]++;
                    x(off[static_cast<std::size_t>(v)] + slot,
                      off[static_cast<std::size_t>(v - 1)] + prev_slot) = 1;
                    prev_slot = slot;
                }
            }
    return x;
}

Eigen::MatrixXi subblock(const Eigen::MatrixXi& x, const std::vector<int>& off, int to_block,
                         int from_block, const Grading& g) {
    return x.block(off[static_cast<std::size_t>(to_block)], off[static_cast<std::size_t>(from_block)],
                   g.block_sizes[static_cast<std::size_t>(to_block)],
                   g.block_sizes[static_cast<std::size_t>(from_block)]);
}

void require_in_minus_one(const Grading& g, const Eigen::MatrixXi& rep) {
    const auto off = block_offsets(g);
    const int n = g.rs.gl_n;
    if (rep.rows() != n || rep.cols() != n)
        throw Error(ErrorKind::InvalidType, "representative has wrong ambient size");
    Eigen::MatrixXi mask = Eigen::MatrixXi::Zero(n, n);
    for (int j : g.junctions) {
        auto ub = static_cast<std::size_t>(j);
        for (int row = off[ub + 1]; row < off[ub + 2]; ++row)
            for (int col = off[ub]; col < off[ub + 1]; ++col) mask(row, col) = 1;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (rep(i, j) != 0 && mask(i, j) == 0)
                throw Error(ErrorKind::InvalidType, "element is not supported on g(-1)");
}

}  // namespace

RankTriangle rank_triangle_of(const Grading& g, const Eigen::MatrixXi& rep) {
    require_gl(g);
    require_in_minus_one(g, rep);
    const auto off = block_offsets(g);
    RankTriangle t;
    t.chains = chain_list(g);
    for (const auto& [first, count] : t.chains)
        for (int a = first; a < first + count; ++a)
            for (int b = a + 1; b < first + count; ++b) {
                MatQ comp = subblock(rep, off, a + 1, a, g).cast<Rat>();
                for (int v = a + 1; v < b; ++v)
                    comp = (subblock(rep, off, v + 1, v, g).cast<Rat>() * comp).eval();
                t.r[{a, b}] = static_cast<int>(rank_exact(comp));
            }
    return t;
}

long long orbit_dimension(const Grading& g, const Eigen::MatrixXi& rep) {
    require_gl(g);
    require_in_minus_one(g, rep);
    const auto off = block_offsets(g);
    const int k = static_cast<int>(g.block_sizes.size());

    /* Unknowns: entries of A_i in gl(n_i) for every block i. */
    std::vector<int> var_off(static_cast<std::size_t>(k) + 1, 0);
    for (int i = 0; i < k; ++i) {
        int ni = g.block_sizes[static_cast<std::size_t>(i)];
        var_off[static_cast<std::size_t>(i) + 1] = var_off[static_cast<std::size_t>(i)] + ni * ni;
    }
    const int nvars = var_off[static_cast<std::size_t>(k)];

    int nrows = 0;
    for (int j : g.junctions)
        nrows += g.block_sizes[static_cast<std::size_t>(j)] *
                 g.block_sizes[static_cast<std::size_t>(j) + 1];

    MatQ M = MatQ::Zero(nrows, nvars);
    int row = 0;
    auto var = [&](int block, int p, int q) {
        return var_off[static_cast<std::size_t>(block)] +
               p * g.block_sizes[static_cast<std::size_t>(block)] + q;
    };
    for (int j : g.junctions) {
        const Eigen::MatrixXi X = subblock(rep, off, j + 1, j, g);
        const int rows_up = g.block_sizes[static_cast<std::size_t>(j) + 1];
        const int cols_dn = g.block_sizes[static_cast<std::size_t>(j)];
        /* (A_{j+1} X - X A_j)[p][q] = 0 */
        for (int p = 0; p < rows_up; ++p)
            for (int q = 0; q < cols_dn; ++q) {
                for (int s = 0; s < rows_up; ++s)
                    if (X(s, q) != 0) M(row, var(j + 1, p, s)) += Rat(X(s, q));
                for (int s = 0; s < cols_dn; ++s)
                    if (X(p, s) != 0) M(row, var(j, s, q)) -= Rat(X(p, s));
                ++row;
            }
    }
    long long dim_L = 0;
    for (int i = 0; i < k; ++i) {
        long long ni = g.block_sizes[static_cast<std::size_t>(i)];
        dim_L += ni * ni;
    }
    long long centralizer = nvars - static_cast<long long>(rank_exact(M));
    return dim_L - centralizer;
}

std::vector<LOrbit> enumerate_L_orbits(const Grading& g) {
    require_gl(g);
    const auto chains = chain_list(g);

    std::vector<std::vector<std::map<std::pair<int, int>, int>>> per_chain_choices;
    for (const auto& [first, count] : chains) {
        std::vector<std::map<std::pair<int, int>, int>> ms;
        chain_multisegments(g, first, count, ms);
        per_chain_choices.push_back(std::move(ms));
    }

    std::vector<LOrbit> orbits;
    std::vector<std::map<std::pair<int, int>, int>> pick(chains.size());
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
        if (c == chains.size()) {
            LOrbit o;
            o.triangle.chains = chains;
            for (std::size_t i = 0; i < chains.size(); ++i)
                ranks_from_multiplicities(pick[i], chains[i].first, chains[i].second, o.triangle.r);
            o.representative = representative_from_multiplicities(g, pick);
            o.dimension = orbit_dimension(g, o.representative);
            orbits.push_back(std::move(o));
            return;
        }
        for (const auto& ms : per_chain_choices[c]) {
            pick[c] = ms;
            rec(c + 1);
        }
    };
    rec(0);

    std::sort(orbits.begin(), orbits.end(), [](const LOrbit& a, const LOrbit& b) {
        if (a.dimension != b.dimension) return a.dimension < b.dimension;
        return a.triangle.rank_vector() < b.triangle.rank_vector();
    });
    for (std::size_t i = 0; i < orbits.size(); ++i) orbits[i].id = static_cast<int>(i);
    return orbits;
}

bool closure_leq(const LOrbit& a, const LOrbit& b) {
    if (a.triangle.chains != b.triangle.chains)
        throw Error(ErrorKind::IncomparableGradings,
                    "closure comparison across different gradings");
    for (const auto& [key, ra] : a.triangle.r)
        if (ra > b.triangle.r.at(key)) return false;
    return true;
}

int component_group_order(const LOrbit& o) {
    (void)o;
    return 1;  // stabilizers are unit groups of finite-dimensional algebras
}

Eigen::MatrixXi random_representative(const Grading& g, const LOrbit& o, std::uint64_t seed) {
    require_gl(g);
    const auto off = block_offsets(g);
    const int k = static_cast<int>(g.block_sizes.size());
    std::mt19937_64 rng(seed);

    /* Seeded unimodular integer G_i per block, with exact inverse built from
     * the same elementary shears. */
    std::vector<Eigen::MatrixXi> G(static_cast<std::size_t>(k)), Ginv(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const int ni = g.block_sizes[static_cast<std::size_t>(i)];
        Eigen::MatrixXi gi = Eigen::MatrixXi::Identity(ni, ni);
        Eigen::MatrixXi gi_inv = gi;
        if (ni > 1) {
            std::uniform_int_distribution<int> pos(0, ni - 1);
            std::uniform_int_distribution<int> coef(-2, 2);
            for (int step = 0; step < 6; ++step) {
                int p = pos(rng), q = pos(rng), c = coef(rng);
                if (p == q || c == 0) continue;
                Eigen::MatrixXi E = Eigen::MatrixXi::Identity(ni, ni);
                E(p, q) = c;
                Eigen::MatrixXi Einv = Eigen::MatrixXi::Identity(ni, ni);
                Einv(p, q) = -c;
                gi = (E * gi).eval();
                gi_inv = (gi_inv * Einv).eval();
            }
        }
        G[static_cast<std::size_t>(i)] = gi;
        Ginv[static_cast<std::size_t>(i)] = gi_inv;
    }

    Eigen::MatrixXi out = Eigen::MatrixXi::Zero(g.rs.gl_n, g.rs.gl_n);
    for (int j : g.junctions) {
        auto ub = static_cast<std::size_t>(j);
        Eigen::MatrixXi X = subblock(o.representative, off, j + 1, j, g);
        Eigen::MatrixXi Y = G[ub + 1] * X * Ginv[ub];
        out.block(off[ub + 1], off[ub], Y.rows(), Y.cols()) = Y;
    }
    return out;
}

}  // namespace om::lorbits

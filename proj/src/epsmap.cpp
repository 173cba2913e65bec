#include "om/epsmap.hpp"

#include <algorithm>
#include <numeric>

namespace om::eps {

EpsilonMap make_epsilon_map(const rootdata::Grading& g,
                            const rootdata::ParabolicFamily& family, Mode mode,
                            std::vector<int> ordering) {
    if (!g.is_gl())
        throw Error(ErrorKind::UnsupportedType,
                    "the matching map is implemented for GL gradings");
    if (mode == Mode::Truncated) {
        if (family.grading_key != g.key())
            throw Error(ErrorKind::MismatchedGrading,
                        "family was checked against a different grading");
        if (family.status != rootdata::FamilyStatus::Valid)
            throw Error(ErrorKind::MismatchedGrading,
                        "the map needs a family satisfying both hypotheses");
    } else if (!g.two_step()) {
        throw Error(ErrorKind::ModeMismatch,
                    "single-exponential mode needs the grading concentrated in |i| <= 2");
    }
    const int l = static_cast<int>(family.members.size());
    if (ordering.empty()) {
        ordering.resize(static_cast<std::size_t>(l));
        std::iota(ordering.begin(), ordering.end(), 0);
    }
    std::vector<int> sorted = ordering;
    std::sort(sorted.begin(), sorted.end());
    if (static_cast<int>(sorted.size()) != l)
        throw Error(ErrorKind::ParseError,
                    "ordering must be a permutation of the family members");
    for (int i = 0; i < l; ++i)
        if (sorted[static_cast<std::size_t>(i)] != i)
            throw Error(ErrorKind::ParseError,
                        "ordering must be a permutation of the family members");
    return EpsilonMap{g, family, std::move(ordering), mode};
}

static bool all_zero(const MatQ& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (!(m(r, c) == Rat(0))) return false;
    return true;
}

MatQ exp_nilpotent(const MatQ& x) {
    const Eigen::Index n = x.rows();
    MatQ sum = MatQ::Identity(n, n);
    MatQ term = MatQ::Identity(n, n);
    for (Eigen::Index m = 1; m <= n; ++m) {
        term = (term * x * (Rat(1) / Rat(static_cast<Rat::Int>(m)))).eval();
        if (all_zero(term)) return sum;
        sum += term;
    }
    throw Error(ErrorKind::InvalidType, "exp of a non-nilpotent matrix");
}

std::pair<int, int> gl_root_entry(const rootdata::Grading& g, int root_index) {
    const Eigen::VectorXi& c = g.rs.roots[static_cast<std::size_t>(root_index)];
    int lo = -1, hi = -1, sign = 0;
    for (int k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        if (lo < 0) lo = k;
        hi = k;
        if (sign == 0) sign = c[k] > 0 ? 1 : -1;
        if (c[k] * sign != 1)
            throw Error(ErrorKind::UnsupportedType, "root is not of GL shape");
    }
    if (lo < 0) throw Error(ErrorKind::UnsupportedType, "zero root");
    return sign > 0 ? std::make_pair(lo, hi + 1) : std::make_pair(hi + 1, lo);
}

MatQ member_component(const EpsilonMap& m, const Eigen::MatrixXi& x, int member) {
    const int n = m.g.rs.gl_n;
    MatQ comp = MatQ::Zero(n, n);
    for (int ri : m.family.covered[static_cast<std::size_t>(member)]) {
        const auto [r, c] = gl_root_entry(m.g, ri);
        comp(r, c) = Rat(x(r, c));
    }
    return comp;
}

MatQ epsilon_matrix(const EpsilonMap& m, const Eigen::MatrixXi& x) {
    const int n = m.g.rs.gl_n;
    if (x.rows() != n || x.cols() != n)
        throw Error(ErrorKind::MismatchedGrading, "representative has the wrong size");
    if (m.mode == Mode::TwoStep) return exp_nilpotent(x.cast<Rat>());
    MatQ prod = MatQ::Identity(n, n);
    for (int k : m.ordering) prod = (prod * exp_nilpotent(member_component(m, x, k))).eval();
    return prod;
}

std::vector<int> flag_steps(const rootdata::Grading& g) {
    std::vector<int> steps;
    int acc = 0;
    for (std::size_t i = 0; i + 1 < g.block_sizes.size(); ++i) {
        acc += g.block_sizes[i];
        steps.push_back(acc);
    }
    return steps;
}

std::vector<int> theta_pattern(const rootdata::Grading& g) {
    std::vector<int> theta;
    theta.reserve(g.diag.size());
    for (long long d : g.diag) theta.push_back(d % 2 == 0 ? 1 : -1);
    return theta;
}

kflag::PartialFlag epsilon_flag(const EpsilonMap& m, const Eigen::MatrixXi& x) {
    const std::vector<int> steps = flag_steps(m.g);
    if (steps.empty())
        throw Error(ErrorKind::DegenerateFlag,
                    "the base parabolic is the whole group; the flag variety is a point");
    kflag::PartialFlag f;
    f.steps = steps;
    f.basis = epsilon_matrix(m, x).leftCols(steps.back());
    return f;
}

/* Block-diagonal coordinates of the Levi, as (row, col) pairs. */
static std::vector<std::pair<int, int>> levi_coords(const rootdata::Grading& g) {
    std::vector<std::pair<int, int>> coords;
    int off = 0;
    for (int sz : g.block_sizes) {
        for (int r = 0; r < sz; ++r)
            for (int c = 0; c < sz; ++c) coords.emplace_back(off + r, off + c);
        off += sz;
    }
    return coords;
}

/* Columns span { A ∈ l : [A, x] = 0 } in the coordinates `coords`. */
static MatQ levi_centralizer_basis(const rootdata::Grading& g, const Eigen::MatrixXi& x,
                                   const std::vector<std::pair<int, int>>& coords) {
    const int n = g.rs.gl_n;
    const Eigen::Index nv = static_cast<Eigen::Index>(coords.size());
    MatQ sys = MatQ::Zero(static_cast<Eigen::Index>(n) * n, nv);
    for (Eigen::Index v = 0; v < nv; ++v) {
        const auto [r, c] = coords[static_cast<std::size_t>(v)];
        /* [E_rc, x] = E_rc x - x E_rc: row r picks up x(c,·), column c drops x(·,r) */
        for (int j = 0; j < n; ++j) {
            if (x(c, j) != 0) sys(static_cast<Eigen::Index>(r) * n + j, v) += Rat(x(c, j));
            if (x(j, r) != 0) sys(static_cast<Eigen::Index>(j) * n + c, v) -= Rat(x(j, r));
        }
    }
    return nullspace_exact(sys);
}

/* Columns span { A ∈ l : A F_{d_t} ⊆ F_{d_t} } in the coordinates `coords`. */
static MatQ levi_flag_stabilizer_basis(const kflag::PartialFlag& f,
                                       const std::vector<std::pair<int, int>>& coords) {
    const Eigen::Index nv = static_cast<Eigen::Index>(coords.size());
    Eigen::Index rows = 0;
    std::vector<MatQ> anns, flags;
    for (int step : f.steps) {
        MatQ ft = f.basis.leftCols(step);
        MatQ ann = left_annihilator(ft);
        rows += ann.cols() * ft.cols();
        anns.push_back(std::move(ann));
        flags.push_back(std::move(ft));
    }
    MatQ sys = MatQ::Zero(rows, nv);
    Eigen::Index row = 0;
    for (std::size_t t = 0; t < flags.size(); ++t) {
        for (Eigen::Index ac = 0; ac < anns[t].cols(); ++ac)
            for (Eigen::Index fc = 0; fc < flags[t].cols(); ++fc, ++row)
                for (Eigen::Index v = 0; v < nv; ++v) {
                    const auto [r, c] = coords[static_cast<std::size_t>(v)];
                    const Rat coeff = anns[t](r, ac) * flags[t](c, fc);
                    if (!(coeff == Rat(0))) sys(row, v) = coeff;
                }
    }
    return nullspace_exact(sys);
}

long long levi_stabilizer_dim_x(const rootdata::Grading& g, const Eigen::MatrixXi& x) {
    const auto coords = levi_coords(g);
    return levi_centralizer_basis(g, x, coords).cols();
}

long long levi_stabilizer_dim_flag(const rootdata::Grading& g, const kflag::PartialFlag& f) {
    const auto coords = levi_coords(g);
    return levi_flag_stabilizer_basis(f, coords).cols();
}

bool levi_stabilizers_equal(const rootdata::Grading& g, const Eigen::MatrixXi& x,
                            const kflag::PartialFlag& f) {
    const auto coords = levi_coords(g);
    const MatQ a = levi_centralizer_basis(g, x, coords);
    const MatQ b = levi_flag_stabilizer_basis(f, coords);
    return a.cols() == b.cols() && span_contains(a, b) && span_contains(b, a);
}

long long conormal_kernel_dim(const rootdata::Grading& g, const Eigen::MatrixXi& x) {
    const int n = g.rs.gl_n;
    std::vector<std::pair<int, int>> coords;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (g.diag[static_cast<std::size_t>(r)] - g.diag[static_cast<std::size_t>(c)] == 1)
                coords.emplace_back(r, c);
    const Eigen::Index nv = static_cast<Eigen::Index>(coords.size());
    MatQ sys = MatQ::Zero(static_cast<Eigen::Index>(n) * n, nv);
    for (Eigen::Index v = 0; v < nv; ++v) {
        const auto [r, c] = coords[static_cast<std::size_t>(v)];
        /* [x, E_rc] = x E_rc - E_rc x */
        for (int j = 0; j < n; ++j) {
            if (x(j, r) != 0) sys(static_cast<Eigen::Index>(j) * n + c, v) += Rat(x(j, r));
            if (x(c, j) != 0) sys(static_cast<Eigen::Index>(r) * n + j, v) -= Rat(x(c, j));
        }
    }
    return nv - rank_exact(sys);
}

OrbitMatch match_orbit(const EpsilonMap& m, const kflag::KFlagVariety& y,
                       const lorbits::LOrbit& o, std::uint64_t seed) {
    const int id0 = kflag::identify_orbit(y, epsilon_flag(m, o.representative));
    for (std::uint64_t k = 1; k <= 2; ++k) {
        const Eigen::MatrixXi alt = lorbits::random_representative(m.g, o, seed + k);
        const int idk = kflag::identify_orbit(y, epsilon_flag(m, alt));
        if (idk != id0)
            throw Error(ErrorKind::DimensionMismatch,
                        "representatives of one orbit landed in different target orbits");
    }
    OrbitMatch match;
    match.source = o.id;
    match.target = id0;
    match.ordering = m.ordering;
    return match;
}

}  // namespace om::eps

#include "om/kflag.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace om::kflag {

bool FlagSignature::operator<(const FlagSignature& o) const {
    return std::tie(steps, plus_dims, minus_dims, cross_dims) <
           std::tie(o.steps, o.plus_dims, o.minus_dims, o.cross_dims);
}

std::string FlagSignature::str() const {
    auto join = [](const std::vector<int>& v) {
        std::ostringstream os;
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        return os.str();
    };
    std::ostringstream os;
    os << "d(" << join(steps) << ") +(" << join(plus_dims) << ") -(" << join(minus_dims)
       << ") x(";
    for (std::size_t s = 0; s < cross_dims.size(); ++s)
        os << (s ? ";" : "") << join(cross_dims[s]);
    os << ")";
    return os.str();
}

std::vector<int> default_theta(int n, int p) {
    std::vector<int> theta(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < p; ++i) theta[static_cast<std::size_t>(i)] = 1;
    return theta;
}

std::vector<int> retained_positions(int n, const std::vector<int>& steps) {
    std::vector<int> J;
    for (int s = 0; s + 1 < n; ++s)
        if (std::find(steps.begin(), steps.end(), s + 1) == steps.end()) J.push_back(s);
    return J;
}

static MatQ eigenspace(const std::vector<int>& theta, int sign) {
    const int n = static_cast<int>(theta.size());
    int d = 0;
    for (int t : theta)
        if (t == sign) ++d;
    MatQ m = MatQ::Zero(n, d);
    int col = 0;
    for (int i = 0; i < n; ++i)
        if (theta[static_cast<std::size_t>(i)] == sign) m(i, col++) = Rat(1);
    return m;
}

MatQ plus_space(const std::vector<int>& theta) { return eigenspace(theta, 1); }
MatQ minus_space(const std::vector<int>& theta) { return eigenspace(theta, -1); }

static void validate_steps(int n, const std::vector<int>& steps) {
    if (steps.empty())
        throw Error(ErrorKind::InvalidType, "partial flag needs at least one step");
    int prev = 0;
    for (int d : steps) {
        if (d <= prev || d >= n)
            throw Error(ErrorKind::InvalidType,
                        "steps must satisfy 0 < d_1 < ... < d_m < n");
        prev = d;
    }
}

PartialFlag base_point(const clan::Clan& c, const std::vector<int>& theta,
                       const std::vector<int>& steps) {
    const int n = c.size();
    if (static_cast<int>(theta.size()) != n)
        throw Error(ErrorKind::InvalidType, "theta size does not match the clan");
    validate_steps(n, steps);

    std::vector<int> plus_pool, minus_pool;
    for (int i = 0; i < n; ++i)
        (theta[static_cast<std::size_t>(i)] == 1 ? plus_pool : minus_pool).push_back(i);

    MatQ basis = MatQ::Zero(n, n);
    std::size_t next_plus = 0, next_minus = 0;
    /* coordinates reserved at a pair opener, keyed by the closer position */
    std::map<int, std::pair<int, int>> reserved;
    for (int i = 0; i < n; ++i) {
        const int sg = c.sign[static_cast<std::size_t>(i)];
        if (sg == 1) {
            if (next_plus >= plus_pool.size())
                throw Error(ErrorKind::InvalidType, "clan does not fit theta: V+ exhausted");
            basis(plus_pool[next_plus++], i) = Rat(1);
        } else if (sg == -1) {
            if (next_minus >= minus_pool.size())
                throw Error(ErrorKind::InvalidType, "clan does not fit theta: V- exhausted");
            basis(minus_pool[next_minus++], i) = Rat(1);
        } else {
            const int mate = c.mate[static_cast<std::size_t>(i)];
            if (mate > i) {
                if (next_plus >= plus_pool.size() || next_minus >= minus_pool.size())
                    throw Error(ErrorKind::InvalidType,
                                "clan does not fit theta: pair coordinates exhausted");
                const int e = plus_pool[next_plus++], f = minus_pool[next_minus++];
                reserved[mate] = {e, f};
                basis(e, i) = Rat(1);
                basis(f, i) = Rat(1);
            } else {
                const auto [e, f] = reserved.at(i);
                basis(e, i) = Rat(1);
                basis(f, i) = Rat(-1);
            }
        }
    }

    PartialFlag f;
    f.steps = steps;
    f.basis = basis.leftCols(steps.back());
    return f;
}

static MatQ apply_theta(const MatQ& m, const std::vector<int>& theta) {
    MatQ out = m;
    for (int i = 0; i < out.rows(); ++i)
        if (theta[static_cast<std::size_t>(i)] == -1) out.row(i) = -out.row(i);
    return out;
}

FlagSignature flag_signature(const PartialFlag& f, const std::vector<int>& theta) {
    const int n = f.n();
    if (static_cast<int>(theta.size()) != n)
        throw Error(ErrorKind::InvalidType, "theta size does not match the flag");
    validate_steps(n, f.steps);
    if (f.basis.cols() != f.steps.back())
        throw Error(ErrorKind::DegenerateFlag, "flag basis is missing columns");

    const MatQ vplus = plus_space(theta), vminus = minus_space(theta);
    const int m = static_cast<int>(f.steps.size());

    FlagSignature sig;
    sig.steps = f.steps;
    std::vector<MatQ> fstep;
    for (int t = 0; t < m; ++t) {
        MatQ ft = f.basis.leftCols(f.steps[static_cast<std::size_t>(t)]);
        if (rank_exact(ft) != ft.cols())
            throw Error(ErrorKind::DegenerateFlag,
                        "flag step " + std::to_string(f.steps[static_cast<std::size_t>(t)]) +
                            " has deficient rank");
        fstep.push_back(std::move(ft));
    }
    for (int t = 0; t < m; ++t) {
        sig.plus_dims.push_back(static_cast<int>(intersection_dim(fstep[t], vplus)));
        sig.minus_dims.push_back(static_cast<int>(intersection_dim(fstep[t], vminus)));
    }
    for (int s = 0; s < m; ++s) {
        std::vector<int> row;
        for (int t = s; t < m; ++t)
            row.push_back(static_cast<int>(sum_dim(fstep[s], apply_theta(fstep[t], theta))));
        sig.cross_dims.push_back(std::move(row));
    }
    return sig;
}

long long stabilizer_dimension(const PartialFlag& f, const std::vector<int>& theta) {
    const int n = f.n();
    /* Variables: entries k(i,j) with theta_i == theta_j. */
    std::vector<std::pair<int, int>> vars;
    Eigen::MatrixXi var_id = Eigen::MatrixXi::Constant(n, n, -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (theta[static_cast<std::size_t>(i)] == theta[static_cast<std::size_t>(j)]) {
                var_id(i, j) = static_cast<int>(vars.size());
                vars.emplace_back(i, j);
            }

    /* k F ⊆ F  ⟺  Cᵀ k v = 0 for every annihilator column c and flag
     * column v: one linear equation  Σ_{ij} c_i v_j k_{ij} = 0  each. */
    long long rows = 0;
    std::vector<MatQ> anns, flags;
    for (int step : f.steps) {
        MatQ ft = f.basis.leftCols(step);
        MatQ ann = left_annihilator(ft);
        rows += ann.cols() * ft.cols();
        anns.push_back(std::move(ann));
        flags.push_back(std::move(ft));
    }
    MatQ a = MatQ::Zero(rows, static_cast<Eigen::Index>(vars.size()));
    Eigen::Index row = 0;
    for (std::size_t t = 0; t < flags.size(); ++t) {
        const MatQ& ft = flags[t];
        const MatQ& ann = anns[t];
        for (Eigen::Index cc = 0; cc < ann.cols(); ++cc)
            for (Eigen::Index vc = 0; vc < ft.cols(); ++vc, ++row)
                for (std::size_t vi = 0; vi < vars.size(); ++vi) {
                    const auto [ki, kj] = vars[vi];
                    const Rat coeff = ann(ki, cc) * ft(kj, vc);
                    if (!(coeff == Rat(0))) a(row, static_cast<Eigen::Index>(vi)) = coeff;
                }
    }
    return static_cast<long long>(vars.size()) - rank_exact(a);
}

KFlagVariety build_kflag(int p, int q, const std::vector<int>& steps,
                         std::vector<int> theta) {
    const int n = p + q;
    if (p < 0 || q < 0 || n <= 0)
        throw Error(ErrorKind::InvalidType, "need p, q >= 0 and p + q > 0");
    validate_steps(n, steps);
    if (theta.empty()) theta = default_theta(n, p);
    if (static_cast<int>(theta.size()) != n)
        throw Error(ErrorKind::InvalidType, "theta must have p + q entries");
    if (std::count(theta.begin(), theta.end(), 1) != p ||
        std::count(theta.begin(), theta.end(), -1) != n - p)
        throw Error(ErrorKind::InvalidType, "theta signature must match (p, q)");

    KFlagVariety y;
    y.n = n;
    y.p = p;
    y.q = q;
    y.steps = steps;
    y.theta = theta;
    y.J = retained_positions(n, steps);
    y.block = klv::build_block(p, q);
    y.reduction = klv::reduce_to_parabolic(y.block, y.J);

    const int ncls = static_cast<int>(y.reduction.members.size());
    std::vector<KOrbit> orbits;
    for (int c = 0; c < ncls; ++c) {
        KOrbit o;
        o.cls = c;
        o.lift = y.block.clans[static_cast<std::size_t>(y.reduction.lift[static_cast<std::size_t>(c)])];
        o.base_point = base_point(o.lift, theta, steps);
        o.signature = flag_signature(o.base_point, theta);
        o.dimension = y.dim_K() - stabilizer_dimension(o.base_point, theta);
        orbits.push_back(std::move(o));
    }
    std::sort(orbits.begin(), orbits.end(), [](const KOrbit& a, const KOrbit& b) {
        return std::tie(a.dimension, a.signature) < std::tie(b.dimension, b.signature);
    });
    y.cls_to_orbit.assign(static_cast<std::size_t>(ncls), -1);
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        orbits[i].id = static_cast<int>(i);
        auto [it, fresh] = y.by_signature.emplace(orbits[i].signature, static_cast<int>(i));
        if (!fresh)
            throw Error(ErrorKind::DegenerateFlag,
                        "two distinct orbit classes share the signature " +
                            orbits[i].signature.str());
        y.cls_to_orbit[static_cast<std::size_t>(orbits[i].cls)] = static_cast<int>(i);
    }
    y.orbits = std::move(orbits);
    return y;
}

int identify_orbit(const KFlagVariety& y, const PartialFlag& f) {
    if (f.steps != y.steps)
        throw Error(ErrorKind::MismatchedGrading,
                    "flag steps do not match this flag variety");
    const FlagSignature sig = flag_signature(f, y.theta);
    auto it = y.by_signature.find(sig);
    if (it == y.by_signature.end())
        throw Error(ErrorKind::NotInY, "no enumerated orbit has signature " + sig.str());
    return it->second;
}

bool korbit_closure_leq(const KFlagVariety& y, int orbit_psi, int orbit_gamma) {
    const KOrbit& a = y.orbits[static_cast<std::size_t>(orbit_psi)];
    const KOrbit& b = y.orbits[static_cast<std::size_t>(orbit_gamma)];
    return klv::partial_closure_leq(y.block, y.reduction, a.cls, b.cls);
}

Poly partial_flag_polynomial(const KFlagVariety& y, int orbit_psi, int orbit_gamma) {
    const KOrbit& a = y.orbits[static_cast<std::size_t>(orbit_psi)];
    const KOrbit& b = y.orbits[static_cast<std::size_t>(orbit_gamma)];
    return klv::partial_klv(y.block, y.reduction, a.cls, b.cls);
}

}  // namespace om::kflag

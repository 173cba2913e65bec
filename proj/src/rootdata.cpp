#include "om/rootdata.hpp"

#include <algorithm>
#include <bitset>
#include <numeric>
#include <set>
#include <sstream>

namespace om::rootdata {

std::string type_name(CartanType t) {
    switch (t) {
        case CartanType::GL: return "gl";
        case CartanType::A: return "a";
        case CartanType::B: return "b";
        case CartanType::C: return "c";
        case CartanType::D: return "d";
        case CartanType::E6: return "e6";
        case CartanType::E7: return "e7";
        case CartanType::E8: return "e8";
        case CartanType::F4: return "f4";
        case CartanType::G2: return "g2";
    }
    return "?";
}

CartanType parse_type(const std::string& s) {
    std::string t;
    for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "gl") return CartanType::GL;
    if (t == "a") return CartanType::A;
    if (t == "b") return CartanType::B;
    if (t == "c") return CartanType::C;
    if (t == "d") return CartanType::D;
    if (t == "e6") return CartanType::E6;
    if (t == "e7") return CartanType::E7;
    if (t == "e8") return CartanType::E8;
    if (t == "f4") return CartanType::F4;
    if (t == "g2") return CartanType::G2;
    throw Error(ErrorKind::ParseError, "unknown cartan type '" + s + "'");
}

namespace {

/* cartan(i,j) = <alpha_j, alpha_i^vee>, Bourbaki numbering. */
Eigen::MatrixXi cartan_matrix(CartanType type, int rank) {
    auto chain = [](int n) {
        Eigen::MatrixXi c = Eigen::MatrixXi::Identity(n, n) * 2;
        for (int i = 0; i + 1 < n; ++i) {
            c(i, i + 1) = -1;
            c(i + 1, i) = -1;
        }
        return c;
    };
    switch (type) {
        case CartanType::GL:
        case CartanType::A: {
            if (rank < 0 || (type == CartanType::A && rank < 1))
                throw Error(ErrorKind::InvalidType, "type A needs rank >= 1");
            return chain(rank);
        }
        case CartanType::B: {
            if (rank < 2) throw Error(ErrorKind::InvalidType, "type B needs rank >= 2");
            Eigen::MatrixXi c = chain(rank);
            c(rank - 1, rank - 2) = -2;  // alpha_rank short
            return c;
        }
        case CartanType::C: {
            if (rank < 2) throw Error(ErrorKind::InvalidType, "type C needs rank >= 2");
            Eigen::MatrixXi c = chain(rank);
            c(rank - 2, rank - 1) = -2;  // alpha_rank long
            return c;
        }
        case CartanType::D: {
            if (rank < 3) throw Error(ErrorKind::InvalidType, "type D needs rank >= 3");
            Eigen::MatrixXi c = chain(rank);
            c(rank - 1, rank - 2) = 0;
            c(rank - 2, rank - 1) = 0;
            c(rank - 1, rank - 3) = -1;
            c(rank - 3, rank - 1) = -1;
            return c;
        }
        case CartanType::G2: {
            if (rank != 2) throw Error(ErrorKind::InvalidType, "type G requires rank 2");
            Eigen::MatrixXi c(2, 2);
            // alpha_1 short, alpha_2 long
            c << 2, -3, -1, 2;
            return c;
        }
        case CartanType::F4: {
            if (rank != 4) throw Error(ErrorKind::InvalidType, "type F requires rank 4");
            Eigen::MatrixXi c(4, 4);
            // alpha_1, alpha_2 long; alpha_3, alpha_4 short
            c << 2, -1, 0, 0,
                -1, 2, -1, 0,
                 0, -2, 2, -1,
                 0, 0, -1, 2;
            return c;
        }
        case CartanType::E6:
        case CartanType::E7:
        case CartanType::E8: {
            int n = type == CartanType::E6 ? 6 : type == CartanType::E7 ? 7 : 8;
            if (rank != n)
                throw Error(ErrorKind::InvalidType,
                            "type E" + std::to_string(n) + " requires rank " + std::to_string(n));
            // Bourbaki: node 2 hangs off node 4 of the chain 1-3-4-5-...-n.
            Eigen::MatrixXi c = Eigen::MatrixXi::Identity(n, n) * 2;
            auto bond = [&](int i, int j) {
                c(i - 1, j - 1) = -1;
                c(j - 1, i - 1) = -1;
            };
            bond(1, 3);
            bond(3, 4);
            bond(2, 4);
            for (int i = 4; i < n; ++i) bond(i, i + 1);
            return c;
        }
    }
    throw Error(ErrorKind::InvalidType, "unsupported type");
}

struct VecLess {
    bool operator()(const Eigen::VectorXi& a, const Eigen::VectorXi& b) const {
        for (int i = 0; i < a.size(); ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return false;
    }
};

}  // namespace

RootSystem build_root_system(CartanType type, int rank) {
    RootSystem rs;
    rs.type = type;
    if (type == CartanType::GL) {
        if (rank < 1) throw Error(ErrorKind::InvalidType, "gl needs n >= 1");
        rs.gl_n = rank;
        rs.rank = rank - 1;
    } else {
        rs.rank = rank;
    }
    rs.cartan = cartan_matrix(type, rs.rank);
    const int n = rs.rank;

    // Reflection closure on (root, coroot) pairs in simple(-co)root coordinates.
    std::map<Eigen::VectorXi, Eigen::VectorXi, VecLess> closed;
    std::vector<std::pair<Eigen::VectorXi, Eigen::VectorXi>> frontier;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXi e = Eigen::VectorXi::Zero(n);
        e[i] = 1;
        closed[e] = e;
        frontier.emplace_back(e, e);
    }
    while (!frontier.empty()) {
        auto [r, c] = frontier.back();
        frontier.pop_back();
        for (int i = 0; i < n; ++i) {
            long long pr = 0, pc = 0;  // <r, alpha_i^vee> and <alpha_i, c-as-coroot>
            for (int j = 0; j < n; ++j) {
                pr += static_cast<long long>(r[j]) * rs.cartan(i, j);
                pc += static_cast<long long>(c[j]) * rs.cartan(j, i);
            }
            Eigen::VectorXi r2 = r, c2 = c;
            r2[i] -= static_cast<int>(pr);
            c2[i] -= static_cast<int>(pc);
            if (closed.emplace(r2, c2).second) frontier.emplace_back(r2, c2);
        }
    }

    std::vector<Eigen::VectorXi> pos;
    for (const auto& [r, c] : closed) {
        bool nonneg = true;
        for (int i = 0; i < n; ++i)
            if (r[i] < 0) nonneg = false;
        if (nonneg) pos.push_back(r);
    }
    std::sort(pos.begin(), pos.end(), [](const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
        int ha = a.sum(), hb = b.sum();
        if (ha != hb) return ha < hb;
        return VecLess{}(a, b);
    });
    rs.n_positive = static_cast<int>(pos.size());
    for (const auto& r : pos) {
        rs.roots.push_back(r);
        rs.coroots.push_back(closed.at(r));
    }
    for (const auto& r : pos) {
        rs.roots.push_back(-r);
        rs.coroots.push_back(-closed.at(r));
    }
    return rs;
}

std::string Grading::key() const {
    std::ostringstream os;
    os << type_name(rs.type) << ":" << (is_gl() ? rs.gl_n : rs.rank) << ":";
    for (long long m : simple_pairing) os << m << ",";
    return os.str();
}

Grading grade_by_lambda(const RootSystem& rs, const std::vector<Rat>& lambda) {
    Grading g;
    g.rs = rs;
    g.lambda = lambda;
    const int n = rs.rank;

    if (rs.type == CartanType::GL) {
        if (static_cast<int>(lambda.size()) != rs.gl_n)
            throw Error(ErrorKind::ParseError,
                        "gl(" + std::to_string(rs.gl_n) + ") expects " +
                            std::to_string(rs.gl_n) + " diagonal entries");
        for (std::size_t i = 0; i + 1 < lambda.size(); ++i) {
            Rat d = lambda[i] - lambda[i + 1];
            if (!d.is_integer())
                throw Error(ErrorKind::NonIntegralLambda,
                            "diagonal gap " + d.str() + " at position " + std::to_string(i + 1));
            if (d < Rat(0))
                throw Error(ErrorKind::NonDominantLambda,
                            "diagonal not weakly decreasing at position " + std::to_string(i + 1));
        }
        // Central shift: make the smallest entry 0 (it only changes the center).
        Rat min = lambda.back();
        for (const Rat& v : lambda)
            if (v < min) min = v;
        for (const Rat& v : lambda) {
            Rat shifted = v - min;
            if (!shifted.is_integer())
                throw Error(ErrorKind::NonIntegralLambda,
                            "entry " + v.str() + " is not an integer after the central shift");
            g.diag.push_back(shifted.as_integer());
        }
        for (std::size_t i = 0; i < g.diag.size();) {
            std::size_t j = i;
            while (j < g.diag.size() && g.diag[j] == g.diag[i]) ++j;
            g.block_sizes.push_back(static_cast<int>(j - i));
            g.block_values.push_back(g.diag[i]);
            i = j;
        }
        for (std::size_t j = 0; j + 1 < g.block_values.size(); ++j)
            if (g.block_values[j] - g.block_values[j + 1] == 1)
                g.junctions.push_back(static_cast<int>(j));
        for (long long v : g.diag)
            (v % 2 == 0 ? g.p : g.q)++;
        for (int i = 0; i < n; ++i) g.simple_pairing.push_back(g.diag[i] - g.diag[i + 1]);
    } else {
        if (static_cast<int>(lambda.size()) != n)
            throw Error(ErrorKind::ParseError,
                        "type " + type_name(rs.type) + " rank " + std::to_string(n) + " expects " +
                            std::to_string(n) + " simple-root pairings");
        for (const Rat& v : lambda) {
            if (!v.is_integer())
                throw Error(ErrorKind::NonIntegralLambda, "pairing " + v.str() + " is not an integer");
            if (v < Rat(0))
                throw Error(ErrorKind::NonDominantLambda, "pairing " + v.str() + " is negative");
            g.simple_pairing.push_back(v.as_integer());
        }
    }

    for (const auto& r : rs.roots) {
        long long gr = 0;
        for (int i = 0; i < n; ++i) gr += static_cast<long long>(r[i]) * g.simple_pairing[i];
        g.grade.push_back(gr);
        g.eigenspace_dim[gr]++;
    }
    g.eigenspace_dim[0] += rs.type == CartanType::GL ? rs.gl_n : rs.rank;
    return g;
}

std::string status_name(FamilyStatus s) {
    switch (s) {
        case FamilyStatus::Valid: return "Valid";
        case FamilyStatus::FailsKey0: return "FailsKey0";
        case FamilyStatus::FailsKey: return "FailsKey";
        case FamilyStatus::NoFamilyExists: return "NoFamilyExists";
    }
    return "?";
}

std::vector<int> base_levi_set(const Grading& g) {
    std::vector<int> j0;
    for (int i = 0; i < g.rs.rank; ++i)
        if (g.simple_pairing[i] == 0) j0.push_back(i);
    return j0;
}

std::vector<int> levi_root_indices(const Grading& g, const std::vector<int>& J) {
    std::vector<bool> in(static_cast<std::size_t>(g.rs.rank), false);
    for (int i : J) in[static_cast<std::size_t>(i)] = true;
    std::vector<int> out;
    for (std::size_t r = 0; r < g.rs.roots.size(); ++r) {
        bool ok = true;
        const auto& v = g.rs.roots[r];
        for (int i = 0; i < g.rs.rank && ok; ++i)
            if (v[i] != 0 && !in[static_cast<std::size_t>(i)]) ok = false;
        if (ok) out.push_back(static_cast<int>(r));
    }
    return out;
}

namespace {

constexpr std::size_t kMaxNeg1 = 256;  // more than the largest g(-1) at rank <= 8
using RootMask = std::bitset<kMaxNeg1>;

struct Candidate {
    std::vector<int> J;        // simple indices
    RootMask covers;           // positions within the g(-1) root list
    std::vector<int> covered;  // root indices (into rs.roots)
};

/* Admissible: J strictly above J0, Levi meets g(-1), Levi avoids g(<=-2). */
std::vector<Candidate> admissible_candidates(const Grading& g, const std::vector<int>& neg1,
                                             const std::map<int, int>& neg1_pos) {
    const int rank = g.rs.rank;
    std::vector<int> j0 = base_levi_set(g);
    std::vector<bool> in_j0(static_cast<std::size_t>(rank), false);
    for (int i : j0) in_j0[static_cast<std::size_t>(i)] = true;
    std::vector<int> extra;  // simple indices not in J0
    for (int i = 0; i < rank; ++i)
        if (!in_j0[static_cast<std::size_t>(i)]) extra.push_back(i);

    std::vector<Candidate> out;
    const std::size_t total = std::size_t{1} << extra.size();
    for (std::size_t mask = 1; mask < total; ++mask) {
        std::vector<int> J = j0;
        for (std::size_t b = 0; b < extra.size(); ++b)
            if (mask & (std::size_t{1} << b)) J.push_back(extra[b]);
        std::sort(J.begin(), J.end());
        Candidate c;
        c.J = J;
        bool bad = false;
        for (int r : levi_root_indices(g, J)) {
            long long gr = g.grade[static_cast<std::size_t>(r)];
            if (gr == -1) {
                c.covers.set(static_cast<std::size_t>(neg1_pos.at(r)));
                c.covered.push_back(r);
            } else if (gr <= -2) {
                bad = true;  // Levi ∩ ubar sticks out of g(-1): (key) cannot hold
                break;
            }
        }
        if (bad || c.covered.empty()) continue;
        out.push_back(std::move(c));
    }
    (void)neg1;
    // Deterministic order: smaller Levis first, then lexicographic.
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.J.size() != b.J.size()) return a.J.size() < b.J.size();
        return a.J < b.J;
    });
    return out;
}

bool exact_cover(const std::vector<Candidate>& cands, std::size_t n_targets, RootMask used,
                 std::vector<std::size_t>& chosen) {
    std::size_t first = n_targets;
    for (std::size_t i = 0; i < n_targets; ++i)
        if (!used.test(i)) { first = i; break; }
    if (first == n_targets) return true;
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
        const Candidate& c = cands[ci];
        if (!c.covers.test(first)) continue;
        if ((c.covers & used).any()) continue;
        chosen.push_back(ci);
        if (exact_cover(cands, n_targets, used | c.covers, chosen)) return true;
        chosen.pop_back();
    }
    return false;
}

/* Keep only candidates minimal under containment of J. */
std::vector<Candidate> minimal_only(const std::vector<Candidate>& cands) {
    std::vector<Candidate> out;
    for (const auto& c : cands) {
        bool minimal = true;
        for (const auto& d : cands) {
            if (d.J.size() >= c.J.size()) continue;
            if (std::includes(c.J.begin(), c.J.end(), d.J.begin(), d.J.end())) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(c);
    }
    return out;
}

}  // namespace

ParabolicFamily minimal_parabolic_family(const Grading& g) {
    ParabolicFamily fam;
    fam.grading_key = g.key();

    std::vector<int> neg1;
    for (std::size_t r = 0; r < g.rs.roots.size(); ++r)
        if (g.grade[r] == -1) neg1.push_back(static_cast<int>(r));
    if (neg1.empty()) {
        // Both hypotheses are vacuous: the empty family is valid and epsilon
        // degenerates to the constant map x = 0 -> standard flag.
        fam.status = FamilyStatus::Valid;
        fam.diagnostic = "g(-1) = 0; empty family, hypotheses vacuous";
        return fam;
    }
    if (neg1.size() > kMaxNeg1)
        throw Error(ErrorKind::UnsupportedType, "g(-1) too large for the family search");

    std::map<int, int> neg1_pos;
    for (std::size_t i = 0; i < neg1.size(); ++i) neg1_pos[neg1[i]] = static_cast<int>(i);

    std::vector<Candidate> all = admissible_candidates(g, neg1, neg1_pos);
    std::vector<Candidate> minimal = minimal_only(all);

    std::vector<std::size_t> chosen;
    const std::vector<Candidate>* pool = &minimal;
    bool found = exact_cover(minimal, neg1.size(), RootMask{}, chosen);
    if (!found) {
        // Antichain fallback: allow non-minimal members before giving up.
        chosen.clear();
        pool = &all;
        found = exact_cover(all, neg1.size(), RootMask{}, chosen);
    }

    if (!found) {
        fam.status = FamilyStatus::NoFamilyExists;
        for (const auto& c : minimal) {
            fam.members.push_back(c.J);
            fam.covered.push_back(c.covered);
        }
        std::ostringstream os;
        os << "no exact cover of the " << neg1.size() << " roots of g(-1) by the " << all.size()
           << " admissible Levi intersections";
        if (all.empty()) os << " (every parabolic properly above p meets g(<=-2) or misses g(-1))";
        fam.diagnostic = os.str();
        return fam;
    }

    struct Member {
        std::vector<int> J;
        std::vector<int> covered;
        bool tail;
        int min_new;
    };
    std::vector<int> j0 = base_levi_set(g);
    std::vector<Member> ms;
    for (std::size_t ci : chosen) {
        const Candidate& c = (*pool)[ci];
        Member m;
        m.J = c.J;
        m.covered = c.covered;
        /* A member whose Levi picks up the ambient sp/so tail factor is
         * distinguished and must come first; this can only happen in the
         * types whose last simple root carries that factor. */
        const bool tail_type = g.rs.type == CartanType::B || g.rs.type == CartanType::C ||
                               g.rs.type == CartanType::D;
        m.tail = tail_type &&
                 std::find(c.J.begin(), c.J.end(), g.rs.rank - 1) != c.J.end() &&
                 std::find(j0.begin(), j0.end(), g.rs.rank - 1) == j0.end();
        m.min_new = g.rs.rank;
        for (int i : c.J)
            if (std::find(j0.begin(), j0.end(), i) == j0.end()) m.min_new = std::min(m.min_new, i);
        ms.push_back(std::move(m));
    }
    // Distinguished tail member first, then ascending by the added simple index.
    std::sort(ms.begin(), ms.end(), [](const Member& a, const Member& b) {
        if (a.tail != b.tail) return a.tail;
        return a.min_new < b.min_new;
    });
    for (auto& m : ms) {
        fam.members.push_back(std::move(m.J));
        fam.covered.push_back(std::move(m.covered));
    }
    fam.status = FamilyStatus::Valid;
    return fam;
}

FamilyStatus check_hypotheses(const Grading& g, const ParabolicFamily& fam, std::string* diag) {
    if (fam.grading_key != g.key())
        throw Error(ErrorKind::MismatchedGrading,
                    "family was built against grading " + fam.grading_key + ", not " + g.key());
    std::vector<int> j0 = base_levi_set(g);
    for (const auto& J : fam.members) {
        if (!std::includes(J.begin(), J.end(), j0.begin(), j0.end()) || J.size() <= j0.size())
            throw Error(ErrorKind::MismatchedGrading,
                        "family member does not properly contain p");
        for (int i : J)
            if (i < 0 || i >= g.rs.rank)
                throw Error(ErrorKind::MismatchedGrading, "simple-root index out of range");
    }

    std::map<int, int> cover_count;
    std::vector<int> uncovered, excess;
    bool key0 = true;
    for (const auto& J : fam.members) {
        bool meets = false;
        for (int r : levi_root_indices(g, J)) {
            long long gr = g.grade[static_cast<std::size_t>(r)];
            if (gr == -1) {
                meets = true;
                cover_count[r]++;
            } else if (gr <= -2) {
                excess.push_back(r);
            }
        }
        if (!meets) key0 = false;
    }
    if (!key0) {
        if (diag) *diag = "some member's Levi misses g(-1)";
        return FamilyStatus::FailsKey0;
    }
    std::vector<int> doubled;
    for (std::size_t r = 0; r < g.rs.roots.size(); ++r) {
        if (g.grade[r] != -1) continue;
        auto it = cover_count.find(static_cast<int>(r));
        if (it == cover_count.end()) uncovered.push_back(static_cast<int>(r));
        else if (it->second > 1) doubled.push_back(static_cast<int>(r));
    }
    if (!uncovered.empty() || !doubled.empty() || !excess.empty()) {
        if (diag) {
            std::ostringstream os;
            os << "uncovered=" << uncovered.size() << " doubly_covered=" << doubled.size()
               << " below_grade_-1=" << excess.size();
            *diag = os.str();
        }
        return FamilyStatus::FailsKey;
    }
    if (diag) diag->clear();
    return FamilyStatus::Valid;
}

std::vector<int> gl_member_junctions(const Grading& g, const std::vector<int>& member) {
    if (!g.is_gl())
        throw Error(ErrorKind::UnsupportedType, "gl_member_junctions requires a gl grading");
    std::vector<int> j0 = base_levi_set(g);
    std::vector<int> out;
    // Block boundary t (0-based, between blocks t and t+1) corresponds to
    // simple index (n_1 + ... + n_{t+1}) - 1.
    long long acc = 0;
    for (std::size_t t = 0; t + 1 < g.block_sizes.size(); ++t) {
        acc += g.block_sizes[t];
        int simple = static_cast<int>(acc) - 1;
        if (std::find(member.begin(), member.end(), simple) != member.end() &&
            std::find(j0.begin(), j0.end(), simple) == j0.end())
            out.push_back(static_cast<int>(t));
    }
    return out;
}

}  // namespace om::rootdata

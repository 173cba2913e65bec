#include "om/klvengine.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "om/error.hpp"

namespace om::klv {

namespace {

using Elt = std::map<int, Poly>;

void add_to(Elt& e, int g, const Poly& c) {
    if (c.degree() < 0) return;
    Poly& slot = e[g];
    slot += c;
    if (slot.degree() < 0) e.erase(g);
}

int idx_of(const Block& b, const Clan& c) {
    auto it = b.index.find(c);
    if (it == b.index.end())
        throw Error(ErrorKind::RecursionIncomplete, "clan escaped its block: " + c.str());
    return it->second;
}

}  // namespace

std::map<int, Poly> apply_wall(const Block& b, int s, const std::map<int, Poly>& elt) {
    const Poly q1 = Poly::q_power(1);
    const Poly qm1 = q1 - Poly(1);  // q - 1
    const Poly qm2 = q1 - Poly(2);  // q - 2
    Elt out;
    for (const auto& [g, coef] : elt) {
        const Clan& c = b.clans[static_cast<std::size_t>(g)];
        switch (clan::move_kind(c, s)) {
            case clan::MoveKind::CompactImaginary:
                add_to(out, g, coef * q1);
                break;
            case clan::MoveKind::NoncompactImaginaryI:
                add_to(out, idx_of(b, clan::cross(c, s)), coef);
                add_to(out, idx_of(b, clan::cayley_up(c, s)), coef);
                break;
            case clan::MoveKind::RealI: {
                auto [pm, mp] = clan::cayley_down(c, s);
                add_to(out, g, coef * qm2);
                add_to(out, idx_of(b, pm), coef * qm1);
                add_to(out, idx_of(b, mp), coef * qm1);
                break;
            }
            case clan::MoveKind::ComplexAscent:
                add_to(out, idx_of(b, clan::cross(c, s)), coef);
                break;
            case clan::MoveKind::ComplexDescent:
                add_to(out, idx_of(b, clan::cross(c, s)), coef * q1);
                add_to(out, g, coef * qm1);
                break;
        }
    }
    return out;
}

Block build_block(int p, int q) {
    Block b;
    b.p = p;
    b.q = q;
    b.clans = clan::generate_clans(p, q);
    for (std::size_t i = 0; i < b.clans.size(); ++i) {
        b.index[b.clans[i]] = static_cast<int>(i);
        b.len.push_back(clan::length(b.clans[i]));
    }

    /* Closure sets by descent recursion, shared memo. */
    std::map<Clan, std::set<Clan>> memo;
    b.closure.resize(b.clans.size());
    for (std::size_t i = 0; i < b.clans.size(); ++i)
        for (const Clan& psi : clan::closure_set(b.clans[i], memo))
            b.closure[i].insert(idx_of(b, psi));

    /* C-basis in increasing length order (the list is so sorted). */
    b.c_exp.resize(b.clans.size());
    std::vector<Elt> cbasis(b.clans.size());
    for (std::size_t gi = 0; gi < b.clans.size(); ++gi) {
        const Clan& gamma = b.clans[gi];
        const int lg = b.len[gi];
        Elt N;
        if (gamma.is_sign_string()) {
            N[static_cast<int>(gi)] = Poly(1);
        } else {
            auto s = clan::find_descent(gamma);
            if (!s)
                throw Error(ErrorKind::RecursionIncomplete,
                            "no descent for non-closed clan " + gamma.str());
            Clan delta = clan::move_kind(gamma, *s) == clan::MoveKind::RealI
                             ? clan::cayley_down(gamma, *s).first
                             : clan::cross(gamma, *s);
            int di = idx_of(b, delta);
            if (b.len[static_cast<std::size_t>(di)] != lg - 1)
                throw Error(ErrorKind::RecursionIncomplete,
                            "descent does not lower length at " + gamma.str());
            N = apply_wall(b, *s, cbasis[static_cast<std::size_t>(di)]);
            for (const auto& [g, c] : cbasis[static_cast<std::size_t>(di)]) add_to(N, g, c);

            /* Peel corrections top-down by decreasing length. */
            std::vector<int> support;
            for (const auto& [g, c] : N)
                if (g != static_cast<int>(gi)) support.push_back(g);
            std::sort(support.begin(), support.end(), [&](int a, int c2) {
                return b.len[static_cast<std::size_t>(a)] > b.len[static_cast<std::size_t>(c2)];
            });
            for (int psi : support) {
                auto it = N.find(psi);
                if (it == N.end()) continue;
                const int gap = lg - b.len[static_cast<std::size_t>(psi)];
                const int cap = (gap - 1) / 2;  // degree bound for P_{ψ,γ}
                const Poly& coef = it->second;
                if (coef.degree() <= cap) continue;
                if (gap % 2 != 0)
                    throw Error(ErrorKind::RecursionIncomplete,
                                "odd-gap degree violation under " + gamma.str() + " at " +
                                    b.clans[static_cast<std::size_t>(psi)].str());
                if (coef.degree() != gap / 2 || coef.coeff(gap / 2) <= 0)
                    throw Error(ErrorKind::RecursionIncomplete,
                                "correction at " + b.clans[static_cast<std::size_t>(psi)].str() +
                                    " under " + gamma.str() + " is not a single top monomial");
                Poly mu = Poly::q_power(gap / 2, coef.coeff(gap / 2));
                for (const auto& [g, c] : cbasis[static_cast<std::size_t>(psi)])
                    add_to(N, g, Poly(0) - mu * c);
                if (auto it2 = N.find(psi); it2 != N.end() && it2->second.degree() > cap)
                    throw Error(ErrorKind::RecursionIncomplete,
                                "correction failed to restore the degree bound at " +
                                    b.clans[static_cast<std::size_t>(psi)].str());
            }
        }

        /* Sanity: monic at γ, nonnegative with positive constant term, and
         * support equal to the orbit closure. */
        auto self = N.find(static_cast<int>(gi));
        if (self == N.end() || !(self->second == Poly(1)))
            throw Error(ErrorKind::RecursionIncomplete, "C_γ not monic at " + gamma.str());
        std::set<int> supp;
        for (const auto& [g, c] : N) {
            if (!c.nonnegative() || c.coeff(0) <= 0)
                throw Error(ErrorKind::RecursionIncomplete,
                            "coefficient of " + b.clans[static_cast<std::size_t>(g)].str() +
                                " in C_" + gamma.str() + " is not positive: " + c.str());
            supp.insert(g);
        }
        if (supp != b.closure[gi])
            throw Error(ErrorKind::RecursionIncomplete,
                        "support of C_" + gamma.str() + " differs from the orbit closure");

        for (const auto& [g, c] : N) b.c_exp[gi].emplace_back(g, c);
        cbasis[gi] = std::move(N);
    }
    return b;
}

Poly klv_polynomial(const Block& b, int psi, int gamma) {
    for (const auto& [g, c] : b.c_exp[static_cast<std::size_t>(gamma)])
        if (g == psi) return c;
    return Poly();
}

Eigen::MatrixXi multiplicity_matrix(const Block& b) {
    const int n = static_cast<int>(b.clans.size());
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
    for (int g = 0; g < n; ++g)
        for (const auto& [psi, c] : b.c_exp[static_cast<std::size_t>(g)]) {
            long long v = c.eval_at_one();
            int gap = b.len[static_cast<std::size_t>(g)] - b.len[static_cast<std::size_t>(psi)];
            long long signed_v = (gap % 2 == 0) ? v : -v;
            if (signed_v > 1000000000LL || signed_v < -1000000000LL)
                throw Error(ErrorKind::RecursionIncomplete, "multiplicity overflow");
            m(psi, g) = static_cast<int>(signed_v);
        }
    return m;
}

ParabolicReduction reduce_to_parabolic(const Block& b, const std::vector<int>& J) {
    const int n = static_cast<int>(b.clans.size());
    ParabolicReduction r;
    r.J = J;
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int c) { parent[static_cast<std::size_t>(find(a))] = find(c); };

    for (int g = 0; g < n; ++g)
        for (int s : J)
            for (const Clan& psi : clan::class_s(b.clans[static_cast<std::size_t>(g)], s))
                unite(g, b.index.at(psi));

    std::map<int, int> root_to_cls;
    r.cls.assign(static_cast<std::size_t>(n), -1);
    for (int g = 0; g < n; ++g) {
        int root = find(g);
        auto [it, fresh] = root_to_cls.emplace(root, static_cast<int>(r.members.size()));
        if (fresh) r.members.emplace_back();
        r.cls[static_cast<std::size_t>(g)] = it->second;
        r.members[static_cast<std::size_t>(it->second)].push_back(g);
    }

    for (const auto& mem : r.members) {
        int best = mem.front();
        int ties = 1;
        for (std::size_t i = 1; i < mem.size(); ++i) {
            int li = b.len[static_cast<std::size_t>(mem[i])];
            int lb = b.len[static_cast<std::size_t>(best)];
            if (li > lb) {
                best = mem[i];
                ties = 1;
            } else if (li == lb) {
                ++ties;
            }
        }
        if (ties != 1 && mem.size() > 1)
            throw Error(ErrorKind::RecursionIncomplete,
                        "parabolic class without a unique open member");
        r.lift.push_back(best);
    }

    /* l(w0 of W_J) = Σ m(m+1)/2 over maximal runs of consecutive J. */
    std::vector<int> Js = J;
    std::sort(Js.begin(), Js.end());
    for (std::size_t i = 0; i < Js.size();) {
        std::size_t j = i;
        while (j + 1 < Js.size() && Js[j + 1] == Js[j] + 1) ++j;
        int m = static_cast<int>(j - i + 1);
        r.levi_positive_roots += m * (m + 1) / 2;
        i = j + 1;
    }
    return r;
}

long long partial_dimension(const Block& b, const ParabolicReduction& r, int cls) {
    int open = r.lift[static_cast<std::size_t>(cls)];
    return clan::dimension(b.clans[static_cast<std::size_t>(open)], b.p, b.q) -
           r.levi_positive_roots;
}

bool partial_closure_leq(const Block& b, const ParabolicReduction& r, int cls_psi,
                         int cls_gamma) {
    /* Q_ψ ⊆ Q̄_γ iff the full preimage of Q_ψ meets the closure of the open
     * member of the γ-class; classes map onto orbits, so one member test
     * per ψ-class member suffices. */
    const auto& closure = b.closure[static_cast<std::size_t>(r.lift[static_cast<std::size_t>(cls_gamma)])];
    for (int g : r.members[static_cast<std::size_t>(cls_psi)])
        if (closure.count(g)) return true;
    return false;
}

Poly partial_klv(const Block& b, const ParabolicReduction& r, int cls_psi, int cls_gamma) {
    return klv_polynomial(b, r.lift[static_cast<std::size_t>(cls_psi)],
                          r.lift[static_cast<std::size_t>(cls_gamma)]);
}

}  // namespace om::klv

#include "om/klengine.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "om/error.hpp"

namespace om::kl {

int perm_length(const Perm& w) {
    int inv = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j)
            if (w[i] > w[j]) ++inv;
    return inv;
}

Perm identity(int n) {
    Perm e(static_cast<std::size_t>(n));
    std::iota(e.begin(), e.end(), 0);
    return e;
}

Perm compose(const Perm& a, const Perm& b) {
    Perm c(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        c[i] = a[static_cast<std::size_t>(b[i])];
    return c;
}

Perm inverse(const Perm& a) {
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[static_cast<std::size_t>(a[i])] = static_cast<int>(i);
    return c;
}

Perm longest_element(int n) {
    Perm w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = n - 1 - i;
    return w;
}

bool bruhat_leq(const Perm& x, const Perm& w) {
    const int n = static_cast<int>(x.size());
    if (static_cast<int>(w.size()) != n)
        throw Error(ErrorKind::ParseError, "Bruhat comparison across different ranks");
    /* x <= w iff r_x(i,j) >= r_w(i,j) for all i,j. */
    for (int i = 0; i < n; ++i) {
        int rx = 0, rw = 0;
        std::vector<int> cx(static_cast<std::size_t>(n), 0), cw(static_cast<std::size_t>(n), 0);
        for (int a = 0; a <= i; ++a) {
            ++cx[static_cast<std::size_t>(x[static_cast<std::size_t>(a)])];
            ++cw[static_cast<std::size_t>(w[static_cast<std::size_t>(a)])];
        }
        rx = rw = 0;
        for (int j = 0; j < n; ++j) {
            rx += cx[static_cast<std::size_t>(j)];
            rw += cw[static_cast<std::size_t>(j)];
            if (rx < rw) return false;
        }
    }
    return true;
}

Perm longest_element_J(int n, const std::vector<int>& J) {
    Perm w = identity(n);
    std::vector<int> Js = J;
    std::sort(Js.begin(), Js.end());
    for (std::size_t i = 0; i < Js.size();) {
        std::size_t j = i;
        while (j + 1 < Js.size() && Js[j + 1] == Js[j] + 1) ++j;
        int lo = Js[i], hi = Js[j] + 1;  // positions lo..hi reversed
        std::reverse(w.begin() + lo, w.begin() + hi + 1);
        i = j + 1;
    }
    return w;
}

Perm min_coset_rep(const Perm& w, const std::vector<int>& J) {
    Perm v = w;
    std::vector<int> Js = J;
    std::sort(Js.begin(), Js.end());
    for (std::size_t i = 0; i < Js.size();) {
        std::size_t j = i;
        while (j + 1 < Js.size() && Js[j + 1] == Js[j] + 1) ++j;
        int lo = Js[i], hi = Js[j] + 1;
        std::sort(v.begin() + lo, v.begin() + hi + 1);
        i = j + 1;
    }
    return v;
}

bool is_min_rep(const Perm& w, const std::vector<int>& J) {
    for (int s : J)
        if (w[static_cast<std::size_t>(s)] > w[static_cast<std::size_t>(s) + 1]) return false;
    return true;
}

KLTable build_kl_table(int n) {
    if (n < 1 || n > 8) throw Error(ErrorKind::UnsupportedType, "KL table rank out of range");
    KLTable t;
    t.n = n;
    Perm p = identity(n);
    do {
        t.elements.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::sort(t.elements.begin(), t.elements.end(), [](const Perm& a, const Perm& b) {
        int la = perm_length(a), lb = perm_length(b);
        if (la != lb) return la < lb;
        return a < b;
    });
    const int N = static_cast<int>(t.elements.size());
    for (int i = 0; i < N; ++i) {
        t.index[t.elements[static_cast<std::size_t>(i)]] = i;
        t.len.push_back(perm_length(t.elements[static_cast<std::size_t>(i)]));
    }

    t.leq.assign(static_cast<std::size_t>(N), std::vector<char>(static_cast<std::size_t>(N), 0));
    for (int x = 0; x < N; ++x)
        for (int w = 0; w < N; ++w)
            if (t.len[static_cast<std::size_t>(x)] <= t.len[static_cast<std::size_t>(w)])
                t.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(w)] = bruhat_leq(
                    t.elements[static_cast<std::size_t>(x)], t.elements[static_cast<std::size_t>(w)]);

    auto times_s = [&](int wi, int s) {
        Perm v = t.elements[static_cast<std::size_t>(wi)];
        std::swap(v[static_cast<std::size_t>(s)], v[static_cast<std::size_t>(s) + 1]);
        return t.index.at(v);
    };

    t.P.resize(static_cast<std::size_t>(N));
    t.P[0][0] = Poly(1);  // identity
    for (int wi = 1; wi < N; ++wi) {
        const Perm& w = t.elements[static_cast<std::size_t>(wi)];
        int s = -1;
        for (int i = 0; i + 1 < n; ++i)
            if (w[static_cast<std::size_t>(i)] > w[static_cast<std::size_t>(i) + 1]) {
                s = i;
                break;
            }
        const int vi = times_s(wi, s);  // v = ws, one shorter
        const auto& Pv = t.P[static_cast<std::size_t>(vi)];
        const int lw = t.len[static_cast<std::size_t>(wi)];

        /* z with zs < z, μ(z,v) != 0, z <= v. */
        std::vector<std::pair<int, long long>> mus;
        for (const auto& [zi, poly] : Pv) {
            if (zi == vi) continue;
            int zs = times_s(zi, s);
            if (t.len[static_cast<std::size_t>(zs)] > t.len[static_cast<std::size_t>(zi)]) continue;
            int gap = t.len[static_cast<std::size_t>(vi)] - t.len[static_cast<std::size_t>(zi)];
            if (gap % 2 == 0) continue;
            long long mu = poly.coeff((gap - 1) / 2);
            if (mu != 0) mus.emplace_back(zi, mu);
        }
        /* v itself enters the correction sum with μ(v,v) = 1 exactly when
         * vs < v, which never holds here since l(vs) = l(w) > l(v). */

        auto& Pw = t.P[static_cast<std::size_t>(wi)];
        for (int xi = 0; xi < N; ++xi) {
            if (!t.leq[static_cast<std::size_t>(xi)][static_cast<std::size_t>(wi)]) continue;
            const int xsi = times_s(xi, s);
            const bool xs_down =
                t.len[static_cast<std::size_t>(xsi)] < t.len[static_cast<std::size_t>(xi)];
            Poly val;
            auto get = [&](int a) {
                auto it = Pv.find(a);
                return it == Pv.end() ? Poly() : it->second;
            };
            if (xs_down)
                val = get(xsi) + Poly::q_power(1) * get(xi);
            else
                val = Poly::q_power(1) * get(xsi) + get(xi);
            for (const auto& [zi, mu] : mus) {
                if (!t.leq[static_cast<std::size_t>(xi)][static_cast<std::size_t>(zi)]) continue;
                int gap = lw - t.len[static_cast<std::size_t>(zi)];
                auto it = t.P[static_cast<std::size_t>(zi)].find(xi);
                if (it == t.P[static_cast<std::size_t>(zi)].end()) continue;
                val -= Poly::q_power(gap / 2, mu) * it->second;
            }
            if (val.degree() >= 0) {
                int bound = (lw - t.len[static_cast<std::size_t>(xi)] - 1) / 2;
                if (xi != wi && val.degree() > bound)
                    throw Error(ErrorKind::RecursionIncomplete, "KL degree bound violated");
                Pw[xi] = std::move(val);
            } else {
                throw Error(ErrorKind::RecursionIncomplete, "vanishing KL polynomial on [x,w]");
            }
        }
    }
    return t;
}

Poly kl_polynomial(const KLTable& t, const Perm& x, const Perm& w) {
    auto xi = t.index.find(x);
    auto wi = t.index.find(w);
    if (xi == t.index.end() || wi == t.index.end())
        throw Error(ErrorKind::ParseError, "permutation outside the table");
    const auto& Pw = t.P[static_cast<std::size_t>(wi->second)];
    auto it = Pw.find(xi->second);
    return it == Pw.end() ? Poly() : it->second;
}

Poly partial_kl(const KLTable& t, const Perm& x, const Perm& w, const std::vector<int>& J) {
    if (!is_min_rep(x, J) || !is_min_rep(w, J))
        throw Error(ErrorKind::NotMinimalRep, "partial stalks need minimal coset representatives");
    Perm w0j = longest_element_J(t.n, J);
    return kl_polynomial(t, x, compose(w, w0j));
}

std::vector<Perm> double_coset(const Perm& w, const std::vector<int>& J) {
    std::set<Perm> seen{w};
    std::vector<Perm> queue{w};
    while (!queue.empty()) {
        Perm z = std::move(queue.back());
        queue.pop_back();
        for (int s : J) {
            /* right: swap positions s, s+1; left: swap values s, s+1 */
            Perm r = z;
            std::swap(r[static_cast<std::size_t>(s)], r[static_cast<std::size_t>(s + 1)]);
            Perm l = z;
            for (int& v : l)
                if (v == s)
                    v = s + 1;
                else if (v == s + 1)
                    v = s;
            if (seen.insert(r).second) queue.push_back(r);
            if (seen.insert(l).second) queue.push_back(l);
        }
    }
    return {seen.begin(), seen.end()};
}

static Perm extreme_rep(const Perm& w, const std::vector<int>& J, bool want_max) {
    Perm best = w;
    int best_len = perm_length(w);
    bool tie = false;
    for (const Perm& z : double_coset(w, J)) {
        const int lz = perm_length(z);
        if (z == best) continue;
        if (lz == best_len) {
            tie = true;
        } else if ((lz > best_len) == want_max) {
            best = z;
            best_len = lz;
            tie = false;
        }
    }
    if (tie)
        throw Error(ErrorKind::RecursionIncomplete,
                    "double coset extreme is not unique");
    return best;
}

Perm max_double_coset_rep(const Perm& w, const std::vector<int>& J) {
    return extreme_rep(w, J, true);
}

Perm min_double_coset_rep(const Perm& w, const std::vector<int>& J) {
    return extreme_rep(w, J, false);
}

Perm cell_of_flag(const MatQ& basis, const std::vector<int>& steps) {
    const int n = static_cast<int>(basis.rows());
    std::vector<int> all_steps = steps;
    if (all_steps.empty() || all_steps.back() != n) all_steps.push_back(n);
    if (basis.cols() < (steps.empty() ? 0 : steps.back()))
        throw Error(ErrorKind::DegenerateFlag, "flag basis is missing columns");

    Perm w(static_cast<std::size_t>(n), -1);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    int pos = 0;
    for (int d : all_steps) {
        /* jump set of F_d: i such that dim(E_i ∩ F_d) grows at i */
        std::vector<int> fresh;
        if (d == n && basis.cols() < n) {
            for (int i = 0; i < n; ++i)
                if (!used[static_cast<std::size_t>(i)]) fresh.push_back(i);
        } else {
            const MatQ fd = basis.leftCols(d);
            if (static_cast<int>(rank_exact(fd)) != d)
                throw Error(ErrorKind::DegenerateFlag, "flag basis columns are dependent");
            int prev = 0;
            for (int i = 1; i <= n; ++i) {
                const int inter =
                    d - static_cast<int>(rank_exact(fd.bottomRows(n - i)));
                if (inter > prev) {
                    if (!used[static_cast<std::size_t>(i - 1)]) fresh.push_back(i - 1);
                    prev = inter;
                }
            }
        }
        for (int v : fresh) {
            if (pos >= n || used[static_cast<std::size_t>(v)])
                throw Error(ErrorKind::DegenerateFlag, "inconsistent jump sets");
            used[static_cast<std::size_t>(v)] = 1;
            w[static_cast<std::size_t>(pos++)] = v;
        }
    }
    if (pos != n) throw Error(ErrorKind::DegenerateFlag, "flag has deficient rank");
    return w;
}

Perm stratum_param(const Perm& cell, const std::vector<int>& J) {
    return min_coset_rep(max_double_coset_rep(cell, J), J);
}

Eigen::MatrixXi contingency_table(const Perm& w, const std::vector<int>& steps) {
    const int m = static_cast<int>(steps.size());
    Eigen::MatrixXi r = Eigen::MatrixXi::Zero(m, m);
    for (int s = 0; s < m; ++s)
        for (int t = 0; t < m; ++t) {
            int count = 0;
            for (int b = 0; b < steps[static_cast<std::size_t>(t)]; ++b)
                if (w[static_cast<std::size_t>(b)] < steps[static_cast<std::size_t>(s)])
                    ++count;
            r(s, t) = count;
        }
    return r;
}

Eigen::MatrixXi contingency_of_flag(const MatQ& basis, const std::vector<int>& steps) {
    const int n = static_cast<int>(basis.rows());
    const int m = static_cast<int>(steps.size());
    Eigen::MatrixXi r = Eigen::MatrixXi::Zero(m, m);
    for (int t = 0; t < m; ++t) {
        const int d = steps[static_cast<std::size_t>(t)];
        const MatQ fd = basis.leftCols(d);
        for (int s = 0; s < m; ++s) {
            const int ds = steps[static_cast<std::size_t>(s)];
            r(s, t) = d - static_cast<int>(rank_exact(fd.bottomRows(n - ds)));
        }
    }
    return r;
}

}  // namespace om::kl

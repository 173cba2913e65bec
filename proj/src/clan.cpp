#include "om/clan.hpp"

#include <algorithm>
#include <functional>

#include "om/error.hpp"

namespace om::clan {

int Clan::pair_count() const {
    int c = 0;
    for (int m : mate)
        if (m >= 0) ++c;
    return c / 2;
}

std::string Clan::str() const {
    std::string out(sign.size(), '?');
    int next_digit = 0;
    for (int i = 0; i < size(); ++i) {
        if (mate[static_cast<std::size_t>(i)] < 0) {
            out[static_cast<std::size_t>(i)] = sign[static_cast<std::size_t>(i)] > 0 ? '+' : '-';
        } else if (mate[static_cast<std::size_t>(i)] > i) {
            if (next_digit >= 9) throw Error(ErrorKind::ParseError, "too many pairs to print");
            char d = static_cast<char>('1' + next_digit++);
            out[static_cast<std::size_t>(i)] = d;
            out[static_cast<std::size_t>(mate[static_cast<std::size_t>(i)])] = d;
        }
    }
    return out;
}

Clan Clan::parse(const std::string& s) {
    Clan c;
    c.sign.assign(s.size(), 0);
    c.mate.assign(s.size(), -1);
    std::map<char, int> open;
    for (int i = 0; i < static_cast<int>(s.size()); ++i) {
        char ch = s[static_cast<std::size_t>(i)];
        if (ch == '+') {
            c.sign[static_cast<std::size_t>(i)] = 1;
        } else if (ch == '-') {
            c.sign[static_cast<std::size_t>(i)] = -1;
        } else if (ch >= '1' && ch <= '9') {
            auto it = open.find(ch);
            if (it == open.end()) {
                open[ch] = i;
            } else if (it->second >= 0) {
                c.mate[static_cast<std::size_t>(it->second)] = i;
                c.mate[static_cast<std::size_t>(i)] = it->second;
                it->second = -1;
            } else {
                throw Error(ErrorKind::ParseError,
                            std::string("digit '") + ch + "' appears more than twice in clan");
            }
        } else {
            throw Error(ErrorKind::ParseError, std::string("bad clan symbol '") + ch + "'");
        }
    }
    for (const auto& [ch, pos] : open)
        if (pos >= 0)
            throw Error(ErrorKind::ParseError, std::string("unmatched digit '") + ch + "' in clan");
    return c;
}

std::vector<Clan> generate_clans(int p, int q) {
    if (p < 0 || q < 0 || p + q == 0)
        throw Error(ErrorKind::ParseError, "clan signature needs p, q >= 0 and p + q > 0");
    const int n = p + q;
    std::vector<Clan> out;
    Clan cur;
    cur.sign.assign(static_cast<std::size_t>(n), 0);
    cur.mate.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> open;  // positions of currently unmatched pair openers

    std::function<void(int, int, int)> rec = [&](int i, int plus_left, int minus_left) {
        if (i == n) {
            if (open.empty() && plus_left == 0 && minus_left == 0) out.push_back(cur);
            return;
        }
        if (plus_left > 0) {
            cur.sign[static_cast<std::size_t>(i)] = 1;
            rec(i + 1, plus_left - 1, minus_left);
            cur.sign[static_cast<std::size_t>(i)] = 0;
        }
        if (minus_left > 0) {
            cur.sign[static_cast<std::size_t>(i)] = -1;
            rec(i + 1, plus_left, minus_left - 1);
            cur.sign[static_cast<std::size_t>(i)] = 0;
        }
        /* close an existing pair (each open slot is a distinct choice) */
        for (std::size_t k = 0; k < open.size(); ++k) {
            int a = open[k];
            open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
            cur.mate[static_cast<std::size_t>(a)] = i;
            cur.mate[static_cast<std::size_t>(i)] = a;
            rec(i + 1, plus_left, minus_left);
            cur.mate[static_cast<std::size_t>(a)] = -1;
            cur.mate[static_cast<std::size_t>(i)] = -1;
            open.insert(open.begin() + static_cast<std::ptrdiff_t>(k), a);
        }
        /* open a new pair; it consumes one + and one - from the signature */
        if (plus_left > 0 && minus_left > 0) {
            open.push_back(i);
            rec(i + 1, plus_left - 1, minus_left - 1);
            open.pop_back();
        }
    };
    rec(0, p, q);

    std::sort(out.begin(), out.end(), [](const Clan& a, const Clan& b) {
        int la = length(a), lb = length(b);
        if (la != lb) return la < lb;
        return a.str() < b.str();
    });
    return out;
}

int length(const Clan& c) {
    int l = 0;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < c.size(); ++i)
        if (c.mate[static_cast<std::size_t>(i)] > i)
            pairs.emplace_back(i, c.mate[static_cast<std::size_t>(i)]);
    for (const auto& [a, b] : pairs) l += b - a;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            if (i == j) continue;
            if (pairs[i].first < pairs[j].first && pairs[j].first < pairs[i].second &&
                pairs[i].second < pairs[j].second)
                --l;
        }
    return l;
}

long long dimension(const Clan& c, int p, int q) {
    return length(c) + static_cast<long long>(p) * (p - 1) / 2 +
           static_cast<long long>(q) * (q - 1) / 2;
}

const char* move_kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::CompactImaginary: return "compact-imaginary";
        case MoveKind::NoncompactImaginaryI: return "noncompact-imaginary-I";
        case MoveKind::RealI: return "real-I";
        case MoveKind::ComplexAscent: return "complex-ascent";
        case MoveKind::ComplexDescent: return "complex-descent";
    }
    return "?";
}

namespace {

Clan swap_symbols(const Clan& c, int i) {
    Clan d = c;
    /* a pair spanning exactly {i, i+1} is fixed by the swap */
    if (c.mate[static_cast<std::size_t>(i)] == i + 1) return d;
    std::swap(d.sign[static_cast<std::size_t>(i)], d.sign[static_cast<std::size_t>(i) + 1]);
    std::swap(d.mate[static_cast<std::size_t>(i)], d.mate[static_cast<std::size_t>(i) + 1]);
    for (int pos : {i, i + 1}) {
        int m = d.mate[static_cast<std::size_t>(pos)];
        if (m >= 0) d.mate[static_cast<std::size_t>(m)] = pos;
    }
    return d;
}

void check_pos(const Clan& c, int s) {
    if (s < 0 || s + 1 >= c.size())
        throw Error(ErrorKind::ParseError, "simple reflection index out of range");
}

}  // namespace

MoveKind move_kind(const Clan& c, int s) {
    check_pos(c, s);
    const auto i = static_cast<std::size_t>(s);
    const bool sign_i = c.mate[i] < 0, sign_j = c.mate[i + 1] < 0;
    if (sign_i && sign_j)
        return c.sign[i] == c.sign[i + 1] ? MoveKind::CompactImaginary
                                          : MoveKind::NoncompactImaginaryI;
    if (c.mate[i] == s + 1) return MoveKind::RealI;
    Clan d = swap_symbols(c, s);
    int dl = length(d) - length(c);
    if (dl == 1) return MoveKind::ComplexAscent;
    if (dl == -1) return MoveKind::ComplexDescent;
    throw Error(ErrorKind::RecursionIncomplete, "complex move with |Δl| != 1 at " + c.str());
}

Clan cross(const Clan& c, int s) {
    check_pos(c, s);
    MoveKind k = move_kind(c, s);
    if (k == MoveKind::CompactImaginary || k == MoveKind::RealI) return c;
    return swap_symbols(c, s);
}

Clan cayley_up(const Clan& c, int s) {
    check_pos(c, s);
    if (move_kind(c, s) != MoveKind::NoncompactImaginaryI)
        throw Error(ErrorKind::ParseError, "cayley_up needs opposite signs at s, s+1");
    Clan d = c;
    d.sign[static_cast<std::size_t>(s)] = d.sign[static_cast<std::size_t>(s) + 1] = 0;
    d.mate[static_cast<std::size_t>(s)] = s + 1;
    d.mate[static_cast<std::size_t>(s) + 1] = s;
    return d;
}

std::pair<Clan, Clan> cayley_down(const Clan& c, int s) {
    check_pos(c, s);
    if (move_kind(c, s) != MoveKind::RealI)
        throw Error(ErrorKind::ParseError, "cayley_down needs a pair at (s, s+1)");
    Clan pm = c, mp = c;
    pm.mate[static_cast<std::size_t>(s)] = pm.mate[static_cast<std::size_t>(s) + 1] = -1;
    pm.sign[static_cast<std::size_t>(s)] = 1;
    pm.sign[static_cast<std::size_t>(s) + 1] = -1;
    mp.mate[static_cast<std::size_t>(s)] = mp.mate[static_cast<std::size_t>(s) + 1] = -1;
    mp.sign[static_cast<std::size_t>(s)] = -1;
    mp.sign[static_cast<std::size_t>(s) + 1] = 1;
    return {pm, mp};
}

std::vector<Clan> class_s(const Clan& c, int s) {
    switch (move_kind(c, s)) {
        case MoveKind::CompactImaginary:
            return {c};
        case MoveKind::NoncompactImaginaryI:
            return {c, cross(c, s), cayley_up(c, s)};
        case MoveKind::RealI: {
            auto [pm, mp] = cayley_down(c, s);
            return {pm, mp, c};
        }
        case MoveKind::ComplexAscent:
        case MoveKind::ComplexDescent:
            return {c, cross(c, s)};
    }
    return {c};
}

std::optional<int> find_descent(const Clan& c) {
    for (int s = 0; s + 1 < c.size(); ++s) {
        MoveKind k = move_kind(c, s);
        if (k == MoveKind::ComplexDescent || k == MoveKind::RealI) return s;
    }
    return std::nullopt;
}

const std::set<Clan>& closure_set(const Clan& c, std::map<Clan, std::set<Clan>>& memo) {
    auto it = memo.find(c);
    if (it != memo.end()) return it->second;
    std::set<Clan> d;
    d.insert(c);
    if (auto s = find_descent(c)) {
        Clan delta =
            move_kind(c, *s) == MoveKind::RealI ? cayley_down(c, *s).first : cross(c, *s);
        for (const Clan& psi : closure_set(delta, memo))
            for (const Clan& phi : class_s(psi, *s)) d.insert(phi);
    }
    return memo.emplace(c, std::move(d)).first->second;
}

}  // namespace om::clan

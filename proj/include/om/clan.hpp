#ifndef OM_CLAN_HPP
#define OM_CLAN_HPP

/*
 * Clans: K = GL(p) x GL(q) orbits on the full flag variety of GL(p+q).
 *
 * A clan is a string of n = p+q symbols: '+', '-', or a matched pair of
 * equal digits.  Signs record F_i/F_{i-1} lying in V+ or V-; a digit pair
 * (a,b) records a line added at step a that is moved off V+ ⊕ V- and
 * "resolved" at step b.  Orbit membership, dimension, closure, and the
 * Hecke-module moves are all combinatorial in this datum:
 *
 *   length l(γ)  = Σ_pairs (b - a) - #crossings,  crossings: a1<a2<b1<b2,
 *   dim O(γ)     = l(γ) + p(p-1)/2 + q(q-1)/2,
 *
 * and for the simple reflection s at positions (i, i+1):
 *   equal signs            -> compact imaginary  (P_s class {γ}),
 *   opposite signs         -> noncompact imaginary type I,
 *   a pair (i, i+1)        -> real type I,
 *   everything else        -> complex (ascent or descent by Δl = ±1).
 * The type-I imaginary/real classes share one P_s saturation
 * {γ+-, γ-+, γ_pair}; complex classes are {γ, s×γ}.
 */

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace om::clan {

struct Clan {
    /* sign[i]: +1, -1, or 0 when position i belongs to a pair. */
    std::vector<std::int8_t> sign;
    /* mate[i]: partner position of a pair, or -1 for a sign. */
    std::vector<int> mate;

    int size() const { return static_cast<int>(sign.size()); }
    int pair_count() const;
    bool is_sign_string() const { return pair_count() == 0; }

    friend bool operator==(const Clan& a, const Clan& b) {
        return a.sign == b.sign && a.mate == b.mate;
    }
    friend bool operator<(const Clan& a, const Clan& b) {
        if (a.sign != b.sign) return a.sign < b.sign;
        return a.mate < b.mate;
    }

    /* Canonical display: pair digits numbered by opener order ("1+-1"). */
    std::string str() const;
    static Clan parse(const std::string& s);  // throws ParseError
};

/* All clans with p - #pairs plusses and q - #pairs minuses, sorted by
 * (length, canonical string). */
std::vector<Clan> generate_clans(int p, int q);

int length(const Clan& c);
long long dimension(const Clan& c, int p, int q);

enum class MoveKind {
    CompactImaginary,
    NoncompactImaginaryI,
    RealI,
    ComplexAscent,
    ComplexDescent,
};
const char* move_kind_name(MoveKind k);

MoveKind move_kind(const Clan& c, int s);

/* Cross action s×γ: swaps the symbols at i, i+1 (complex and noncompact
 * imaginary cases; identity for compact imaginary and real type I). */
Clan cross(const Clan& c, int s);

/* Noncompact imaginary type I: opposite signs -> pair (l goes up by 1). */
Clan cayley_up(const Clan& c, int s);

/* Real type I: adjacent pair -> the two sign resolutions (+-, -+). */
std::pair<Clan, Clan> cayley_down(const Clan& c, int s);

/* P_s saturation class of the orbit (see header comment). */
std::vector<Clan> class_s(const Clan& c, int s);

/* First s that is a descent (complex descent or real type I), if any;
 * sign strings (closed orbits) have none. */
std::optional<int> find_descent(const Clan& c);

/* Orbits in the closure of O(γ), computed by descent recursion
 * D(γ) = {γ} ∪ ⋃_{ψ ∈ D(δ)} class_s(ψ) with memoisation. */
const std::set<Clan>& closure_set(const Clan& c, std::map<Clan, std::set<Clan>>& memo);

}  // namespace om::clan

#endif  // OM_CLAN_HPP

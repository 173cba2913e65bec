#ifndef OM_RAT_HPP
#define OM_RAT_HPP

/*
 * Exact rational scalar.
 *
 * All geometry in this library (flags, stabilizers, orbit dimensions) is
 * decided by ranks of small dense matrices, so the scalar type must support
 * exact division and exact comparison.  Rat is a reduced fraction of two
 * 64-bit integers.  Every product and cross-multiplication is carried out in
 * 128-bit intermediates and checked before narrowing; an overflow throws
 * instead of wrapping, so a result that is returned is always exact.
 *
 * The magnitudes that actually occur here are tiny: matrix entries are unit
 * partial permutations, truncated exponentials with denominators at most a
 * small factorial, and Bareiss minors of matrices of size <= ~40.  The
 * checked 64-bit representation keeps the scalar trivially copyable and
 * Eigen-friendly; see NumTraits below.
 */

#include <cstdint>
#include <type_traits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace om {

class Rat {
public:
    using Int = std::int64_t;

    Rat() : m_num(0), m_den(1) {}
    template <class T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
    Rat(T n) : m_num(static_cast<Int>(n)), m_den(1) {}
    Rat(Int n, Int d) : m_num(n), m_den(d) { reduce(); }

    Int num() const { return m_num; }
    Int den() const { return m_den; }

    bool is_zero() const { return m_num == 0; }
    bool is_integer() const { return m_den == 1; }

    /* Exact integer value; throws if the fraction is not integral. */
    Int as_integer() const {
        if (m_den != 1) throw std::domain_error("Rat::as_integer: not an integer: " + str());
        return m_num;
    }

    Rat operator-() const { return Rat(unchecked(), -m_num, m_den); }

    Rat& operator+=(const Rat& o) {
        __int128 n = w(m_num) * o.m_den + w(o.m_num) * m_den;
        __int128 d = w(m_den) * o.m_den;
        assign(n, d);
        return *this;
    }
    Rat& operator-=(const Rat& o) { return *this += Rat(unchecked(), -o.m_num, o.m_den); }
    Rat& operator*=(const Rat& o) {
        assign(w(m_num) * o.m_num, w(m_den) * o.m_den);
        return *this;
    }
    Rat& operator/=(const Rat& o) {
        if (o.m_num == 0) throw std::domain_error("Rat: division by zero");
        assign(w(m_num) * o.m_den, w(m_den) * o.m_num);
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.m_num == b.m_num && a.m_den == b.m_den;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return w(a.m_num) * b.m_den < w(b.m_num) * a.m_den;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    friend Rat abs(const Rat& a) { return a.m_num < 0 ? -a : a; }

    std::string str() const {
        if (m_den == 1) return std::to_string(m_num);
        return std::to_string(m_num) + "/" + std::to_string(m_den);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    struct unchecked {};  // tag: caller guarantees the pair is already reduced
    Rat(unchecked, Int n, Int d) : m_num(n), m_den(d) {}

    static __int128 w(Int v) { return static_cast<__int128>(v); }

    static Int narrow(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error("Rat: 64-bit overflow in exact arithmetic");
        return static_cast<Int>(v);
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void assign(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        if (n == 0) {
            m_num = 0;
            m_den = 1;
            return;
        }
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd128(n, d);
        m_num = narrow(n / g);
        m_den = narrow(d / g);
    }

    void reduce() { assign(w(m_num), w(m_den)); }

    Int m_num;
    Int m_den;
};

}  // namespace om

namespace Eigen {

template <typename T>
struct NumTraits;

template <>
struct NumTraits<om::Rat> {
    using Real = om::Rat;
    using NonInteger = om::Rat;
    using Nested = om::Rat;
    using Literal = long long;

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 12,
        MulCost = 10
    };

    static inline om::Rat epsilon() { return om::Rat(0); }
    static inline om::Rat dummy_precision() { return om::Rat(0); }
    static inline om::Rat highest() { return om::Rat(INT64_MAX); }
    static inline om::Rat lowest() { return om::Rat(INT64_MIN); }
    static inline int digits10() { return 18; }
};

}  // namespace Eigen

#endif  // OM_RAT_HPP

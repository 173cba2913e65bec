#ifndef OM_POLY_HPP
#define OM_POLY_HPP

/*
 * Polynomials in q with integer coefficients — the value type of every
 * Kazhdan–Lusztig-style table in this library.
 *
 * Coefficients are overflow-checked 64-bit integers.  At the scales this
 * library handles (symmetric groups up to S6, clan blocks with p+q <= 6)
 * the coefficients are tiny; the checks turn a hypothetical overflow into
 * a loud failure rather than a silent wrong polynomial.
 */

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace om {

class Poly {
public:
    using Coef = std::int64_t;

    Poly() = default;
    Poly(Coef constant) {
        if (constant != 0) m_c.push_back(constant);
    }
    Poly(std::initializer_list<Coef> coeffs) : m_c(coeffs) { trim(); }

    static Poly q_power(int k, Coef c = 1) {
        Poly p;
        if (c != 0) {
            p.m_c.assign(static_cast<std::size_t>(k) + 1, 0);
            p.m_c.back() = c;
        }
        return p;
    }

    bool is_zero() const { return m_c.empty(); }
    /* Degree of the zero polynomial is -1 by convention. */
    int degree() const { return static_cast<int>(m_c.size()) - 1; }

    Coef coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(m_c.size())) return 0;
        return m_c[static_cast<std::size_t>(k)];
    }

    const std::vector<Coef>& coeffs() const { return m_c; }

    Poly& operator+=(const Poly& o) {
        if (o.m_c.size() > m_c.size()) m_c.resize(o.m_c.size(), 0);
        for (std::size_t i = 0; i < o.m_c.size(); ++i) m_c[i] = add(m_c[i], o.m_c[i]);
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.m_c.size() > m_c.size()) m_c.resize(o.m_c.size(), 0);
        for (std::size_t i = 0; i < o.m_c.size(); ++i) m_c[i] = add(m_c[i], -o.m_c[i]);
        trim();
        return *this;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.m_c.assign(a.m_c.size() + b.m_c.size() - 1, 0);
        for (std::size_t i = 0; i < a.m_c.size(); ++i)
            for (std::size_t j = 0; j < b.m_c.size(); ++j)
                r.m_c[i + j] = add(r.m_c[i + j], mul(a.m_c[i], b.m_c[j]));
        r.trim();
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.m_c == b.m_c; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /* Multiply by c·q^k. */
    Poly shifted(int k, Coef c = 1) const {
        Poly r;
        if (is_zero() || c == 0) return r;
        r.m_c.assign(m_c.size() + static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < m_c.size(); ++i)
            r.m_c[i + static_cast<std::size_t>(k)] = mul(m_c[i], c);
        r.trim();
        return r;
    }

    /* Drop all terms of degree > k. */
    Poly truncated(int k) const {
        Poly r;
        if (k < 0) return r;
        std::size_t keep = std::min(m_c.size(), static_cast<std::size_t>(k) + 1);
        r.m_c.assign(m_c.begin(), m_c.begin() + static_cast<std::ptrdiff_t>(keep));
        r.trim();
        return r;
    }

    bool nonnegative() const {
        for (Coef c : m_c)
            if (c < 0) return false;
        return true;
    }

    Coef eval_at_one() const {
        Coef s = 0;
        for (Coef c : m_c) s = add(s, c);
        return s;
    }

    /* Display form "1+2q+q^3"; zero polynomial prints "0". */
    std::string str() const {
        if (m_c.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < m_c.size(); ++i) {
            Coef c = m_c[i];
            if (c == 0) continue;
            if (!out.empty()) out += c > 0 ? "+" : "-";
            else if (c < 0) out += "-";
            Coef a = c > 0 ? c : -c;
            if (i == 0) out += std::to_string(a);
            else {
                if (a != 1) out += std::to_string(a);
                out += "q";
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out.empty() ? "0" : out;
    }

private:
    static Coef add(Coef a, Coef b) {
        Coef r;
        if (__builtin_add_overflow(a, b, &r))
            throw std::overflow_error("Poly: coefficient overflow");
        return r;
    }
    static Coef mul(Coef a, Coef b) {
        Coef r;
        if (__builtin_mul_overflow(a, b, &r))
            throw std::overflow_error("Poly: coefficient overflow");
        return r;
    }
    void trim() {
        while (!m_c.empty() && m_c.back() == 0) m_c.pop_back();
    }

    std::vector<Coef> m_c;
};

}  // namespace om

#endif  // OM_POLY_HPP

#ifndef OM_LINALG_HPP
#define OM_LINALG_HPP

/*
 * Exact dense linear algebra over an exact scalar (om::Rat, or any field
 * scalar with exact division), as expression-friendly free functions on
 * Eigen types.
 *
 * The elimination is the one-step fraction-free Bareiss scheme
 *
 *     M(i,j) <- ( M(i,j)*M(k,k) - M(i,k)*M(k,j) ) / prev_pivot
 *
 * whose divisions are exact in any integral domain.  On integer input the
 * intermediates are minors of the input matrix, which keeps coefficient
 * growth polynomial; on rational input the same recurrence simply stays
 * exact.  Pivoting is by first nonzero entry — there is no notion of
 * numerical stability to trade away.
 *
 * Everything downstream (orbit dimensions, flag signatures, stabilizer
 * subalgebras) reduces to rank_exact / nullspace_exact / dimension counts
 * of sums and intersections of column spans.
 */

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "om/rat.hpp"

namespace om {

using MatQ = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using VecQ = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;

/* Rank by fraction-free Bareiss elimination on a working copy. */
template <typename Derived>
Eigen::Index rank_exact(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = m;
    const Eigen::Index rows = a.rows(), cols = a.cols();
    Scalar prev = Scalar(1);
    Eigen::Index rank = 0;
    for (Eigen::Index col = 0; col < cols && rank < rows; ++col) {
        Eigen::Index piv = -1;
        for (Eigen::Index r = rank; r < rows; ++r)
            if (!(a(r, col) == Scalar(0))) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank) a.row(piv).swap(a.row(rank));
        const Scalar pivot = a(rank, col);
        for (Eigen::Index r = rank + 1; r < rows; ++r) {
            for (Eigen::Index c = col + 1; c < cols; ++c)
                a(r, c) = (a(r, c) * pivot - a(r, col) * a(rank, c)) / prev;
            a(r, col) = Scalar(0);
        }
        prev = pivot;
        ++rank;
    }
    return rank;
}

/*
 * Basis of the right nullspace { v : M v = 0 }, columns of the result.
 * Gauss–Jordan over the (exact) field scalar; free columns get unit
 * back-substituted vectors, so integer input yields rational output with
 * small denominators.
 */
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
nullspace_exact(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat a = m;
    const Eigen::Index rows = a.rows(), cols = a.cols();
    std::vector<Eigen::Index> pivot_col;
    Eigen::Index rank = 0;
    for (Eigen::Index col = 0; col < cols && rank < rows; ++col) {
        Eigen::Index piv = -1;
        for (Eigen::Index r = rank; r < rows; ++r)
            if (!(a(r, col) == Scalar(0))) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank) a.row(piv).swap(a.row(rank));
        a.row(rank) /= a(rank, col);
        for (Eigen::Index r = 0; r < rows; ++r) {
            if (r == rank) continue;
            if (!(a(r, col) == Scalar(0))) a.row(r) -= a(r, col) * a.row(rank);
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (Eigen::Index c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    Mat basis(cols, cols - rank);
    Eigen::Index out = 0;
    for (Eigen::Index free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[static_cast<std::size_t>(free_col)]) continue;
        for (Eigen::Index r = 0; r < cols; ++r) basis(r, out) = Scalar(0);
        basis(free_col, out) = Scalar(1);
        for (Eigen::Index pr = 0; pr < rank; ++pr)
            basis(pivot_col[static_cast<std::size_t>(pr)], out) = -a(pr, free_col);
        ++out;
    }
    return basis;
}

/* dim of the column span. */
template <typename Derived>
Eigen::Index span_dim(const Eigen::MatrixBase<Derived>& m) {
    return rank_exact(m);
}

/* dim(col A + col B). */
template <typename DA, typename DB>
Eigen::Index sum_dim(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("sum_dim: row mismatch");
    using Scalar = typename DA::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ab(a.rows(), a.cols() + b.cols());
    ab << a, b;
    return rank_exact(ab);
}

/* dim(col A ∩ col B) = dim A + dim B − dim(A + B). */
template <typename DA, typename DB>
Eigen::Index intersection_dim(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    return rank_exact(a) + rank_exact(b) - sum_dim(a, b);
}

/* Does col(A) contain col(B)? */
template <typename DA, typename DB>
bool span_contains(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    return sum_dim(a, b) == rank_exact(a);
}

/*
 * Basis of the left annihilator { c : cᵀ M = 0 }, columns of the result;
 * used to linearize flag-stabilizer conditions  k·F ⊆ F  as  Cᵀ k F = 0.
 */
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
left_annihilator(const Eigen::MatrixBase<Derived>& m) {
    return nullspace_exact(m.transpose());
}

}  // namespace om

#endif  // OM_LINALG_HPP

#pragma once
//
// Greedy empirical interpolation over a tabulated bivariate function.
//
// The same engine serves both stages of the separated-representation build:
// once per kernel g(mu, x) (rows = parameters, columns = spatial samples) and
// once on the z-table (rows = term index p, columns = parameters).
//

#include "errors.hpp"
#include "sample_grid.hpp"
#include "scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace parasep {

enum class EimStop { max_terms, tolerance };

template <FieldScalar Scalar>
struct EimInterpolant {
    std::vector<double> row_labels;
    std::vector<double> col_labels;
    std::vector<std::size_t> row_sel;  // selected parameters (or term indices)
    std::vector<std::size_t> col_sel;  // magic points
    Matrix<Scalar> Q;                  // |cols| x d, column k is q_k on every column label
    Matrix<Scalar> B;                  // d x d, B(l, m) = q_m(x_l), unit lower triangular
    std::vector<Scalar> pivots;        // signed residual at each selection
    std::vector<double> residual_history;
    EimStop stop = EimStop::max_terms;

    std::size_t size() const noexcept { return row_sel.size(); }

    std::vector<double> magic_points() const {
        std::vector<double> out;
        out.reserve(col_sel.size());
        for (auto j : col_sel)
            out.push_back(col_labels[j]);
        return out;
    }

    std::vector<double> selected_rows() const {
        std::vector<double> out;
        out.reserve(row_sel.size());
        for (auto i : row_sel)
            out.push_back(row_labels[i]);
        return out;
    }
};

/// Default stopping threshold: relative to the first selected residual.
inline constexpr double default_relative_tolerance = 1e-12;

namespace detail {

struct GridArgmax {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    double value = -1.0;
};

// Row-major scan with strict '>' so ties resolve to the lowest row, then the
// lowest column, in label order.
template <FieldScalar Scalar>
GridArgmax abs_argmax(const Matrix<Scalar>& r) {
    GridArgmax best;
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        for (Eigen::Index j = 0; j < r.cols(); ++j) {
            const double a = std::abs(r(i, j));
            if (a > best.value) {
                best.value = a;
                best.row = i;
                best.col = j;
            }
        }
    return best;
}

template <FieldScalar Scalar>
EimInterpolant<Scalar> build_interpolant_impl(const SampleGrid<Scalar>& grid, std::size_t max_terms, double tol,
                                              bool relative_tol) {
    const std::size_t limit = std::min(grid.rows(), grid.cols());
    if (max_terms == 0 || max_terms > limit)
        throw ContractViolation("build_interpolant: max_terms must be in [1, " + std::to_string(limit) + "], got " +
                                std::to_string(max_terms));
    if (!(tol >= 0.0))
        throw ContractViolation("build_interpolant: tolerance must be nonnegative");

    EimInterpolant<Scalar> itp;
    itp.row_labels = grid.row_labels();
    itp.col_labels = grid.col_labels();
    const auto n_cols = static_cast<Eigen::Index>(grid.cols());
    const auto d_max = static_cast<Eigen::Index>(max_terms);
    Matrix<Scalar> q_all = Matrix<Scalar>::Zero(n_cols, d_max);
    Matrix<Scalar> b_all = Matrix<Scalar>::Zero(d_max, d_max);

    // Residual of the current interpolant on the whole grid; each accepted term
    // is a rank-one correction R <- R - R(:, x_k) q_k^T.
    Matrix<Scalar> residual = grid.values();
    double threshold = tol;

    Eigen::Index k = 0;
    for (; k < d_max; ++k) {
        const GridArgmax best = abs_argmax(residual);
        if (k == 0) {
            if (best.value == 0.0)
                throw DegenerateInputError("build_interpolant: grid is identically zero, cannot normalize q_1");
            if (relative_tol)
                threshold = tol * best.value;
        } else if (best.value <= threshold) {
            itp.stop = EimStop::tolerance;
            break;
        }
        const Scalar pivot = residual(best.row, best.col);
        Vector<Scalar> q = residual.row(best.row).transpose() / pivot;
        q(best.col) = Scalar(1);

        itp.row_sel.push_back(static_cast<std::size_t>(best.row));
        itp.col_sel.push_back(static_cast<std::size_t>(best.col));
        itp.pivots.push_back(pivot);
        itp.residual_history.push_back(best.value);
        q_all.col(k) = q;
        for (Eigen::Index m = 0; m <= k; ++m)
            b_all(k, m) = q_all(best.col, m);

        const Vector<Scalar> at_point = residual.col(best.col);
        residual.noalias() -= at_point * q.transpose();
        // Both vanish analytically; pin them so no selection can repeat.
        residual.row(best.row).setZero();
        residual.col(best.col).setZero();
    }
    itp.Q = q_all.leftCols(k);
    itp.B = b_all.topLeftCorner(k, k);
    return itp;
}

}  // namespace detail

/// Greedy build with an absolute stopping threshold on the selected residual.
template <FieldScalar Scalar>
EimInterpolant<Scalar> build_interpolant(const SampleGrid<Scalar>& grid, std::size_t max_terms, double tol) {
    return detail::build_interpolant_impl(grid, max_terms, tol, false);
}

/// Greedy build stopping at max_terms or when the selected residual drops to
/// 1e-12 of the first one.
template <FieldScalar Scalar>
EimInterpolant<Scalar> build_interpolant(const SampleGrid<Scalar>& grid, std::size_t max_terms) {
    return detail::build_interpolant_impl(grid, max_terms, default_relative_tolerance, true);
}

/// Greedy build whose threshold is `rel_tol` times the first selected residual;
/// rel_tol = 0 lets max_terms alone decide.
template <FieldScalar Scalar>
EimInterpolant<Scalar> build_interpolant_relative(const SampleGrid<Scalar>& grid, std::size_t max_terms,
                                                  double rel_tol) {
    return detail::build_interpolant_impl(grid, max_terms, rel_tol, true);
}

/// Solves B lambda = values (forward substitution, unit diagonal).
template <FieldScalar Scalar>
Vector<Scalar> online_coefficients(const EimInterpolant<Scalar>& itp, const Vector<Scalar>& values) {
    if (values.size() != static_cast<Eigen::Index>(itp.size()))
        throw ContractViolation("online_coefficients: expected " + std::to_string(itp.size()) + " values, got " +
                                std::to_string(values.size()));
    return itp.B.template triangularView<Eigen::UnitLower>().solve(values);
}

/// Values of the grid row at the magic points.
template <FieldScalar Scalar>
Vector<Scalar> values_at_magic_points(const EimInterpolant<Scalar>& itp, const Matrix<Scalar>& values,
                                      Eigen::Index row) {
    Vector<Scalar> out(static_cast<Eigen::Index>(itp.size()));
    for (std::size_t m = 0; m < itp.size(); ++m)
        out(static_cast<Eigen::Index>(m)) = values(row, static_cast<Eigen::Index>(itp.col_sel[m]));
    return out;
}

/// Sum_m coeffs[m] q_m on every column label.
template <FieldScalar Scalar>
Vector<Scalar> evaluate(const EimInterpolant<Scalar>& itp, const Vector<Scalar>& coeffs) {
    if (coeffs.size() != static_cast<Eigen::Index>(itp.size()))
        throw ContractViolation("evaluate: expected " + std::to_string(itp.size()) + " coefficients, got " +
                                std::to_string(coeffs.size()));
    return itp.Q * coeffs;
}

/// Per-row sup-norm of the interpolation error over the grid's columns.
template <FieldScalar Scalar>
std::vector<double> sup_residual(const EimInterpolant<Scalar>& itp, const SampleGrid<Scalar>& grid) {
    if (grid.col_labels() != itp.col_labels)
        throw ContractViolation("sup_residual: grid column labels differ from the interpolant's");
    const auto d = static_cast<Eigen::Index>(itp.size());
    Matrix<Scalar> at_points(static_cast<Eigen::Index>(grid.rows()), d);
    for (Eigen::Index m = 0; m < d; ++m)
        at_points.col(m) = grid.values().col(static_cast<Eigen::Index>(itp.col_sel[static_cast<std::size_t>(m)]));
    // Lambda^T = B^{-1} G^T for all rows at once.
    const Matrix<Scalar> lambda_t =
        itp.B.template triangularView<Eigen::UnitLower>().solve(at_points.transpose());
    const Matrix<Scalar> err = grid.values() - lambda_t.transpose() * itp.Q.transpose();
    std::vector<double> out(grid.rows());
    for (Eigen::Index i = 0; i < err.rows(); ++i)
        out[static_cast<std::size_t>(i)] = err.row(i).cwiseAbs().maxCoeff();
    return out;
}

/// Weights beta on the selected columns such that the interpolant of basis
/// values q(c) satisfies sum_m B(m, l) beta_m = q_l(c). Used as the literal
/// transposed-system route for interpolating in the column direction.
template <FieldScalar Scalar>
Vector<Scalar> dual_coefficients(const EimInterpolant<Scalar>& itp, const Vector<Scalar>& basis_values) {
    if (basis_values.size() != static_cast<Eigen::Index>(itp.size()))
        throw ContractViolation("dual_coefficients: length mismatch");
    return itp.B.transpose().template triangularView<Eigen::UnitUpper>().solve(basis_values);
}

/// Samples every basis function q_k at arbitrary points using the kernel that
/// generated the grid: q_k = (g(mu_k, .) - sum_{m<k} lambda_m(mu_k) q_m) / pivot_k.
template <FieldScalar Scalar, typename Kernel>
Matrix<Scalar> basis_at(const EimInterpolant<Scalar>& itp, Kernel&& kernel, std::span<const double> xs) {
    const auto d = static_cast<Eigen::Index>(itp.size());
    const auto n = static_cast<Eigen::Index>(xs.size());
    const auto magic = itp.magic_points();
    Matrix<Scalar> out(n, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double mu_k = itp.row_labels[itp.row_sel[static_cast<std::size_t>(k)]];
        Vector<Scalar> g_at_magic(k);
        for (Eigen::Index l = 0; l < k; ++l)
            g_at_magic(l) = static_cast<Scalar>(kernel(mu_k, magic[static_cast<std::size_t>(l)]));
        const Vector<Scalar> lambda =
            itp.B.topLeftCorner(k, k).template triangularView<Eigen::UnitLower>().solve(g_at_magic);
        for (Eigen::Index i = 0; i < n; ++i) {
            Scalar v = static_cast<Scalar>(kernel(mu_k, xs[static_cast<std::size_t>(i)]));
            for (Eigen::Index m = 0; m < k; ++m)
                v -= lambda(m) * out(i, m);
            out(i, k) = v / itp.pivots[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

}  // namespace parasep

#pragma once

#include "errors.hpp"
#include "scalar.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace parasep {

/// Dense LU solve of A x = C. Throws SingularMatrixError when the reciprocal
/// condition estimate falls below machine epsilon.
template <FieldScalar Scalar>
Matrix<Scalar> solve_dense(const Matrix<Scalar>& a, const Matrix<Scalar>& c) {
    if (a.rows() != a.cols() || a.rows() != c.rows())
        throw ContractViolation("solve_dense: non-conforming shapes");
    Eigen::PartialPivLU<Matrix<Scalar>> lu(a);
    const double rc = lu.rcond();
    if (!(rc > std::numeric_limits<double>::epsilon()))
        throw SingularMatrixError("solve_dense: matrix is singular to working precision (rcond = " +
                                  std::to_string(rc) + ")");
    return lu.solve(c);
}

template <FieldScalar Scalar>
Vector<Scalar> solve_dense(const Matrix<Scalar>& a, const Vector<Scalar>& c) {
    return solve_dense<Scalar>(a, Matrix<Scalar>(c)).col(0);
}

/// ||approx - exact||_F / ||exact||_F by direct summation.
template <typename DerivedA, typename DerivedB>
double relative_frobenius_error(const Eigen::MatrixBase<DerivedA>& approx, const Eigen::MatrixBase<DerivedB>& exact) {
    const double denom = exact.norm();
    if (denom == 0.0)
        throw ContractViolation("relative_frobenius_error: zero reference");
    return (approx - exact).norm() / denom;
}

/// Same quantity with Neumaier-compensated sums of squared moduli.
template <typename DerivedA, typename DerivedB>
double relative_frobenius_error_compensated(const Eigen::MatrixBase<DerivedA>& approx,
                                            const Eigen::MatrixBase<DerivedB>& exact) {
    auto sum_sq = [](const auto& m) {
        double s = 0.0, comp = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                const double v = std::norm(m(i, j));
                const double t = s + v;
                comp += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
                s = t;
            }
        return s + comp;
    };
    const double denom = sum_sq(exact.eval());
    if (denom == 0.0)
        throw ContractViolation("relative_frobenius_error: zero reference");
    return std::sqrt(sum_sq((approx - exact).eval()) / denom);
}

/// sqrt(e^H M e) / sqrt(ref^H M ref) with e = u - ref, M the (Hermitian) mass matrix.
template <FieldScalar Scalar>
double l2_relative_error(const Vector<Scalar>& u, const Vector<Scalar>& ref, const Matrix<double>& mass) {
    if (u.size() != ref.size() || mass.rows() != u.size() || mass.cols() != u.size())
        throw ContractViolation("l2_relative_error: non-conforming lengths");
    const Vector<Scalar> e = u - ref;
    const double num = std::real(e.dot(mass.template cast<Scalar>() * e));
    const double den = std::real(ref.dot(mass.template cast<Scalar>() * ref));
    if (!(den > 0.0))
        throw ContractViolation("l2_relative_error: zero reference norm");
    return std::sqrt(std::max(num, 0.0) / den);
}

/// Euclidean relative error, for problems without a mass matrix.
template <FieldScalar Scalar>
double relative_error(const Vector<Scalar>& u, const Vector<Scalar>& ref) {
    const double den = ref.norm();
    if (den == 0.0)
        throw ContractViolation("relative_error: zero reference norm");
    return (u - ref).norm() / den;
}

}  // namespace parasep

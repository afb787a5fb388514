#pragma once
//
// Greedy reduced basis and the online reduced solve driven by the
// nonintrusive separated representation.
//

#include "errors.hpp"
#include "linalg.hpp"
#include "scalar.hpp"
#include "snapshot_model.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace parasep {

/// Full-order access used by the offline greedy.
template <FieldScalar Scalar>
struct FullOrderModel {
    std::function<Matrix<Scalar>(double)> matrix;
    std::function<Vector<Scalar>(double)> rhs;
    RealMatrix inner;  // L2 Gram matrix for error measurement; empty = Euclidean
};

enum class GreedyStop { max_size, tolerance, dependent_snapshot };

template <FieldScalar Scalar>
struct ReducedBasis {
    Matrix<Scalar> U;  // n x n_hat, orthonormal columns
    std::vector<double> mu_rb;
    std::vector<double> max_train_error;  // after each enrichment
    double gram_tol = 1e-12;
    GreedyStop stop = GreedyStop::max_size;

    Eigen::Index size() const noexcept { return U.cols(); }

    double orthonormality_residual() const {
        const auto k = U.cols();
        return (U.adjoint() * U - Matrix<Scalar>::Identity(k, k)).cwiseAbs().maxCoeff();
    }
};

namespace detail {

template <FieldScalar Scalar>
double solution_error(const Vector<Scalar>& u, const Vector<Scalar>& ref, const RealMatrix& inner) {
    return inner.size() == 0 ? relative_error<Scalar>(u, ref) : l2_relative_error<Scalar>(u, ref, inner);
}

inline std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best])
            best = i;
    return best;
}

}  // namespace detail

/// True-error greedy: first picks the largest solution, then repeatedly the
/// train parameter with the worst Galerkin error. Modified Gram-Schmidt with
/// one re-orthogonalization pass.
template <FieldScalar Scalar>
ReducedBasis<Scalar> greedy_build(const FullOrderModel<Scalar>& fom, const std::vector<double>& train,
                                  std::size_t n_max, double tol, double gram_tol = 1e-12) {
    if (train.empty())
        throw ContractViolation("greedy_build: empty train set");
    if (n_max == 0 || n_max > train.size())
        throw ContractViolation("greedy_build: n_max must be in [1, |train|]");

    std::vector<Vector<Scalar>> full(train.size());
    for (std::size_t t = 0; t < train.size(); ++t)
        full[t] = solve_dense<Scalar>(fom.matrix(train[t]), fom.rhs(train[t]));
    return greedy_build(fom, train, full, n_max, tol, gram_tol);
}

/// Same greedy with the full-order solutions on the train set supplied by the caller.
template <FieldScalar Scalar>
ReducedBasis<Scalar> greedy_build(const FullOrderModel<Scalar>& fom, const std::vector<double>& train,
                                  const std::vector<Vector<Scalar>>& full, std::size_t n_max, double tol,
                                  double gram_tol = 1e-12) {
    if (train.empty() || full.size() != train.size())
        throw ContractViolation("greedy_build: need one full solution per train parameter");
    if (n_max == 0 || n_max > train.size())
        throw ContractViolation("greedy_build: n_max must be in [1, |train|]");

    std::vector<Vector<Scalar>> rhs(train.size());
    std::vector<double> norms(train.size());
    for (std::size_t t = 0; t < train.size(); ++t) {
        rhs[t] = fom.rhs(train[t]);
        norms[t] = fom.inner.size() == 0 ? full[t].norm()
                                         : std::sqrt(std::real(full[t].dot(fom.inner.template cast<Scalar>() * full[t])));
    }
    const Eigen::Index n = full[0].size();
    if (n_max > static_cast<std::size_t>(n))
        throw ContractViolation("greedy_build: n_max exceeds the full dimension");

    ReducedBasis<Scalar> rb;
    rb.gram_tol = gram_tol;
    rb.U.resize(n, 0);
    // A_mu U, grown by one column per enrichment.
    std::vector<Matrix<Scalar>> au(train.size(), Matrix<Scalar>(n, 0));

    std::size_t pick = detail::argmax(norms);
    for (;;) {
        Vector<Scalar> v = full[pick];
        const double original = v.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index j = 0; j < rb.U.cols(); ++j)
                v -= rb.U.col(j).dot(v) * rb.U.col(j);
        const double remaining = v.norm();
        if (remaining < gram_tol * original) {
            rb.stop = GreedyStop::dependent_snapshot;
            break;
        }
        rb.U.conservativeResize(Eigen::NoChange, rb.U.cols() + 1);
        rb.U.col(rb.U.cols() - 1) = v / remaining;
        rb.mu_rb.push_back(train[pick]);

        const auto k = rb.U.cols();
        std::vector<double> errors(train.size());
        for (std::size_t t = 0; t < train.size(); ++t) {
            au[t].conservativeResize(Eigen::NoChange, k);
            au[t].col(k - 1) = fom.matrix(train[t]) * rb.U.col(k - 1);
            const Matrix<Scalar> a_hat = rb.U.adjoint() * au[t];
            const Vector<Scalar> c_hat = rb.U.adjoint() * rhs[t];
            const Vector<Scalar> u_hat = rb.U * Eigen::PartialPivLU<Matrix<Scalar>>(a_hat).solve(c_hat);
            errors[t] = detail::solution_error<Scalar>(u_hat, full[t], fom.inner);
        }
        pick = detail::argmax(errors);
        rb.max_train_error.push_back(errors[pick]);
        if (static_cast<std::size_t>(k) >= n_max) {
            rb.stop = GreedyStop::max_size;
            break;
        }
        if (errors[pick] <= tol) {
            rb.stop = GreedyStop::tolerance;
            break;
        }
    }
    if (rb.U.cols() == 0)
        throw DegenerateInputError("greedy_build: first snapshot is zero");
    return rb;
}

template <FieldScalar Scalar>
struct ReducedModel {
    SeparatedCoefficients<Scalar> coefficients;
    std::vector<Matrix<Scalar>> reduced;  // U^H A_{mu_m} U
    Vector<Scalar> c_hat;
    Matrix<Scalar> U;

    Eigen::Index size() const noexcept { return U.cols(); }
};

/// Precomputes U^H S_m U for every snapshot and U^H C.
template <FieldScalar Scalar>
ReducedModel<Scalar> project(const SnapshotModel<Scalar>& model, const ReducedBasis<Scalar>& basis,
                             const Vector<Scalar>& c) {
    if (model.payload != PayloadKind::matrix)
        throw ContractViolation("project: snapshot model must store full matrices");
    const auto n = basis.U.rows();
    if (c.size() != n)
        throw ContractViolation("project: right-hand side length mismatch");
    ReducedModel<Scalar> rm;
    rm.coefficients = model.coefficients;
    rm.U = basis.U;
    rm.c_hat = basis.U.adjoint() * c;
    rm.reduced.reserve(model.size());
    for (const auto& s : model.snapshots) {
        if (s.rows() != n || s.cols() != n)
            throw ContractViolation("project: snapshot shape does not match the basis");
        rm.reduced.push_back(basis.U.adjoint() * s * basis.U);
    }
    return rm;
}

struct OnlineOps {
    std::size_t beta = 0;
    std::size_t assembly = 0;
    std::size_t solve = 0;

    std::size_t total() const noexcept { return beta + assembly + solve; }
};

template <FieldScalar Scalar>
struct OnlineSolution {
    Vector<Scalar> alpha_hat;
    Vector<Scalar> u;  // empty unless lifted
    OnlineOps ops;
};

/// Solves (sum_m beta_m(mu) U^H A_m U) alpha = U^H C; the lift u = U alpha is
/// the only step whose cost depends on n.
template <FieldScalar Scalar>
OnlineSolution<Scalar> online_solve(const ReducedModel<Scalar>& rm, double mu, bool lift = true) {
    OnlineSolution<Scalar> out;
    const Vector<Scalar> b = rm.coefficients.beta(mu);
    out.ops.beta = rm.coefficients.beta_ops();

    const auto k = rm.size();
    Matrix<Scalar> a_hat = Matrix<Scalar>::Zero(k, k);
    for (std::size_t m = 0; m < rm.reduced.size(); ++m) {
        a_hat.noalias() += b(static_cast<Eigen::Index>(m)) * rm.reduced[m];
        out.ops.assembly += static_cast<std::size_t>(rm.reduced[m].size());
    }
    Eigen::PartialPivLU<Matrix<Scalar>> lu(a_hat);
    const double rc = lu.rcond();
    if (!(rc > std::numeric_limits<double>::epsilon()))
        throw SingularMatrixError("online_solve: reduced matrix singular at mu = " + std::to_string(mu) +
                                  " (rcond = " + std::to_string(rc) + ")");
    out.alpha_hat = lu.solve(rm.c_hat);
    const auto kk = static_cast<std::size_t>(k);
    out.ops.solve = kk * kk * kk + kk * kk;
    if (lift)
        out.u = rm.U * out.alpha_hat;
    return out;
}

}  // namespace parasep

#pragma once
//
// Reference representations used to cross-check the nonintrusive model.
//
// IntrusiveModel integrates each basis function q_m against the problem's
// bilinear structure (needs quadrature access). WeaklyIntrusiveModel rewrites
// q_m in terms of g(mu_l, .) and combines separately assembled A^1 snapshots.
//

#include "eim.hpp"
#include "errors.hpp"
#include "scalar.hpp"
#include "term_layout.hpp"

#include <functional>
#include <string>
#include <vector>

namespace parasep {

/// Problem-side hooks for assembling the mu-independent term matrices.
template <FieldScalar Scalar>
struct QuadratureAccess {
    // Points at which the kernel's variable is sampled during assembly.
    std::vector<double> points;
    // Matrix of the (block, weight) bilinear structure with q sampled at `points`.
    std::function<Matrix<Scalar>(std::size_t, std::size_t, const Vector<Scalar>&)> kernel_term;
    // The mu-independent matrix multiplying psi_s.
    std::function<Matrix<Scalar>(std::size_t)> constant_term;
};

template <FieldScalar Scalar>
struct IntrusiveModel {
    TermLayout<Scalar> layout;
    std::vector<ZRowMeta> rows;
    std::vector<Matrix<Scalar>> T;  // aligned with rows

    /// sum_p z_p(mu) T_p.
    Matrix<Scalar> evaluate(double mu) const {
        const Vector<Scalar> z = layout.z(rows, mu);
        Matrix<Scalar> out = z(0) * T[0];
        for (std::size_t p = 1; p < T.size(); ++p)
            out.noalias() += z(static_cast<Eigen::Index>(p)) * T[p];
        return out;
    }
};

template <FieldScalar Scalar>
IntrusiveModel<Scalar> build_intrusive(const TermLayout<Scalar>& layout, const QuadratureAccess<Scalar>* access) {
    if (access == nullptr || !access->kernel_term || (!layout.psis.empty() && !access->constant_term))
        throw UnsupportedOracleError("build_intrusive: problem does not expose quadrature access");

    IntrusiveModel<Scalar> model;
    model.layout = layout;
    model.rows = layout.rows();

    std::vector<Matrix<Scalar>> basis(layout.blocks.size());
    for (std::size_t r = 0; r < layout.blocks.size(); ++r) {
        const auto& blk = layout.blocks[r];
        if (!blk.source)
            throw UnsupportedOracleError("build_intrusive: block " + std::to_string(r) + " has no offline interpolant");
        if (access->points == blk.source->col_labels)
            basis[r] = blk.source->Q;
        else
            basis[r] = basis_at(*blk.source, blk.kernel, std::span<const double>(access->points));
    }

    model.T.reserve(model.rows.size());
    for (const auto& row : model.rows) {
        if (row.kind == ZRowMeta::Kind::psi)
            model.T.push_back(access->constant_term(row.psi));
        else
            model.T.push_back(
                access->kernel_term(row.block, row.weight, basis[row.block].col(static_cast<Eigen::Index>(row.m))));
    }
    return model;
}

/// Separate access to the two terms of A_mu = A^1_mu + mu A^0.
template <FieldScalar Scalar>
struct SplitProvider {
    std::function<Matrix<Scalar>(double)> a1;
    std::function<Matrix<Scalar>()> a0;
};

template <FieldScalar Scalar>
struct WeaklyIntrusiveModel {
    NamedKernel<Scalar> kernel;
    std::vector<double> magic_points;
    std::vector<double> mu_g;    // parameters selected by the kernel interpolation
    Matrix<Scalar> B;
    Matrix<Scalar> Gamma;        // q_k = sum_l Gamma(l, k) g(mu_l, .)
    std::vector<Matrix<Scalar>> a1_snapshots;
    Matrix<Scalar> a0;
    std::size_t split_calls = 0;
    double gamma_rcond = 0.0;  // of the magic-point system

    Vector<Scalar> eta(double mu) const {
        Vector<Scalar> g(static_cast<Eigen::Index>(magic_points.size()));
        for (std::size_t m = 0; m < magic_points.size(); ++m)
            g(static_cast<Eigen::Index>(m)) = kernel(mu, magic_points[m]);
        const Vector<Scalar> lambda = B.template triangularView<Eigen::UnitLower>().solve(g);
        return Gamma * lambda;
    }

    /// sum_m eta_m(mu) A^1_{mu_m} + mu A^0.
    Matrix<Scalar> evaluate(double mu) const {
        const Vector<Scalar> e = eta(mu);
        Matrix<Scalar> out = Scalar(mu) * a0;
        for (std::size_t m = 0; m < a1_snapshots.size(); ++m)
            out.noalias() += e(static_cast<Eigen::Index>(m)) * a1_snapshots[m];
        return out;
    }

    /// q_k rebuilt from the kernel at the selected parameters.
    Matrix<Scalar> reconstructed_basis(std::span<const double> xs) const {
        Matrix<Scalar> g(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(mu_g.size()));
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t l = 0; l < mu_g.size(); ++l)
                g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = kernel(mu_g[l], xs[i]);
        return g * Gamma;
    }
};

/// Gamma solves G Gamma = B at the magic points, G(j, l) = g(mu_l, x_j).
template <FieldScalar Scalar>
WeaklyIntrusiveModel<Scalar> build_weakly_intrusive(const EimInterpolant<Scalar>& itp, NamedKernel<Scalar> kernel,
                                                    const SplitProvider<Scalar>& split) {
    if (!split.a1 || !split.a0)
        throw UnsupportedOracleError("build_weakly_intrusive: provider does not expose the split terms");
    WeaklyIntrusiveModel<Scalar> model;
    model.kernel = std::move(kernel);
    model.magic_points = itp.magic_points();
    model.mu_g = itp.selected_rows();
    model.B = itp.B;

    const auto d = static_cast<Eigen::Index>(itp.size());
    Matrix<Scalar> g(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index l = 0; l < d; ++l)
            g(j, l) = model.kernel(model.mu_g[static_cast<std::size_t>(l)], model.magic_points[static_cast<std::size_t>(j)]);
    Eigen::PartialPivLU<Matrix<Scalar>> lu(g);
    const double rc = lu.rcond();
    model.gamma_rcond = rc;
    if (!(rc > 0.0) || !std::isfinite(rc))
        throw IllConditionedError("build_weakly_intrusive: magic-point system is singular (rcond = " +
                                  std::to_string(rc) + ")");
    model.Gamma = lu.solve(itp.B);

    for (double mu : model.mu_g) {
        model.a1_snapshots.push_back(split.a1(mu));
        ++model.split_calls;
    }
    model.a0 = split.a0();
    ++model.split_calls;
    return model;
}

}  // namespace parasep

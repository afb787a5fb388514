#pragma once
//
// Declarative description of how A_mu depends on mu:
//
//   A_mu = sum_rho sum_w w(mu) sum_m lambda^rho_m(mu) M^{rho,w}_m + sum_s psi_s(mu) A^s
//
// and the resulting table of scalar functions z_p(mu), p = 1..d_max.
//

#include "eim.hpp"
#include "errors.hpp"
#include "functions.hpp"
#include "sample_grid.hpp"
#include "scalar.hpp"

#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace parasep {

/// One kernel g^rho, its online interpolation data, and the weights that
/// multiply its lambda block.
template <FieldScalar Scalar>
struct KernelBlock {
    NamedKernel<Scalar> kernel;
    std::vector<double> magic_points;
    Matrix<Scalar> B;
    std::vector<NamedFunction<Scalar>> weights;
    // Offline interpolant, kept for trial-set checks and oracles; absent after reload.
    std::shared_ptr<const EimInterpolant<Scalar>> source;

    static KernelBlock from_interpolant(std::shared_ptr<const EimInterpolant<Scalar>> itp, NamedKernel<Scalar> kernel,
                                        std::vector<NamedFunction<Scalar>> weights) {
        KernelBlock b;
        b.kernel = std::move(kernel);
        b.magic_points = itp->magic_points();
        b.B = itp->B;
        b.weights = std::move(weights);
        b.source = std::move(itp);
        return b;
    }

    std::size_t terms() const noexcept { return static_cast<std::size_t>(B.rows()); }

    /// lambda(mu) = B^{-1} G(mu), G_m = g(mu, x_m).
    Vector<Scalar> lambda(double mu) const {
        Vector<Scalar> g(static_cast<Eigen::Index>(magic_points.size()));
        for (std::size_t m = 0; m < magic_points.size(); ++m)
            g(static_cast<Eigen::Index>(m)) = kernel(mu, magic_points[m]);
        return B.template triangularView<Eigen::UnitLower>().solve(g);
    }
};

struct ZRowMeta {
    enum class Kind { lambda, psi };
    Kind kind = Kind::lambda;
    std::size_t block = 0;
    std::size_t weight = 0;
    std::size_t m = 0;
    std::size_t psi = 0;

    bool operator==(const ZRowMeta&) const = default;
};

template <FieldScalar Scalar>
struct TermLayout {
    std::vector<KernelBlock<Scalar>> blocks;
    std::vector<NamedFunction<Scalar>> psis;

    std::size_t d_max() const {
        std::size_t d = psis.size();
        for (const auto& b : blocks)
            d += b.weights.size() * b.terms();
        return d;
    }

    /// Row order: blocks in declaration order (weights outer, m inner), then psis.
    std::vector<ZRowMeta> rows() const {
        std::vector<ZRowMeta> out;
        out.reserve(d_max());
        for (std::size_t r = 0; r < blocks.size(); ++r)
            for (std::size_t w = 0; w < blocks[r].weights.size(); ++w)
                for (std::size_t m = 0; m < blocks[r].terms(); ++m)
                    out.push_back({ZRowMeta::Kind::lambda, r, w, m, 0});
        for (std::size_t s = 0; s < psis.size(); ++s)
            out.push_back({ZRowMeta::Kind::psi, 0, 0, 0, s});
        return out;
    }

    std::string describe(const ZRowMeta& row) const {
        if (row.kind == ZRowMeta::Kind::psi)
            return "psi[" + psis[row.psi].id + "]";
        return blocks[row.block].weights[row.weight].id + "*lambda[" + blocks[row.block].kernel.id + "][" +
               std::to_string(row.m) + "]";
    }

    /// z_p(mu) for the requested rows only; lambda blocks are solved once each.
    Vector<Scalar> z(std::span<const ZRowMeta> wanted, double mu) const {
        std::vector<Vector<Scalar>> lambdas(blocks.size());
        Vector<Scalar> out(static_cast<Eigen::Index>(wanted.size()));
        for (std::size_t i = 0; i < wanted.size(); ++i) {
            const ZRowMeta& row = wanted[i];
            Scalar v;
            if (row.kind == ZRowMeta::Kind::psi) {
                v = psis.at(row.psi)(mu);
            } else {
                const auto& blk = blocks.at(row.block);
                if (lambdas[row.block].size() == 0)
                    lambdas[row.block] = blk.lambda(mu);
                v = blk.weights.at(row.weight)(mu) * lambdas[row.block](static_cast<Eigen::Index>(row.m));
            }
            out(static_cast<Eigen::Index>(i)) = v;
        }
        return out;
    }

    Vector<Scalar> z(double mu) const {
        const auto all = rows();
        return z(all, mu);
    }

    /// Scalar operations needed by z(wanted, mu): one triangular solve per
    /// touched block plus one multiply per row.
    std::size_t z_ops(std::span<const ZRowMeta> wanted) const {
        std::vector<bool> touched(blocks.size(), false);
        std::size_t ops = wanted.size();
        for (const auto& row : wanted)
            if (row.kind == ZRowMeta::Kind::lambda && !touched[row.block]) {
                touched[row.block] = true;
                const std::size_t d = blocks[row.block].terms();
                ops += d * d;
            }
        return ops;
    }
};

/// Tabulated z_p(mu): d_max rows, one column per trial parameter.
template <FieldScalar Scalar>
struct ZTable {
    std::vector<ZRowMeta> row_meta;
    std::vector<double> mu_labels;
    Matrix<Scalar> values;

    std::size_t d_max() const noexcept { return row_meta.size(); }

    /// Rows = term index p (parameter role), columns = mu (variable role).
    SampleGrid<Scalar> as_grid() const {
        std::vector<double> p(row_meta.size());
        std::iota(p.begin(), p.end(), 0.0);
        return SampleGrid<Scalar>(std::move(p), mu_labels, values);
    }
};

template <FieldScalar Scalar>
ZTable<Scalar> build_z_table(const TermLayout<Scalar>& layout, const std::vector<double>& mu_trial) {
    if (layout.d_max() == 0)
        throw ContractViolation("build_z_table: layout has no terms");
    if (mu_trial.empty())
        throw ContractViolation("build_z_table: empty parameter trial set");
    for (std::size_t r = 0; r < layout.blocks.size(); ++r) {
        const auto& blk = layout.blocks[r];
        if (blk.B.rows() != static_cast<Eigen::Index>(blk.magic_points.size()) || blk.B.rows() != blk.B.cols())
            throw ContractViolation("build_z_table: block " + std::to_string(r) + " has inconsistent interpolation data");
        if (blk.source && blk.source->row_labels != mu_trial)
            throw ContractViolation("build_z_table: block " + std::to_string(r) +
                                    " was interpolated on a different parameter trial set");
    }
    ZTable<Scalar> t;
    t.row_meta = layout.rows();
    t.mu_labels = mu_trial;
    t.values.resize(static_cast<Eigen::Index>(t.row_meta.size()), static_cast<Eigen::Index>(mu_trial.size()));
    for (std::size_t j = 0; j < mu_trial.size(); ++j) {
        const Vector<Scalar> col = layout.z(t.row_meta, mu_trial[j]);
        for (Eigen::Index p = 0; p < col.size(); ++p) {
            if (!is_finite(col(p)))
                throw ContractViolation("build_z_table: " + layout.describe(t.row_meta[static_cast<std::size_t>(p)]) +
                                        " is not finite at mu = " + std::to_string(mu_trial[j]));
        }
        t.values.col(static_cast<Eigen::Index>(j)) = col;
    }
    return t;
}

/// Second-stage greedy interpolation on the z-table; row_sel = p^z, col_sel = mu^z.
template <FieldScalar Scalar>
EimInterpolant<Scalar> select_snapshots(const ZTable<Scalar>& ztable, std::size_t max_terms, double tol) {
    return build_interpolant(ztable.as_grid(), max_terms, tol);
}

template <FieldScalar Scalar>
EimInterpolant<Scalar> select_snapshots(const ZTable<Scalar>& ztable, std::size_t max_terms) {
    return build_interpolant(ztable.as_grid(), max_terms);
}

}  // namespace parasep

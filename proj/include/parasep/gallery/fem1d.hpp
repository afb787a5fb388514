#pragma once
//
// P1 finite elements on a uniform 1D mesh for
//   -(g(mu, x) u')' + mu u = 1,  u = 0 on Dirichlet ends,
// with a three-point Gauss rule per cell.
//

#include "../errors.hpp"
#include "../functions.hpp"
#include "../oracles.hpp"
#include "../scalar.hpp"

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace parasep::gallery {

struct Mesh1D {
    double a = 0.0;
    double b = 1.0;
    double h = 1.0;
    std::size_t cells = 1;
    std::vector<double> vertices;
    std::vector<double> gauss_points;   // 3 per cell, increasing
    std::vector<double> gauss_weights;

    static constexpr std::size_t points_per_cell = 3;

    /// Uniform mesh; (b - a) / h must be an integer up to rounding.
    static Mesh1D uniform(double a, double b, double h) {
        if (!(b > a) || !(h > 0.0) || !std::isfinite(a) || !std::isfinite(b))
            throw InvalidGeometryError("Mesh1D: need a < b and h > 0");
        const double ratio = (b - a) / h;
        const auto cells = static_cast<std::size_t>(std::llround(ratio));
        if (cells == 0 || std::abs(ratio - static_cast<double>(cells)) > 1e-8 * ratio)
            throw InvalidGeometryError("Mesh1D: interval length is not a multiple of h");
        Mesh1D m;
        m.a = a;
        m.b = b;
        m.cells = cells;
        m.h = (b - a) / static_cast<double>(cells);
        m.vertices.resize(cells + 1);
        for (std::size_t i = 0; i <= cells; ++i)
            m.vertices[i] = a + static_cast<double>(i) * m.h;
        m.vertices.back() = b;
        const double off = std::sqrt(3.0 / 5.0) * m.h / 2.0;
        const std::array<double, 3> w{5.0 / 18.0 * m.h, 8.0 / 18.0 * m.h, 5.0 / 18.0 * m.h};
        for (std::size_t c = 0; c < cells; ++c) {
            const double mid = 0.5 * (m.vertices[c] + m.vertices[c + 1]);
            m.gauss_points.insert(m.gauss_points.end(), {mid - off, mid, mid + off});
            m.gauss_weights.insert(m.gauss_weights.end(), w.begin(), w.end());
        }
        return m;
    }
};

class Fem1DProblem {
public:
    Fem1DProblem(Mesh1D mesh, NamedKernel<double> g, bool dirichlet_left = true, bool dirichlet_right = true)
        : mesh_(std::move(mesh)), g_(std::move(g)), dirichlet_left_(dirichlet_left), dirichlet_right_(dirichlet_right) {
        dof_.assign(mesh_.cells + 1, -1);
        Eigen::Index next = 0;
        for (std::size_t v = 0; v <= mesh_.cells; ++v) {
            const bool fixed = (v == 0 && dirichlet_left_) || (v == mesh_.cells && dirichlet_right_);
            if (!fixed)
                dof_[v] = next++;
        }
        n_ = next;
        if (n_ == 0)
            throw InvalidGeometryError("Fem1DProblem: no free degrees of freedom");
    }

    const Mesh1D& mesh() const noexcept { return mesh_; }
    const NamedKernel<double>& kernel() const noexcept { return g_; }
    Eigen::Index size() const noexcept { return n_; }

    /// Global dof of a vertex, or -1 when eliminated by a Dirichlet condition.
    Eigen::Index dof(std::size_t vertex) const { return dof_.at(vertex); }

    /// A_mu = int g(mu, x) theta_j' theta_i' + mu int theta_j theta_i.
    RealMatrix assemble(double mu) const {
        RealMatrix a = RealMatrix::Zero(n_, n_);
        const auto phi = shape_values();
        for (std::size_t c = 0; c < mesh_.cells; ++c) {
            double stiff = 0.0;
            std::array<std::array<double, 2>, 2> mass{};
            for (std::size_t q = 0; q < Mesh1D::points_per_cell; ++q) {
                const std::size_t k = c * Mesh1D::points_per_cell + q;
                stiff += mesh_.gauss_weights[k] * g_(mu, mesh_.gauss_points[k]);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        mass[i][j] += mesh_.gauss_weights[k] * phi[q][i] * phi[q][j];
            }
            stiff /= mesh_.h * mesh_.h;
            scatter(a, c, [&](int i, int j) { return (i == j ? stiff : -stiff) + mu * mass[i][j]; });
        }
        return a;
    }

    /// Stiffness matrix with the diffusion coefficient sampled at the Gauss points.
    RealMatrix stiffness(std::span<const double> coef_at_gauss) const {
        if (coef_at_gauss.size() != mesh_.gauss_points.size())
            throw ContractViolation("Fem1DProblem::stiffness: need one coefficient per Gauss point");
        RealMatrix a = RealMatrix::Zero(n_, n_);
        for (std::size_t c = 0; c < mesh_.cells; ++c) {
            double stiff = 0.0;
            for (std::size_t q = 0; q < Mesh1D::points_per_cell; ++q) {
                const std::size_t k = c * Mesh1D::points_per_cell + q;
                stiff += mesh_.gauss_weights[k] * coef_at_gauss[k];
            }
            stiff /= mesh_.h * mesh_.h;
            scatter(a, c, [&](int i, int j) { return i == j ? stiff : -stiff; });
        }
        return a;
    }

    RealMatrix mass() const {
        RealMatrix a = RealMatrix::Zero(n_, n_);
        const auto phi = shape_values();
        for (std::size_t c = 0; c < mesh_.cells; ++c) {
            std::array<std::array<double, 2>, 2> m{};
            for (std::size_t q = 0; q < Mesh1D::points_per_cell; ++q) {
                const double w = mesh_.gauss_weights[c * Mesh1D::points_per_cell + q];
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        m[i][j] += w * phi[q][i] * phi[q][j];
            }
            scatter(a, c, [&](int i, int j) { return m[i][j]; });
        }
        return a;
    }

    /// (A^1_mu, A^0) with A_mu = A^1_mu + mu A^0.
    std::pair<RealMatrix, RealMatrix> assemble_split(double mu) const { return {a1(mu), mass()}; }

    RealMatrix a1(double mu) const {
        std::vector<double> coef(mesh_.gauss_points.size());
        for (std::size_t k = 0; k < coef.size(); ++k)
            coef[k] = g_(mu, mesh_.gauss_points[k]);
        return stiffness(coef);
    }

    /// C_i = int theta_i (right-hand side 1).
    RealVector rhs() const {
        RealVector c = RealVector::Zero(n_);
        const auto phi = shape_values();
        for (std::size_t cell = 0; cell < mesh_.cells; ++cell)
            for (std::size_t q = 0; q < Mesh1D::points_per_cell; ++q) {
                const double w = mesh_.gauss_weights[cell * Mesh1D::points_per_cell + q];
                for (int i = 0; i < 2; ++i)
                    if (const auto gi = dof_[cell + static_cast<std::size_t>(i)]; gi >= 0)
                        c(gi) += w * phi[q][i];
            }
        return c;
    }

    /// Hooks for the intrusive oracle: single kernel block (stiffness) and A^0.
    QuadratureAccess<double> quadrature_access() const {
        QuadratureAccess<double> acc;
        acc.points = mesh_.gauss_points;
        acc.kernel_term = [this](std::size_t, std::size_t, const RealVector& q) {
            return stiffness(std::span<const double>(q.data(), static_cast<std::size_t>(q.size())));
        };
        acc.constant_term = [this](std::size_t) { return mass(); };
        return acc;
    }

    SplitProvider<double> split_provider() const {
        return {[this](double mu) { return a1(mu); }, [this] { return mass(); }};
    }

private:
    // Values of the two local hat functions at the three Gauss points.
    static std::array<std::array<double, 2>, 3> shape_values() {
        const double t = 0.5 * (1.0 - std::sqrt(3.0 / 5.0));
        return {{{1.0 - t, t}, {0.5, 0.5}, {t, 1.0 - t}}};
    }

    template <typename Local>
    void scatter(RealMatrix& a, std::size_t cell, Local&& local) const {
        for (int i = 0; i < 2; ++i) {
            const auto gi = dof_[cell + static_cast<std::size_t>(i)];
            if (gi < 0)
                continue;
            for (int j = 0; j < 2; ++j) {
                const auto gj = dof_[cell + static_cast<std::size_t>(j)];
                if (gj >= 0)
                    a(gi, gj) += local(i, j);
            }
        }
    }

    Mesh1D mesh_;
    NamedKernel<double> g_;
    bool dirichlet_left_;
    bool dirichlet_right_;
    std::vector<Eigen::Index> dof_;
    Eigen::Index n_ = 0;
};

}  // namespace parasep::gallery

#pragma once
//
// Dense complex matrices built from the oscillatory Green kernel on a point
// cloud:
//   A_mu[i, j] = (1 + mu^2) exp(i mu r_ij) / (4 pi r_ij),   i != j
//   A_mu[i, i] = (1 + mu^2) i mu / (4 pi)
//

#include "../errors.hpp"
#include "../functions.hpp"
#include "../oracles.hpp"
#include "../scalar.hpp"
#include "../term_layout.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace parasep::gallery {

using Point3 = std::array<double, 3>;

/// Deterministic quasi-uniform points on a sphere of the given radius.
inline std::vector<Point3> fibonacci_sphere(std::size_t n, double radius) {
    std::vector<Point3> pts(n);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double y = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const double rad = std::sqrt(std::max(0.0, 1.0 - y * y));
        const double phi = golden * static_cast<double>(i);
        pts[i] = {radius * rad * std::cos(phi), radius * y, radius * rad * std::sin(phi)};
    }
    return pts;
}

inline double distance(const Point3& p, const Point3& q) {
    return std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]);
}

class KernelProblem {
public:
    explicit KernelProblem(std::vector<Point3> points) : points_(std::move(points)) {
        const auto n = static_cast<Eigen::Index>(points_.size());
        if (n < 2)
            throw InvalidGeometryError("KernelProblem: need at least two points");
        r_ = RealMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double d = distance(points_[static_cast<std::size_t>(i)], points_[static_cast<std::size_t>(j)]);
                if (!(d > 0.0))
                    throw InvalidGeometryError("KernelProblem: points " + std::to_string(i) + " and " +
                                               std::to_string(j) + " coincide");
                r_(i, j) = r_(j, i) = d;
                pair_distances_.push_back(d);
            }
        diameter_ = r_.maxCoeff();
    }

    Eigen::Index size() const noexcept { return r_.rows(); }
    const std::vector<Point3>& points() const noexcept { return points_; }
    const RealMatrix& distances() const noexcept { return r_; }
    double diameter() const noexcept { return diameter_; }

    ComplexMatrix assemble(double mu) const {
        const auto n = size();
        const double scale = (1.0 + mu * mu) / (4.0 * std::numbers::pi);
        ComplexMatrix a(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                a(i, j) = i == j ? scale * Complex(0.0, mu) : scale * std::exp(Complex(0.0, mu * r_(i, j))) / r_(i, j);
        return a;
    }

    /// Field of a monopole at `source` sampled on the cloud.
    ComplexVector monopole_rhs(double mu, const Point3& source) const {
        ComplexVector c(size());
        for (Eigen::Index i = 0; i < size(); ++i) {
            const double d = distance(points_[static_cast<std::size_t>(i)], source);
            c(i) = std::exp(Complex(0.0, mu * d)) / (4.0 * std::numbers::pi * d);
        }
        return c;
    }

    /// Uniform distance grid {h, 2h, ..., n h} with h = diameter / n.
    std::vector<double> distance_grid(std::size_t n) const {
        std::vector<double> r(n);
        for (std::size_t k = 0; k < n; ++k)
            r[k] = diameter_ * static_cast<double>(k + 1) / static_cast<double>(n);
        return r;
    }

    /// Kernel block with weights {1, mu^2} plus diagonal psi rows {mu, mu^3}.
    TermLayout<Complex> layout(std::shared_ptr<const EimInterpolant<Complex>> itp,
                               const FunctionRegistry<Complex>& reg) const {
        TermLayout<Complex> l;
        l.blocks.push_back(KernelBlock<Complex>::from_interpolant(std::move(itp), reg.kernel("exp(i*mu*r)"),
                                                                  {reg.function("1"), reg.function("mu^2")}));
        l.psis = {reg.function("mu"), reg.function("mu^3")};
        return l;
    }

    /// Off-diagonal entries q(r_ij) / (4 pi r_ij) for both weights; (i / 4 pi) I
    /// for both psi rows.
    QuadratureAccess<Complex> quadrature_access() const {
        QuadratureAccess<Complex> acc;
        acc.points = pair_distances_;
        acc.kernel_term = [this](std::size_t, std::size_t, const ComplexVector& q) {
            const auto n = size();
            ComplexMatrix m = ComplexMatrix::Zero(n, n);
            Eigen::Index k = 0;
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = i + 1; j < n; ++j, ++k)
                    m(i, j) = m(j, i) = q(k) / (4.0 * std::numbers::pi * r_(i, j));
            return m;
        };
        acc.constant_term = [this](std::size_t) {
            return ComplexMatrix(ComplexMatrix::Identity(size(), size()) * Complex(0.0, 1.0 / (4.0 * std::numbers::pi)));
        };
        return acc;
    }

private:
    std::vector<Point3> points_;
    RealMatrix r_;
    std::vector<double> pair_distances_;  // i < j, row-major
    double diameter_ = 0.0;
};

}  // namespace parasep::gallery

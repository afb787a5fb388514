#pragma once
// Independent reference computations shared by the test suites. Nothing here
// calls into the library's algorithms, only its data types.

#include <parasep/scalar.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace oracle {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct Greedy {
    std::vector<Eigen::Index> rows, cols;
    std::vector<double> history;
};

// Greedy interpolation recomputed from scratch at every step: interpolate each
// grid row through the selected columns with a dense solve and scan the
// residual of the whole grid.
template <typename Scalar>
Greedy<Scalar> brute_force_greedy(const Mat<Scalar>& g, int terms) {
    Greedy<Scalar> out;
    Mat<Scalar> basis(g.cols(), 0);
    for (int k = 0; k < terms; ++k) {
        Mat<Scalar> residual = g;
        if (k > 0) {
            Mat<Scalar> at(k, k);
            for (int l = 0; l < k; ++l)
                for (int m = 0; m < k; ++m)
                    at(l, m) = basis(out.cols[l], m);
            Mat<Scalar> g_at(g.rows(), k);
            for (int m = 0; m < k; ++m)
                g_at.col(m) = g.col(out.cols[m]);
            const Mat<Scalar> coeff = at.fullPivLu().solve(g_at.transpose());
            residual -= coeff.transpose() * basis.transpose();
        }
        Eigen::Index bi = 0, bj = 0;
        double best = -1;
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                if (std::abs(residual(i, j)) > best) {
                    best = std::abs(residual(i, j));
                    bi = i;
                    bj = j;
                }
        out.rows.push_back(bi);
        out.cols.push_back(bj);
        out.history.push_back(best);
        basis.conservativeResize(Eigen::NoChange, k + 1);
        basis.col(k) = residual.row(bi).transpose() / residual(bi, bj);
    }
    return out;
}

// Entries of the P1 stiffness/reaction matrix for -(g u')' + mu u on a uniform
// mesh with homogeneous Dirichlet ends, computed cell by cell from the three
// Gauss nodes of each cell.
inline Mat<double> fem_matrix(double a, double b, int cells, double mu, double (*g)(double, double)) {
    const double h = (b - a) / cells;
    const int n = cells - 1;
    Mat<double> m = Mat<double>::Zero(n, n);
    const double s = std::sqrt(0.6);
    const double nodes[3] = {-s, 0.0, s};
    const double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    for (int c = 0; c < cells; ++c) {
        const double x0 = a + c * h;
        for (int q = 0; q < 3; ++q) {
            const double t = 0.5 * (nodes[q] + 1.0);
            const double x = x0 + t * h;
            const double w = 0.5 * weights[q] * h;
            const double phi[2] = {1.0 - t, t};
            const double dphi[2] = {-1.0 / h, 1.0 / h};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const int gi = c + i - 1, gj = c + j - 1;
                    if (gi < 0 || gj < 0 || gi >= n || gj >= n)
                        continue;
                    m(gi, gj) += w * (g(mu, x) * dphi[i] * dphi[j] + mu * phi[i] * phi[j]);
                }
        }
    }
    return m;
}

}  // namespace oracle

#pragma once
//
// Binds a configuration to one gallery problem behind a field-generic facade.
//

#include "../functions.hpp"
#include "../gallery/fem1d.hpp"
#include "../gallery/kernel_family.hpp"
#include "../oracles.hpp"
#include "../term_layout.hpp"
#include "config.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace parasep::experiment {

template <FieldScalar Scalar>
struct ProblemSetup {
    using scalar_type = Scalar;

    std::function<Matrix<Scalar>(double)> assemble;
    std::function<Vector<Scalar>(double)> rhs;
    bool rhs_depends_on_mu = false;
    RealMatrix inner;  // L2 Gram matrix, empty when errors are Euclidean
    std::vector<double> omega_trial;
    NamedKernel<Scalar> kernel;
    std::function<TermLayout<Scalar>(std::shared_ptr<const EimInterpolant<Scalar>>)> make_layout;
    std::optional<QuadratureAccess<Scalar>> quadrature;
    std::optional<SplitProvider<Scalar>> split;
    Eigen::Index size = 0;
    std::shared_ptr<const void> owner;  // keeps the problem alive for the callables above
};

inline ProblemSetup<double> make_fem1d(const Fem1DSettings& s) {
    const auto reg = FunctionRegistry<double>::builtin();
    std::shared_ptr<const gallery::Fem1DProblem> prob;
    try {
        prob = std::make_shared<const gallery::Fem1DProblem>(gallery::Mesh1D::uniform(s.a, s.b, s.h_x),
                                                             reg.kernel(s.kernel));
    } catch (const InvalidGeometryError& e) {
        throw ConfigError(e.what());
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
    ProblemSetup<double> setup;
    setup.assemble = [prob](double mu) { return prob->assemble(mu); };
    setup.rhs = [prob](double) { return prob->rhs(); };
    setup.inner = prob->mass();
    setup.omega_trial = prob->mesh().gauss_points;
    setup.kernel = prob->kernel();
    setup.make_layout = [reg, g = prob->kernel()](std::shared_ptr<const EimInterpolant<double>> itp) {
        TermLayout<double> l;
        l.blocks.push_back(KernelBlock<double>::from_interpolant(std::move(itp), g, {reg.function("1")}));
        l.psis = {reg.function("mu")};
        return l;
    };
    setup.quadrature = prob->quadrature_access();
    setup.split = prob->split_provider();
    setup.size = prob->size();
    setup.owner = prob;
    return setup;
}

inline ProblemSetup<Complex> make_kernel(const KernelSettings& s) {
    const auto reg = FunctionRegistry<Complex>::builtin();
    std::shared_ptr<const gallery::KernelProblem> prob;
    try {
        prob = std::make_shared<const gallery::KernelProblem>(gallery::fibonacci_sphere(s.points, s.radius));
    } catch (const InvalidGeometryError& e) {
        throw ConfigError(e.what());
    }
    ProblemSetup<Complex> setup;
    setup.assemble = [prob](double mu) { return prob->assemble(mu); };
    setup.rhs = [prob, src = gallery::Point3{s.source[0], s.source[1], s.source[2]}](double mu) {
        return prob->monopole_rhs(mu, src);
    };
    setup.rhs_depends_on_mu = true;
    setup.omega_trial = prob->distance_grid(s.r_grid);
    setup.kernel = reg.kernel("exp(i*mu*r)");
    setup.make_layout = [prob, reg](std::shared_ptr<const EimInterpolant<Complex>> itp) {
        return prob->layout(std::move(itp), reg);
    };
    setup.quadrature = prob->quadrature_access();
    setup.size = prob->size();
    setup.owner = prob;
    return setup;
}

/// Calls fn(setup) with the problem selected by the config.
template <typename Fn>
decltype(auto) with_problem(const ExperimentConfig& cfg, Fn&& fn) {
    if (cfg.problem == "kernel")
        return fn(make_kernel(cfg.kernel));
    return fn(make_fem1d(cfg.fem1d));
}

}  // namespace parasep::experiment

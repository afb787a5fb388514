#pragma once
//
// Named analytic functions of the parameter (weights, psi terms) and named
// kernels g(mu, x). Layouts refer to them by identifier so that a serialized
// model can be re-evaluated at any mu without the offline data.
//

#include "errors.hpp"
#include "scalar.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <utility>

namespace parasep {

template <FieldScalar Scalar>
struct NamedFunction {
    std::string id;
    std::function<Scalar(double)> fn;

    Scalar operator()(double mu) const {
        if (!fn)
            throw ContractViolation("function '" + id + "' has no evaluator");
        return fn(mu);
    }
};

template <FieldScalar Scalar>
struct NamedKernel {
    std::string id;
    std::function<Scalar(double, double)> fn;

    Scalar operator()(double mu, double x) const {
        if (!fn)
            throw ContractViolation("kernel '" + id + "' has no evaluator");
        return fn(mu, x);
    }
};

/// Identifier -> callable lookup. `builtin()` knows every function used by the
/// shipped problems; tests and callers may register more.
template <FieldScalar Scalar>
class FunctionRegistry {
public:
    static FunctionRegistry builtin() {
        FunctionRegistry r;
        r.add_function("1", [](double) { return Scalar(1); });
        r.add_function("mu", [](double mu) { return Scalar(mu); });
        r.add_function("mu^2", [](double mu) { return Scalar(mu * mu); });
        r.add_function("mu^3", [](double mu) { return Scalar(mu * mu * mu); });

        r.add_kernel("1", [](double, double) { return Scalar(1); });
        r.add_kernel("0", [](double, double) { return Scalar(0); });
        r.add_kernel("exp(mu*x)", [](double mu, double x) { return Scalar(std::exp(mu * x)); });
        // Three separated terms: exp(mu/4) + sin(mu) x/4 + mu^2 x^2/36.
        r.add_kernel("separable3", [](double mu, double x) {
            return Scalar(std::exp(mu / 4.0) + std::sin(mu) * x / 4.0 + mu * mu * x * x / 36.0);
        });
        if constexpr (is_complex<Scalar>::value) {
            r.add_kernel("exp(i*mu*r)", [](double mu, double rr) { return std::exp(Complex(0.0, mu * rr)); });
        }
        return r;
    }

    void add_function(std::string id, std::function<Scalar(double)> fn) { functions_[std::move(id)] = std::move(fn); }
    void add_kernel(std::string id, std::function<Scalar(double, double)> fn) { kernels_[std::move(id)] = std::move(fn); }

    NamedFunction<Scalar> function(const std::string& id) const {
        if (auto it = functions_.find(id); it != functions_.end())
            return {id, it->second};
        // "convected:<c>" is mu (2 i pi mu / c - 1), the convected-flow weight.
        if (id.rfind("convected:", 0) == 0) {
            if constexpr (is_complex<Scalar>::value) {
                const double c = std::stod(id.substr(10));
                return {id, [c](double mu) { return mu * (Complex(0.0, 2.0 * std::numbers::pi * mu / c) - 1.0); }};
            } else {
                throw ContractViolation("function '" + id + "' is complex-valued");
            }
        }
        throw ContractViolation("unknown function identifier '" + id + "'");
    }

    NamedKernel<Scalar> kernel(const std::string& id) const {
        if (auto it = kernels_.find(id); it != kernels_.end())
            return {id, it->second};
        throw ContractViolation("unknown kernel identifier '" + id + "'");
    }

private:
    std::map<std::string, std::function<Scalar(double)>> functions_;
    std::map<std::string, std::function<Scalar(double, double)>> kernels_;
};

}  // namespace parasep

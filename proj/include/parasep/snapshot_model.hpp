#pragma once
//
// Nonintrusive separated representation A_mu ~ sum_m beta_m(mu) A_{mu_m}.
//
// Only full assembled payloads at the selected parameters are ever requested
// from the provider; the coefficients beta(mu) come from the interpolation
// conditions on the selected z-rows.
//

#include "eim.hpp"
#include "errors.hpp"
#include "scalar.hpp"
#include "term_layout.hpp"

#include <atomic>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace parasep {

enum class PayloadKind { matrix, functional, vector };

inline std::string payload_name(PayloadKind k) {
    switch (k) {
    case PayloadKind::matrix: return "matrix";
    case PayloadKind::functional: return "functional";
    case PayloadKind::vector: return "vector";
    }
    return "matrix";
}

inline PayloadKind payload_from_name(const std::string& s) {
    if (s == "matrix") return PayloadKind::matrix;
    if (s == "functional") return PayloadKind::functional;
    if (s == "vector") return PayloadKind::vector;
    throw ContractViolation("unknown payload kind '" + s + "'");
}

/// Reciprocal condition estimates of Z below this value are reported as warnings.
inline constexpr double z_rcond_warning = 1e-14;

/// Online part of the model: everything needed to compute beta(mu).
template <FieldScalar Scalar>
class SeparatedCoefficients {
public:
    SeparatedCoefficients() = default;

    SeparatedCoefficients(TermLayout<Scalar> layout, std::vector<std::size_t> p_sel, std::vector<double> mu_sel,
                          Matrix<Scalar> z)
        : layout_(std::move(layout)), p_sel_(std::move(p_sel)), mu_sel_(std::move(mu_sel)), z_(std::move(z)) {
        if (z_.rows() != z_.cols() || z_.rows() != static_cast<Eigen::Index>(p_sel_.size()) ||
            p_sel_.size() != mu_sel_.size())
            throw ContractViolation("SeparatedCoefficients: Z must be d^z x d^z with matching selections");
        const auto all = layout_.rows();
        for (auto p : p_sel_) {
            if (p >= all.size())
                throw ContractViolation("SeparatedCoefficients: selected row " + std::to_string(p) + " out of range");
            rows_.push_back(all[p]);
        }
        lu_ = Eigen::PartialPivLU<Matrix<Scalar>>(z_);
        rcond_ = lu_.rcond();
        if (!(rcond_ > 0.0) || !std::isfinite(rcond_))
            throw IllConditionedError("interpolation matrix Z is numerically singular (rcond = " + sci(rcond_) + ")");
        if (rcond_ < z_rcond_warning)
            warnings_.push_back("interpolation matrix Z is ill-conditioned (rcond = " + sci(rcond_) + ")");
    }

    std::size_t size() const noexcept { return p_sel_.size(); }
    const TermLayout<Scalar>& layout() const noexcept { return layout_; }
    const std::vector<std::size_t>& p_sel() const noexcept { return p_sel_; }
    const std::vector<double>& mu_sel() const noexcept { return mu_sel_; }
    const std::vector<ZRowMeta>& selected_rows() const noexcept { return rows_; }
    const Matrix<Scalar>& Z() const noexcept { return z_; }
    double rcond() const noexcept { return rcond_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// w_l = z_{p_l}(mu) on the selected rows.
    Vector<Scalar> targets(double mu) const { return layout_.z(rows_, mu); }

    /// Solves Z beta = w(mu).
    Vector<Scalar> beta(double mu) const { return lu_.solve(targets(mu)); }

    /// Scalar operations for one beta(mu): z-row evaluation plus the LU solve.
    std::size_t beta_ops() const { return layout_.z_ops(rows_) + 2 * size() * size(); }

private:
    static std::string sci(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", v);
        return buf;
    }

    TermLayout<Scalar> layout_;
    std::vector<std::size_t> p_sel_;
    std::vector<double> mu_sel_;
    std::vector<ZRowMeta> rows_;
    Matrix<Scalar> z_;
    Eigen::PartialPivLU<Matrix<Scalar>> lu_;
    double rcond_ = 0.0;
    std::vector<std::string> warnings_;
};

template <FieldScalar Scalar>
struct SnapshotModel {
    SeparatedCoefficients<Scalar> coefficients;
    std::vector<Matrix<Scalar>> snapshots;
    PayloadKind payload = PayloadKind::matrix;
    std::size_t provider_calls = 0;

    std::size_t size() const noexcept { return snapshots.size(); }
    const std::vector<double>& mu_sel() const noexcept { return coefficients.mu_sel(); }
};

/// Provider wrapper that counts invocations; safe to share across threads.
template <typename Provider>
class CountingProvider {
public:
    explicit CountingProvider(Provider inner) : inner_(std::move(inner)) {}

    decltype(auto) operator()(double mu) const {
        calls_->fetch_add(1, std::memory_order_relaxed);
        return inner_(mu);
    }

    std::size_t calls() const noexcept { return calls_->load(); }

private:
    Provider inner_;
    std::shared_ptr<std::atomic<std::size_t>> calls_ = std::make_shared<std::atomic<std::size_t>>(0);
};

template <FieldScalar Scalar>
using Functional = std::function<Matrix<Scalar>(const Matrix<Scalar>&)>;

/// Assembles the d^z snapshots through `provider` (exactly once per selected mu)
/// and fills Z from the tabulated z-table.
template <FieldScalar Scalar, typename Provider>
SnapshotModel<Scalar> instantiate(const EimInterpolant<Scalar>& selection, const ZTable<Scalar>& ztable,
                                  const TermLayout<Scalar>& layout, Provider&& provider,
                                  PayloadKind payload = PayloadKind::matrix, const Functional<Scalar>& l = {}) {
    if (payload == PayloadKind::functional && !l)
        throw ContractViolation("instantiate: functional payload requires a functional");
    if (selection.row_labels.size() != ztable.d_max() || selection.col_labels != ztable.mu_labels)
        throw ContractViolation("instantiate: selection was not built on this z-table");
    if (layout.rows() != ztable.row_meta)
        throw ContractViolation("instantiate: layout does not match the z-table rows");

    const std::size_t dz = selection.size();
    std::vector<double> mu_sel(dz);
    Matrix<Scalar> z(static_cast<Eigen::Index>(dz), static_cast<Eigen::Index>(dz));
    for (std::size_t m = 0; m < dz; ++m) {
        mu_sel[m] = ztable.mu_labels[selection.col_sel[m]];
        for (std::size_t l = 0; l < dz; ++l)
            z(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m)) =
                ztable.values(static_cast<Eigen::Index>(selection.row_sel[l]),
                              static_cast<Eigen::Index>(selection.col_sel[m]));
    }

    SnapshotModel<Scalar> model;
    model.payload = payload;
    model.snapshots.reserve(dz);
    for (double mu : mu_sel) {
        Matrix<Scalar> a;
        try {
            ++model.provider_calls;
            a = provider(mu);
        } catch (const ProviderError&) {
            throw;
        } catch (const std::exception& e) {
            throw ProviderError(mu, e.what());
        }
        if (payload == PayloadKind::vector && a.cols() != 1)
            throw ContractViolation("instantiate: vector payload expects a single column");
        model.snapshots.push_back(payload == PayloadKind::functional ? l(a) : std::move(a));
    }
    model.coefficients = SeparatedCoefficients<Scalar>(layout, selection.row_sel, std::move(mu_sel), std::move(z));
    return model;
}

template <FieldScalar Scalar>
Vector<Scalar> beta(const SnapshotModel<Scalar>& model, double mu) {
    return model.coefficients.beta(mu);
}

template <FieldScalar Scalar>
Matrix<Scalar> combine(const std::vector<Matrix<Scalar>>& snapshots, const Vector<Scalar>& coeffs) {
    if (snapshots.empty() || coeffs.size() != static_cast<Eigen::Index>(snapshots.size()))
        throw ContractViolation("combine: coefficient count does not match snapshot count");
    Matrix<Scalar> out = coeffs(0) * snapshots[0];
    for (std::size_t m = 1; m < snapshots.size(); ++m)
        out.noalias() += coeffs(static_cast<Eigen::Index>(m)) * snapshots[m];
    return out;
}

/// sum_m beta_m(mu) snapshots[m].
template <FieldScalar Scalar>
Matrix<Scalar> approximate(const SnapshotModel<Scalar>& model, double mu) {
    return combine(model.snapshots, beta(model, mu));
}

}  // namespace parasep

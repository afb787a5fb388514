#pragma once
//
// Study drivers behind the command-line tool: the convergence sweep over d^g,
// the call-count audit, the reduced-basis pipeline and online replay.
//
// Results go to files under the configured output directory. Anything that
// depends on wall-clock time is kept out of the CSVs and summary.json.
//

#include "../eim.hpp"
#include "../linalg.hpp"
#include "../oracles.hpp"
#include "../reduced_basis.hpp"
#include "../serialization.hpp"
#include "../snapshot_model.hpp"
#include "../term_layout.hpp"
#include "config.hpp"
#include "problems.hpp"
#include "report.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace parasep::experiment {

class AuditViolation : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown while evaluating at a given parameter.
class NumericalFailure : public Error {
public:
    NumericalFailure(double mu, const std::string& what)
        : Error("numerical failure at mu = " + format17(mu) + ": " + what), mu_(mu) {}

    double mu() const noexcept { return mu_; }

private:
    double mu_;
};

/// 0 success, 2 configuration, 3 numerical, 4 audit.
inline int exit_code(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e))
        return 2;
    if (dynamic_cast<const AuditViolation*>(&e))
        return 4;
    if (dynamic_cast<const nlohmann::json::exception*>(&e))
        return 2;
    return 3;
}

/// Kernel interpolant, term layout and z-table for one d^g.
template <FieldScalar Scalar>
struct Stage {
    std::size_t dg_requested = 0;
    std::shared_ptr<const EimInterpolant<Scalar>> eim_g;
    TermLayout<Scalar> layout;
    ZTable<Scalar> ztable;

    std::size_t dg() const { return eim_g->size(); }
    std::size_t d_max() const { return ztable.d_max(); }
};

template <FieldScalar Scalar>
Stage<Scalar> build_stage(const ProblemSetup<Scalar>& setup, const std::vector<double>& mu_trial, std::size_t dg,
                          double rel_tol) {
    if (dg > std::min(mu_trial.size(), setup.omega_trial.size()))
        throw ConfigError("d^g = " + std::to_string(dg) + " exceeds the size of the trial sets");
    const auto grid = SampleGrid<Scalar>::tabulate(mu_trial, setup.omega_trial,
                                                   [&](double mu, double x) { return setup.kernel(mu, x); });
    Stage<Scalar> s;
    s.dg_requested = dg;
    s.eim_g = std::make_shared<const EimInterpolant<Scalar>>(build_interpolant_relative(grid, dg, rel_tol));
    s.layout = setup.make_layout(s.eim_g);
    s.ztable = build_z_table(s.layout, mu_trial);
    return s;
}

template <FieldScalar Scalar>
std::size_t resolve_dz(const DzRule& rule, const Stage<Scalar>& stage) {
    const std::size_t dz = rule.resolve(stage.dg(), stage.d_max());
    if (dz == 0 || dz > stage.d_max() || dz > stage.ztable.mu_labels.size())
        throw ConfigError("d^z = " + std::to_string(dz) + " is not in [1, min(d_max = " +
                          std::to_string(stage.d_max()) + ", |mu_trial|)]");
    return dz;
}

template <FieldScalar Scalar>
EimInterpolant<Scalar> select_terms(const Stage<Scalar>& stage, std::size_t dz, double rel_tol) {
    return build_interpolant_relative(stage.ztable.as_grid(), dz, rel_tol);
}

struct SweepResult {
    std::vector<double> mu;
    std::vector<double> matrix_error;
    std::vector<double> solution_error;
};

/// Relative Frobenius error of approx(mu) against the assembled matrix, and the
/// relative error of the corresponding solves, at every mu.
template <FieldScalar Scalar, typename Approx>
SweepResult validation_sweep(const ProblemSetup<Scalar>& setup, const std::vector<double>& mus, Approx&& approx) {
    SweepResult r;
    r.mu = mus;
    r.matrix_error.resize(mus.size());
    r.solution_error.resize(mus.size());
    parallel_for(mus.size(), [&](std::size_t i) {
        const double mu = mus[i];
        try {
            const Matrix<Scalar> exact = setup.assemble(mu);
            const Matrix<Scalar> a = approx(mu);
            r.matrix_error[i] = relative_frobenius_error(a, exact);
            const Vector<Scalar> c = setup.rhs(mu);
            const Vector<Scalar> u = solve_dense<Scalar>(exact, c);
            const Vector<Scalar> ua = solve_dense<Scalar>(a, c);
            r.solution_error[i] = parasep::detail::solution_error<Scalar>(ua, u, setup.inner);
        } catch (const SingularMatrixError& e) {
            throw NumericalFailure(mu, e.what());
        }
    });
    return r;
}

/// Max relative Frobenius distance between two evaluators over mus.
template <FieldScalar Scalar, typename F, typename G>
double max_distance(const std::vector<double>& mus, F&& f, G&& g) {
    std::vector<double> d(mus.size());
    parallel_for(mus.size(), [&](std::size_t i) {
        const Matrix<Scalar> b = g(mus[i]);
        d[i] = relative_frobenius_error(f(mus[i]), b);
    });
    return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

namespace detail {

inline nlohmann::json stats_json(const std::vector<double>& mu, const std::vector<double>& err) {
    const auto s = stats(mu, err);
    return {{"max", s.max}, {"median", s.median}, {"argmax_mu", s.argmax}};
}

template <FieldScalar Scalar>
nlohmann::json selection_json(const Stage<Scalar>& stage, const EimInterpolant<Scalar>& sel) {
    nlohmann::json rows = nlohmann::json::array();
    for (auto p : sel.row_sel)
        rows.push_back(stage.layout.describe(stage.ztable.row_meta[p]));
    return {{"mu_g", stage.eim_g->selected_rows()},
            {"magic_points", stage.eim_g->magic_points()},
            {"residual_history_g", stage.eim_g->residual_history},
            {"eim_g_stop", stage.eim_g->stop == EimStop::tolerance ? "tolerance" : "max_terms"},
            {"mu_z", sel.magic_points()},
            {"p_z", sel.row_sel},
            {"p_z_terms", rows},
            {"residual_history_z", sel.residual_history},
            {"eim_z_stop", sel.stop == EimStop::tolerance ? "tolerance" : "max_terms"}};
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream os(path);
    os << j.dump(2) << '\n';
    if (!os)
        throw Error("failed writing '" + path.string() + "'");
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string dg_dir(std::size_t dg) { return "dg_" + std::to_string(dg); }

}  // namespace detail

struct StudyOptions {
    bool svg = false;
    std::ostream* log = &std::cerr;
};

/// Convergence study over the configured d^g list.
inline nlohmann::json run_study(const ExperimentConfig& cfg, const StudyOptions& opt = {}) {
    if (cfg.payload != "matrix")
        throw ConfigError("run-study compares full matrices; payload must be 'matrix'");
    ensure_writable(cfg.output_dir);
    const auto mu_trial = cfg.mu_trial.values();
    const auto mu_val = cfg.validation_mu();

    return with_problem(cfg, [&](const auto& setup) {
        using Scalar = typename std::decay_t<decltype(setup)>::scalar_type;
        nlohmann::json studies = nlohmann::json::array();
        std::vector<double> max_by_dg;
        for (std::size_t dg : cfg.dg) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto stage = build_stage(setup, mu_trial, dg, cfg.eim_g_tol);
            const std::size_t dz = resolve_dz(cfg.dz, stage);
            const auto sel = select_terms(stage, dz, cfg.eim_z_tol);
            CountingProvider counted(setup.assemble);
            const auto model = instantiate(sel, stage.ztable, stage.layout, counted);
            const auto sweep = validation_sweep(setup, mu_val, [&](double mu) { return approximate(model, mu); });

            double selected_max = 0.0;
            for (std::size_t k = 0; k < model.size(); ++k)
                selected_max = std::max(selected_max,
                                        relative_frobenius_error(approximate(model, model.mu_sel()[k]), model.snapshots[k]));

            const auto dir = cfg.output_dir / detail::dg_dir(dg);
            std::filesystem::create_directories(dir);
            write_columns(dir / "matrix_error.csv", {"mu", "rel_frobenius_error"}, {sweep.mu, sweep.matrix_error});
            write_columns(dir / "solution_error.csv", {"mu", "rel_l2_error"}, {sweep.mu, sweep.solution_error});
            if (opt.svg) {
                write_svg(dir / "matrix_error.svg", "relative Frobenius error, d^g = " + std::to_string(dg), sweep.mu,
                          sweep.matrix_error);
                write_svg(dir / "solution_error.svg", "relative L2 solution error, d^g = " + std::to_string(dg),
                          sweep.mu, sweep.solution_error);
            }

            nlohmann::json entry = {{"dg_requested", dg},
                                    {"dg", stage.dg()},
                                    {"d_max", stage.d_max()},
                                    {"dz", model.size()},
                                    {"provider_calls", counted.calls()},
                                    {"z_rcond", model.coefficients.rcond()},
                                    {"warnings", model.coefficients.warnings()},
                                    {"selected_max_matrix_error", selected_max},
                                    {"validation_count", mu_val.size()},
                                    {"matrix_error", detail::stats_json(sweep.mu, sweep.matrix_error)},
                                    {"solution_error", detail::stats_json(sweep.mu, sweep.solution_error)}};
            entry.update(detail::selection_json(stage, sel));
            max_by_dg.push_back(stats(sweep.mu, sweep.matrix_error).max);

            std::optional<SnapshotModel<Scalar>> full_model;
            if (cfg.compare_dmax) {
                const auto sel_max = select_terms(stage, stage.d_max(), 0.0);
                CountingProvider counted_max(setup.assemble);
                full_model = instantiate(sel_max, stage.ztable, stage.layout, counted_max);
                const auto ref =
                    validation_sweep(setup, mu_val, [&](double mu) { return approximate(*full_model, mu); });
                const double ref_max = stats(ref.mu, ref.matrix_error).max;
                entry["dmax_reference"] = {{"dz", full_model->size()},
                                           {"provider_calls", counted_max.calls()},
                                           {"z_rcond", full_model->coefficients.rcond()},
                                           {"matrix_error", detail::stats_json(ref.mu, ref.matrix_error)},
                                           {"solution_error", detail::stats_json(ref.mu, ref.solution_error)},
                                           {"ratio_to_reference", stats(sweep.mu, sweep.matrix_error).max / ref_max}};
            }

            if (cfg.oracle) {
                nlohmann::json oracle;
                const auto intrusive = build_intrusive(stage.layout, setup.quadrature ? &*setup.quadrature : nullptr);
                auto intr = [&](double mu) { return intrusive.evaluate(mu); };
                oracle["intrusive_vs_exact"] = max_distance<Scalar>(mu_val, intr, setup.assemble);
                oracle["nonintrusive_vs_intrusive"] =
                    max_distance<Scalar>(mu_val, [&](double mu) { return approximate(model, mu); }, intr);
                if (full_model)
                    oracle["nonintrusive_dmax_vs_intrusive"] =
                        max_distance<Scalar>(mu_val, [&](double mu) { return approximate(*full_model, mu); }, intr);
                if (setup.split) {
                    const auto weak = build_weakly_intrusive(*stage.eim_g, setup.kernel, *setup.split);
                    oracle["weakly_intrusive_vs_intrusive"] =
                        max_distance<Scalar>(mu_val, [&](double mu) { return weak.evaluate(mu); }, intr);
                    oracle["split_calls"] = weak.split_calls;
                    oracle["gamma_rcond"] = weak.gamma_rcond;
                } else {
                    oracle["weakly_intrusive_vs_intrusive"] = "unsupported";
                }
                entry["oracle"] = oracle;
            }

            if (cfg.save_models)
                save_model(dir / "model", model);
            studies.push_back(entry);
            if (opt.log)
                *opt.log << "d^g=" << stage.dg() << " d^z=" << model.size() << " d_max=" << stage.d_max()
                         << " max matrix error " << format17(stats(sweep.mu, sweep.matrix_error).max)
                         << " max solution error " << format17(stats(sweep.mu, sweep.solution_error).max) << " ("
                         << detail::seconds_since(t0) << " s)\n";
        }
        nlohmann::json summary = {{"config", cfg.to_json()},
                                  {"problem_size", setup.size},
                                  {"field", std::string(field_name(field_of<Scalar>()))},
                                  {"mu_trial_count", mu_trial.size()},
                                  {"omega_trial_count", setup.omega_trial.size()},
                                  {"validation_count", mu_val.size()},
                                  {"max_matrix_error_by_dg", max_by_dg},
                                  {"studies", studies}};
        detail::write_json(cfg.output_dir / "summary.json", summary);
        return summary;
    });
}

/// Counts provider invocations tier by tier and checks them against the contract.
inline nlohmann::json run_audit(const ExperimentConfig& cfg, std::ostream* log = &std::cerr) {
    const auto out = cfg.output_dir / "audit";
    ensure_writable(out);
    const auto mu_trial = cfg.mu_trial.values();
    const auto mu_val = cfg.validation_mu();

    return with_problem(cfg, [&](const auto& setup) {
        using Scalar = typename std::decay_t<decltype(setup)>::scalar_type;
        nlohmann::json entries = nlohmann::json::array();
        bool all_ok = true;
        for (std::size_t dg : cfg.dg) {
            const auto stage = build_stage(setup, mu_trial, dg, cfg.eim_g_tol);
            const std::size_t dz = resolve_dz(cfg.dz, stage);
            const auto sel = select_terms(stage, dz, cfg.eim_z_tol);

            CountingProvider counted(setup.assemble);
            std::size_t pending = cfg.inject_extra_calls;
            // Fault injection: a rogue path assembling at a parameter that was not selected.
            auto provider = [&](double mu) {
                Matrix<Scalar> a = counted(mu);
                for (; pending > 0; --pending)
                    (void)counted(mu + 0.5 * cfg.mu_trial.step);
                return a;
            };
            const auto model = instantiate(sel, stage.ztable, stage.layout, provider);
            const std::size_t full_calls = counted.calls();
            const std::size_t expected_full = sel.size();
            bool ok = full_calls == expected_full && model.provider_calls == expected_full;

            nlohmann::json entry = {{"dg", stage.dg()},
                                    {"dz", sel.size()},
                                    {"full_calls_instantiate", full_calls},
                                    {"expected_full_calls", expected_full}};

            if (cfg.oracle) {
                if (setup.split) {
                    std::size_t a1_calls = 0, a0_calls = 0;
                    SplitProvider<Scalar> split{[&](double mu) {
                                                    ++a1_calls;
                                                    return setup.split->a1(mu);
                                                },
                                                [&] {
                                                    ++a0_calls;
                                                    return setup.split->a0();
                                                }};
                    (void)build_weakly_intrusive(*stage.eim_g, setup.kernel, split);
                    const std::size_t expected_split = stage.dg() + 1;
                    entry["split_calls"] = a1_calls + a0_calls;
                    entry["split_a1_calls"] = a1_calls;
                    entry["split_a0_calls"] = a0_calls;
                    entry["expected_split_calls"] = expected_split;
                    entry["full_calls_after_oracle"] = counted.calls();
                    ok = ok && a1_calls + a0_calls == expected_split && a0_calls == 1 && counted.calls() == full_calls;
                } else {
                    entry["split_calls"] = "unsupported";
                }
            } else {
                entry["split_calls"] = 0;
            }

            // Online replay from disk: the provider must not be reached at all.
            const auto model_dir = out / detail::dg_dir(dg) / "model";
            save_model(model_dir, model);
            const std::size_t before_replay = counted.calls();
            const auto loaded = load_model<Scalar>(model_dir / "manifest.json", FunctionRegistry<Scalar>::builtin());
            bool bitwise = true;
            for (double mu : mu_val)
                bitwise = bitwise && (approximate(loaded, mu).array() == approximate(model, mu).array()).all();
            const std::size_t replay_calls = counted.calls() - before_replay;
            ok = ok && replay_calls == 0 && bitwise;
            entry["replay_calls"] = replay_calls;
            entry["replay_bitwise_equal"] = bitwise;
            entry["replay_mu_count"] = mu_val.size();
            entry["ok"] = ok;
            all_ok = all_ok && ok;
            entries.push_back(entry);
            if (log)
                *log << "audit d^g=" << stage.dg() << ": full calls " << full_calls << " (expected " << expected_full
                     << "), replay calls " << replay_calls << (ok ? "  ok\n" : "  VIOLATION\n");
        }
        nlohmann::json report = {{"config", cfg.to_json()}, {"entries", entries}, {"ok", all_ok}};
        detail::write_json(out / "summary.json", report);
        if (!all_ok)
            throw AuditViolation("nonintrusivity contract violated; see " + (out / "summary.json").string());
        return report;
    });
}

/// Greedy reduced basis driven by the separated representation.
inline nlohmann::json run_rbm(const ExperimentConfig& cfg, std::ostream* log = &std::cerr) {
    const auto out = cfg.output_dir / "rbm";
    ensure_writable(out);
    const auto mu_trial = cfg.mu_trial.values();

    return with_problem(cfg, [&](const auto& setup) {
        using Scalar = typename std::decay_t<decltype(setup)>::scalar_type;
        if (setup.rhs_depends_on_mu)
            throw ConfigError("run-rbm needs a parameter-independent right-hand side");
        const auto& rb = cfg.rbm;
        std::vector<double> train = rb.train;
        if (train.empty())
            for (std::size_t i = 0; i < mu_trial.size(); i += rb.train_stride)
                train.push_back(mu_trial[i]);
        std::vector<double> eval;
        for (std::size_t i = 0; i < mu_trial.size(); i += rb.eval_stride)
            eval.push_back(mu_trial[i]);
        if (rb.n_max > train.size() || rb.n_max > static_cast<std::size_t>(setup.size))
            throw ConfigError("rbm.n_max exceeds the train set or the problem size");

        // Full-order solutions for every parameter that is trained on or evaluated.
        std::vector<double> needed = train;
        needed.insert(needed.end(), eval.begin(), eval.end());
        std::sort(needed.begin(), needed.end());
        needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
        std::vector<Vector<Scalar>> solutions(needed.size());
        const Vector<Scalar> c = setup.rhs(0.0);
        const auto t_full = std::chrono::steady_clock::now();
        parallel_for(needed.size(), [&](std::size_t i) {
            try {
                solutions[i] = solve_dense<Scalar>(setup.assemble(needed[i]), c);
            } catch (const SingularMatrixError& e) {
                throw NumericalFailure(needed[i], e.what());
            }
        });
        const double full_seconds = detail::seconds_since(t_full);
        std::map<double, const Vector<Scalar>*> by_mu;
        for (std::size_t i = 0; i < needed.size(); ++i)
            by_mu[needed[i]] = &solutions[i];
        std::vector<Vector<Scalar>> train_full;
        for (double mu : train)
            train_full.push_back(*by_mu.at(mu));

        const auto t_basis = std::chrono::steady_clock::now();
        const FullOrderModel<Scalar> fom{setup.assemble, setup.rhs, setup.inner};
        const auto basis = greedy_build(fom, train, train_full, rb.n_max, rb.tol, rb.gram_tol);
        const double basis_seconds = detail::seconds_since(t_basis);

        const auto t_sep = std::chrono::steady_clock::now();
        const auto stage = build_stage(setup, mu_trial, rb.dg, cfg.eim_g_tol);
        const std::size_t dz = resolve_dz(cfg.dz, stage);
        const auto sel = select_terms(stage, dz, cfg.eim_z_tol);
        CountingProvider counted(setup.assemble);
        ReducedModel<Scalar> rm;
        if (cfg.payload == "functional") {
            const Matrix<Scalar> u = basis.U;
            const Functional<Scalar> l = [u](const Matrix<Scalar>& a) -> Matrix<Scalar> { return u.adjoint() * a * u; };
            auto model = instantiate(sel, stage.ztable, stage.layout, counted, PayloadKind::functional, l);
            rm.coefficients = model.coefficients;
            rm.reduced = std::move(model.snapshots);
            rm.c_hat = basis.U.adjoint() * c;
            rm.U = basis.U;
        } else {
            const auto model = instantiate(sel, stage.ztable, stage.layout, counted);
            rm = project(model, basis, c);
        }
        const double separation_seconds = detail::seconds_since(t_sep);

        std::vector<double> err(eval.size()), beta_ops(eval.size()), asm_ops(eval.size()), solve_ops(eval.size()),
            total_ops(eval.size());
        std::vector<Vector<Scalar>> online(eval.size());
        const auto t_online = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < eval.size(); ++i) {
            try {
                auto sol = online_solve(rm, eval[i]);
                beta_ops[i] = static_cast<double>(sol.ops.beta);
                asm_ops[i] = static_cast<double>(sol.ops.assembly);
                solve_ops[i] = static_cast<double>(sol.ops.solve);
                total_ops[i] = static_cast<double>(sol.ops.total());
                online[i] = std::move(sol.u);
            } catch (const SingularMatrixError& e) {
                throw NumericalFailure(eval[i], e.what());
            }
        }
        const double online_seconds = detail::seconds_since(t_online);
        for (std::size_t i = 0; i < eval.size(); ++i)
            err[i] = parasep::detail::solution_error<Scalar>(online[i], *by_mu.at(eval[i]), setup.inner);

        write_columns(out / "rbm_error.csv", {"mu", "rel_l2_error", "beta_ops", "assembly_ops", "solve_ops", "online_ops"},
                      {eval, err, beta_ops, asm_ops, solve_ops, total_ops});
        save_basis(out / "basis", basis);

        const char* stop = basis.stop == GreedyStop::max_size    ? "max_size"
                           : basis.stop == GreedyStop::tolerance ? "tolerance"
                                                                 : "dependent_snapshot";
        nlohmann::json summary = {
            {"config", cfg.to_json()},
            {"problem_size", setup.size},
            {"n_hat", basis.size()},
            {"mu_rb", basis.mu_rb},
            {"max_train_error", basis.max_train_error},
            {"greedy_stop", stop},
            {"orthonormality_residual", basis.orthonormality_residual()},
            {"dg", stage.dg()},
            {"dz", sel.size()},
            {"d_max", stage.d_max()},
            {"provider_calls", counted.calls()},
            {"payload", cfg.payload},
            {"train_count", train.size()},
            {"eval_count", eval.size()},
            {"rel_l2_error", detail::stats_json(eval, err)},
            {"online_ops", {{"beta", beta_ops.front()}, {"assembly", asm_ops.front()}, {"solve", solve_ops.front()},
                            {"total", total_ops.front()}}},
            {"offline", {{"full_solves", needed.size()}, {"provider_calls", counted.calls()}}}};
        detail::write_json(out / "summary.json", summary);
        detail::write_json(out / "timing.json",
                           {{"full_solves_seconds", full_seconds},
                            {"basis_seconds", basis_seconds},
                            {"separation_seconds", separation_seconds},
                            {"online_seconds_total", online_seconds},
                            {"online_seconds_per_mu", online_seconds / static_cast<double>(eval.size())}});
        if (log)
            *log << "rbm: n=" << setup.size << " n_hat=" << basis.size() << " d^z=" << sel.size()
                 << " max rel L2 error " << format17(stats(eval, err).max) << ", online ops " << total_ops.front()
                 << '\n';
        return summary;
    });
}

/// Evaluates a saved model at mu without any provider.
inline nlohmann::json replay(const std::filesystem::path& manifest, double mu,
                             const std::filesystem::path& payload_out = {}) {
    const auto j = read_manifest(manifest);
    auto run = [&]<typename Scalar>(Scalar) {
        const auto model = load_model<Scalar>(manifest, FunctionRegistry<Scalar>::builtin());
        const Vector<Scalar> b = beta(model, mu);
        const Matrix<Scalar> a = approximate(model, mu);
        if (!payload_out.empty())
            write_payload<Scalar>(payload_out, a);
        std::vector<double> re, im;
        for (Eigen::Index k = 0; k < b.size(); ++k) {
            re.push_back(std::real(b(k)));
            im.push_back(std::imag(b(k)));
        }
        nlohmann::json out = {{"mu", mu},
                              {"field", std::string(field_name(field_of<Scalar>()))},
                              {"payload", payload_name(model.payload)},
                              {"dz", model.size()},
                              {"rows", a.rows()},
                              {"cols", a.cols()},
                              {"frobenius_norm", a.norm()},
                              {"beta_re", re},
                              {"provider_calls", 0}};
        if constexpr (is_complex<Scalar>::value)
            out["beta_im"] = im;
        return out;
    };
    if (j.at("field").get<std::string>() == "complex")
        return run(Complex{});
    return run(0.0);
}

}  // namespace parasep::experiment

#include <parasep/experiment.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace parasep;
using namespace parasep::experiment;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("parasep_exp_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Coarse 1D study that runs in well under a second.
json small_config(const fs::path& out) {
    return {{"name", "small"},
            {"problem", "fem1d"},
            {"fem1d", {{"h_x", 0.1}}},
            {"mu_trial", {{"start", 1.0}, {"stop", 3.0}, {"step", 0.05}}},
            {"dg", {3, 6}},
            {"dz", {{"rule", "offset"}, {"value", 1}}},
            {"eim_g_tol", 0.0},
            {"eim_z_tol", 0.0},
            {"validation_stride", 3},
            {"output_dir", out.string()},
            {"rbm", {{"dg", 6}, {"n_max", 4}, {"train_stride", 4}}}};
}

void write_file(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(PARASEP_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, Defaults) {
    const auto c = parse_config(json::object());
    const auto mu = c.mu_trial.values();
    ASSERT_EQ(mu.size(), 401u);
    EXPECT_EQ(mu.front(), 1.0);
    EXPECT_EQ(mu.back(), 3.0);
    EXPECT_EQ(c.dg, (std::vector<std::size_t>{3, 6, 9, 12, 14, 16}));
    EXPECT_EQ(c.validation_mu().size(), 41u);
    EXPECT_EQ(c.dz.resolve(16, 17), 17u);
    // Round trip through the echoed form.
    const auto again = parse_config(c.to_json());
    EXPECT_EQ(again.to_json(), c.to_json());
}

TEST(Config, RejectsBadInput) {
    const auto bad = [](json j) { EXPECT_THROW(parse_config(j), ConfigError) << j.dump(); };
    bad({{"colour", "red"}});
    bad({{"fem1d", {{"hx", 0.1}}}});
    bad({{"rbm", {{"nmax", 3}}}});
    bad({{"problem", "plate"}});
    bad({{"payload", "vector"}});
    bad({{"dz", {{"rule", "twice"}}}});
    bad({{"dz", {{"rule", "absolute"}, {"value", 0}}}});
    bad({{"mu_trial", {{"start", 1.0}, {"stop", 2.0}, {"step", 0.3}}}});
    bad({{"mu_trial", {{"start", 2.0}, {"stop", 1.0}, {"step", 0.5}}}});
    bad({{"dg", json::array()}});
    bad({{"dg", {3, 0}}});
    bad({{"validation_stride", 0}});
    bad({{"eim_g_tol", -1.0}});
    bad({{"dg", "three"}});
    EXPECT_NO_THROW(parse_config({{"description", "anything"}}));

    const auto dir = scratch("cfg");
    EXPECT_THROW(load_config(dir / "missing.json"), ConfigError);
    write_file(dir / "broken.json", "{\"dg\": [3,");
    EXPECT_THROW(load_config(dir / "broken.json"), ConfigError);
    fs::remove_all(dir);
}

TEST(Config, GeometryAndDzErrorsAreConfigErrors) {
    const auto out = scratch("geom");
    auto j = small_config(out);
    j["fem1d"]["h_x"] = 0.35;
    EXPECT_THROW(run_study(parse_config(j), {.log = nullptr}), ConfigError);
    j = small_config(out);
    j["fem1d"]["kernel"] = "cosh(mu*x)";
    EXPECT_THROW(run_study(parse_config(j), {.log = nullptr}), ConfigError);
    j = small_config(out);
    j["dz"] = {{"rule", "absolute"}, {"value", 8}};  // d_max is 4 for d^g = 3
    EXPECT_THROW(run_study(parse_config(j), {.log = nullptr}), ConfigError);
    fs::remove_all(out);
}

TEST(Report, ParallelForIsOrderedAndRethrowsLowestIndex) {
    std::vector<int> a(100), b(100);
    parallel_for(100, [&](std::size_t i) { a[i] = static_cast<int>(i * i); }, 1);
    parallel_for(100, [&](std::size_t i) { b[i] = static_cast<int>(i * i); }, 4);
    EXPECT_EQ(a, b);
    try {
        parallel_for(
            50,
            [](std::size_t i) {
                if (i % 7 == 3)
                    throw std::runtime_error(std::to_string(i));
            },
            4);
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "3");
    }
    const auto s = stats({1, 2, 3, 4}, {0.5, 4.0, 1.0, 2.0});
    EXPECT_EQ(s.max, 4.0);
    EXPECT_EQ(s.argmax, 2.0);
    EXPECT_EQ(s.median, 1.5);
}

TEST(Study, OutputsAreDeterministic) {
    const auto d1 = scratch("det1"), d2 = scratch("det2");
    auto j = small_config(d1);
    j["oracle"] = true;
    j["compare_dmax"] = true;
    setenv("PARASEP_THREADS", "1", 1);
    const auto s1 = run_study(parse_config(j), {.svg = true, .log = nullptr});
    j["output_dir"] = d2.string();
    setenv("PARASEP_THREADS", "3", 1);
    const auto s2 = run_study(parse_config(j), {.log = nullptr});
    unsetenv("PARASEP_THREADS");

    for (const char* f : {"dg_3/matrix_error.csv", "dg_3/solution_error.csv", "dg_6/matrix_error.csv"}) {
        ASSERT_TRUE(fs::exists(d1 / f)) << f;
        EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
    }
    EXPECT_TRUE(fs::exists(d1 / "dg_3/matrix_error.svg"));
    const auto csv = slurp(d1 / "dg_6/matrix_error.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "mu,rel_frobenius_error");
    const auto sol = slurp(d1 / "dg_6/solution_error.csv");
    EXPECT_EQ(sol.substr(0, sol.find('\n')), "mu,rel_l2_error");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 14);

    const auto summary = json::parse(slurp(d1 / "summary.json"));
    ASSERT_EQ(summary.at("studies").size(), 2u);
    for (const auto& st : summary.at("studies")) {
        EXPECT_EQ(st.at("dz").get<std::size_t>(), st.at("dg").get<std::size_t>() + 1);
        EXPECT_EQ(st.at("provider_calls"), st.at("dz"));
        EXPECT_EQ(st.at("d_max").get<std::size_t>(), st.at("dg").get<std::size_t>() + 1);
        EXPECT_TRUE(st.contains("oracle"));
    }
    const auto errs = summary.at("max_matrix_error_by_dg");
    EXPECT_LT(errs[1].get<double>(), errs[0].get<double>());
    EXPECT_EQ(s1.at("studies"), s2.at("studies"));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST(Audit, CountsAndFaultInjection) {
    const auto out = scratch("audit");
    auto j = small_config(out);
    j["oracle"] = true;
    const auto rep = run_audit(parse_config(j), nullptr);
    EXPECT_TRUE(rep.at("ok").get<bool>());
    for (const auto& e : rep.at("entries")) {
        EXPECT_EQ(e.at("full_calls_instantiate"), e.at("dz"));
        EXPECT_EQ(e.at("replay_calls"), 0);
        EXPECT_EQ(e.at("split_calls").get<std::size_t>(), e.at("dg").get<std::size_t>() + 1);
        EXPECT_TRUE(e.at("replay_bitwise_equal").get<bool>());
    }

    const auto manifest = out / "audit/dg_3/model/manifest.json";
    const auto r = replay(manifest, 2.0);
    EXPECT_EQ(r.at("dz"), 4);
    EXPECT_EQ(r.at("provider_calls"), 0);

    j["inject_extra_calls"] = 1;
    try {
        run_audit(parse_config(j), nullptr);
        FAIL() << "expected AuditViolation";
    } catch (const AuditViolation& e) {
        EXPECT_EQ(exit_code(e), 4);
    }
    const auto rep2 = json::parse(slurp(out / "audit/summary.json"));
    EXPECT_FALSE(rep2.at("ok").get<bool>());
    EXPECT_EQ(rep2.at("entries")[0].at("full_calls_instantiate"), 5);
    fs::remove_all(out);
}

TEST(Rbm, RoutesAgreeAndKernelIsRejected) {
    const auto out = scratch("rbm");
    auto j = small_config(out);
    const auto m = run_rbm(parse_config(j), nullptr);
    EXPECT_EQ(m.at("n_hat"), 4);
    EXPECT_EQ(m.at("provider_calls"), 7);
    EXPECT_TRUE(fs::exists(out / "rbm/rbm_error.csv"));
    EXPECT_TRUE(fs::exists(out / "rbm/timing.json"));
    EXPECT_TRUE(fs::exists(out / "rbm/basis/basis.bin"));
    const auto csv = slurp(out / "rbm/rbm_error.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "mu,rel_l2_error,beta_ops,assembly_ops,solve_ops,online_ops");

    j["payload"] = "functional";
    const auto f = run_rbm(parse_config(j), nullptr);
    const double em = m.at("rel_l2_error").at("max").get<double>();
    const double ef = f.at("rel_l2_error").at("max").get<double>();
    EXPECT_NEAR(ef, em, 1e-10 * em);
    EXPECT_EQ(f.at("online_ops"), m.at("online_ops"));

    auto k = small_config(out);
    k["problem"] = "kernel";
    EXPECT_THROW(run_rbm(parse_config(k), nullptr), ConfigError);
    k = small_config(out);
    k["rbm"]["n_max"] = 100;
    EXPECT_THROW(run_rbm(parse_config(k), nullptr), ConfigError);
    fs::remove_all(out);
}

TEST(Cli, ExitCodes) {
    const auto out = scratch("cli");
    auto j = small_config(out / "run");
    write_file(out / "ok.json", j.dump());
    EXPECT_EQ(cli("run-study -c " + (out / "ok.json").string()), 0);
    EXPECT_TRUE(fs::exists(out / "run/summary.json"));
    EXPECT_EQ(cli("audit -c " + (out / "ok.json").string()), 0);
    EXPECT_EQ(cli("run-rbm -c " + (out / "ok.json").string()), 0);
    EXPECT_EQ(cli("replay -m " + (out / "run/audit/dg_6/model/manifest.json").string() + " --mu 2.0 -o " +
                  (out / "a.bin").string()),
              0);
    EXPECT_EQ(read_payload<double>(out / "a.bin").rows(), 59);

    EXPECT_EQ(cli(""), 2);
    EXPECT_EQ(cli("run-study"), 2);
    EXPECT_EQ(cli("run-study -c " + (out / "missing.json").string()), 2);
    j["bogus"] = 1;
    write_file(out / "bad.json", j.dump());
    EXPECT_EQ(cli("run-study -c " + (out / "bad.json").string()), 2);

    // A vanishing kernel leaves nothing to interpolate.
    auto z = small_config(out / "zero");
    z["fem1d"]["kernel"] = "0";
    write_file(out / "zero.json", z.dump());
    EXPECT_EQ(cli("run-study -c " + (out / "zero.json").string()), 3);

    auto inj = small_config(out / "inj");
    inj["inject_extra_calls"] = 2;
    write_file(out / "inj.json", inj.dump());
    EXPECT_EQ(cli("audit -c " + (out / "inj.json").string()), 4);
    fs::remove_all(out);
}

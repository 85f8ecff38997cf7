#include "gvimr/harness/config.hpp"
#include "gvimr/harness/experiment.hpp"
#include "gvimr/harness/report.hpp"
#include "gvimr/harness/sweep.hpp"
#include "gvimr/harness/verify.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace gvimr;
using namespace gvimr::harness;

namespace {

const char* kScalar = R"({
  "seed": 3,
  "problem": { "kind": "fixed_point", "operator": { "name": "negation" }, "x0": [1.0] },
  "scheme": { "variant": "gvimr", "gamma": 1.0, "Q": { "type": "scale", "factor": 0.5 } },
  "step": { "family": "power", "a": 0.9, "p": 1.0 }
})";

std::string message_of(const std::string& text) {
    try {
        parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const Check* find(const VerificationReport& r, std::string_view name) {
    const auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const Check& c) { return c.name == name; });
    return it == r.checks.end() ? nullptr : &*it;
}

nlohmann::json scalar_tree() { return parse_tree(kScalar); }

} // namespace

TEST(Config, ParsesScalarDemo) {
    const auto cfg = parse_config(kScalar);
    EXPECT_EQ(cfg.problem.kind, ProblemKind::fixed_point);
    EXPECT_EQ(cfg.variant, Variant::gvimr);
    EXPECT_EQ(cfg.seed, 3u);
    EXPECT_EQ(cfg.reference_mode, ReferenceMode::target);
    EXPECT_DOUBLE_EQ(cfg.scheme.Q.alpha(), 0.5);
    EXPECT_EQ(cfg.config_hash, fnv1a(kScalar));
}

TEST(Config, SyntaxErrorsReportLineAndColumn) {
    const auto msg = message_of("{\n  \"seed\": 1,\n  \"problem\" {}\n}");
    EXPECT_EQ(msg.rfind("cfg.json:3:", 0), 0u) << msg;
}

TEST(Config, SchemaErrorsNameThePath) {
    auto tree = scalar_tree();
    tree["problem"]["colour"] = "red";
    EXPECT_NE(message_of(tree.dump()).find("/problem: unknown key 'colour'"), std::string::npos);

    tree = scalar_tree();
    tree["step"]["a"] = 1.5;
    EXPECT_NE(message_of(tree.dump()).find("config error at /step"), std::string::npos);

    tree = scalar_tree();
    tree["scheme"]["variant"] = "halpern";
    EXPECT_NE(message_of(tree.dump()).find("/scheme/variant"), std::string::npos);

    tree = scalar_tree();
    tree["problem"]["x0"] = {1.0, 2.0};
    tree["problem"]["dimension"] = 3;
    EXPECT_NE(message_of(tree.dump()).find("does not match"), std::string::npos);

    tree = scalar_tree();
    tree["stop"] = {{"max_outer", -1}};
    EXPECT_NE(message_of(tree.dump()).find("/stop/max_outer: expected a non-negative integer"), std::string::npos);
}

TEST(Config, GammaHypothesisIsAConfigError) {
    auto tree = scalar_tree();
    tree["scheme"]["gamma"] = 2.5;
    const auto msg = message_of(tree.dump());
    EXPECT_NE(msg.find("0 < gamma < gamma_bar/alpha"), std::string::npos) << msg;
}

TEST(Config, OutputDirectoryOverride) {
    ::setenv("GVIMR_OUTPUT_DIR", "/tmp/gvimr_out", 1);
    EXPECT_EQ(resolve_output_path("a/b.csv"), std::filesystem::path("/tmp/gvimr_out/a/b.csv"));
    EXPECT_EQ(resolve_output_path("/abs/b.csv"), std::filesystem::path("/abs/b.csv"));
    ::unsetenv("GVIMR_OUTPUT_DIR");
    EXPECT_EQ(resolve_output_path("b.csv"), std::filesystem::path("b.csv"));
}

TEST(Fnv1a, KnownVectors) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
    EXPECT_EQ(hex64(0xaf63dc4c8601ec8cull), "0xaf63dc4c8601ec8c");
    EXPECT_EQ(hex64(0xabcull), "0x0000000000000abc");
}

TEST(Report, ChecksCompareAsDeclared) {
    EXPECT_EQ(make_check("x", 1.0, "<=", 1.0, "f").status, CheckStatus::pass);
    EXPECT_EQ(make_check("x", 1.0, "<", 1.0, "f").status, CheckStatus::fail);
    EXPECT_EQ(make_check("x", -1.0, ">=", 0.0, "f").status, CheckStatus::fail);
    EXPECT_EQ(make_advisory_check("x", 2.0, "<", 1.0, "f", "n").status, CheckStatus::non_conclusive);
    EXPECT_EQ(to_string(CheckStatus::non_conclusive), "non-conclusive");
}

TEST(Report, TextHasStableKeyOrder) {
    VerificationReport r;
    r.title = "t";
    r.provenance = {0xabcull, 7};
    r.facts = {{"z", "1"}, {"a", "2"}};
    r.checks.push_back(make_check("c", 0.5, "<=", 1.0, "x <= 1"));
    const auto text = to_text(r);
    const auto pos = [&](std::string_view s) { return text.find(s); };
    EXPECT_LT(pos("\"title\""), pos("\"provenance\""));
    EXPECT_LT(pos("\"provenance\""), pos("\"facts\""));
    EXPECT_LT(pos("\"z\""), pos("\"a\""));
    EXPECT_LT(pos("\"summary\""), pos("\"checks\""));
    EXPECT_NE(pos("\"0x0000000000000abc\""), std::string::npos);
    const auto j = nlohmann::json::parse(text);
    EXPECT_EQ(j["checks"][0]["status"], "pass");
    EXPECT_EQ(j["checks"][0]["anchor"], "x <= 1");
    EXPECT_EQ(j["summary"]["pass"], 1);
}

TEST(Experiment, ScalarDemoConvergesWithPassingChecks) {
    const auto res = execute(parse_config(kScalar));
    EXPECT_EQ(res.exit_code, kExitConverged);
    EXPECT_LE(res.trace.rows.back().fp_residual, 1e-8);
    EXPECT_TRUE(res.report.all_pass()) << to_text(res.report);
    for (const char* name : {"gamma_hypothesis", "step_scale", "fp_residual_final", "asymptotic_regularity",
                             "limit_matches_target", "iterates_bounded", "vi_residual"})
        EXPECT_NE(find(res.report, name), nullptr) << name;
    for (const auto& c : res.report.checks) EXPECT_FALSE(c.anchor.empty()) << c.name;
    ASSERT_TRUE(res.vi_residual.has_value());
}

TEST(Experiment, SingleStepDoesNotConverge) {
    auto tree = scalar_tree();
    tree["stop"] = {{"max_outer", 1}};
    EXPECT_EQ(build_config(tree, 0).scheme.stop.max_outer, 1u);
    const auto res = execute(build_config(tree, 0));
    EXPECT_EQ(res.exit_code, kExitNotConverged);
    EXPECT_EQ(res.trace.rows.size(), 1u);
}

TEST(Experiment, InnerFailureIsReportedNotThrown) {
    auto tree = scalar_tree();
    tree["inner"] = {{"tol", 1e-12}, {"max_iter", 2}};
    const auto res = execute(build_config(tree, 0));
    EXPECT_EQ(res.exit_code, kExitNotConverged);
    const auto* c = find(res.report, "run_completed");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->status, CheckStatus::fail);
}

TEST(Experiment, ExplicitListIsNonConclusive) {
    auto tree = scalar_tree();
    tree["step"] = {{"family", "explicit"}, {"values", std::vector<double>(20, 0.5)}};
    const auto res = execute(build_config(tree, 0));
    const auto* c = find(res.report, "step_vanishing");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->status, CheckStatus::non_conclusive);
}

TEST(Experiment, VipConfigRunsApplicationChecks) {
    const auto res = execute(parse_config(R"({
      "problem": { "kind": "vip", "set": { "shape": "box", "lo": [0, 0], "hi": [1, 1] },
                   "A": { "type": "affine", "matrix": [[1, 0], [0, 1]], "shift": [2, 0.5] }, "lambda": 0.5,
                   "reference": [1, 0.5] }
    })"));
    EXPECT_EQ(res.exit_code, kExitConverged) << to_text(res.report);
    const auto* c = find(res.report, "vip_natural_residual");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->status, CheckStatus::pass);
}

TEST(TraceCsv, HeaderAndEmptyFields) {
    IterationTrace tr;
    TraceRow a;
    a.n = 0;
    a.alpha_n = 0.5;
    a.step_norm = 0.1;
    a.fp_residual = 0.25;
    a.inner_iters = 3;
    TraceRow b = a;
    b.n = 1;
    b.dist_to_ref = 1.0 / 3.0;
    tr.rows = {a, b};
    std::ostringstream out;
    write_trace_csv(out, tr, -0.0);
    EXPECT_EQ(out.str(),
              "n,alpha_n,step_norm,fp_residual,inner_iters,dist_to_ref,vi_residual\n"
              "0,0.5,0.10000000000000001,0.25,3,,\n"
              "1,0.5,0.10000000000000001,0.25,3,0.33333333333333331,-0\n");
}

TEST(Verify, SpecExamplesPass) {
    const auto rep = verify_lemmas(0, 100);
    EXPECT_TRUE(rep.all_pass()) << to_text(rep);
    for (const char* name : {"strong_positive_identity_rho_1", "strong_positive_diag_1_2_rho_half",
                             "strong_positive_random_spd", "inner_map_contraction", "sequence_lemma"}) {
        const auto* c = find(rep, name);
        ASSERT_NE(c, nullptr) << name;
        EXPECT_EQ(c->status, CheckStatus::pass) << name;
    }
    EXPECT_NE(find(rep, "strong_positive_random_spd")->note.find("0 failures"), std::string::npos);
}

TEST(Verify, DeterministicForSeed) {
    EXPECT_EQ(to_text(verify_lemmas(5, 20)), to_text(verify_lemmas(5, 20)));
    EXPECT_NE(to_text(verify_lemmas(5, 20)), to_text(verify_lemmas(6, 20)));
}

TEST(Verify, SequenceLemmaOracle) {
    // n a_n = 1 + H_{n-1}, so a_n falls below 1e-3 only after about ten thousand steps
    const auto n = sequence_lemma_steps(1e-3, 1'000'000);
    EXPECT_LT(n, 1'000'000u);
    EXPECT_GT(n, 1000u);
    EXPECT_EQ(sequence_lemma_steps(1e-30, 100), 101u);
}

TEST(Sweep, FourVariantsConverge) {
    auto tree = scalar_tree();
    tree["step"]["p"] = 0.5;
    tree["stop"] = {{"max_outer", 100000}};
    tree["grid"] = {{"variant", {"gvimr", "moudafi", "marino_xu", "xu_vimr"}}};
    const auto cells = run_sweep(tree, 0, 2);
    ASSERT_EQ(cells.size(), 4u);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        EXPECT_EQ(cells[i].index, i);
        EXPECT_EQ(cells[i].status, "converged") << cells[i].variant << ": " << cells[i].message;
    }
    EXPECT_EQ(cells[1].variant, "moudafi");
}

TEST(Sweep, UnitGammaIdentityCellEqualsXuVimr) {
    auto tree = scalar_tree();
    tree["grid"] = {{"variant", {"gvimr", "xu_vimr"}}};
    const auto cells = run_sweep(tree, 0);
    ASSERT_EQ(cells.size(), 2u);
    const auto& a = cells[0].trace.rows;
    const auto& b = cells[1].trace.rows;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i].step_norm, b[i].step_norm, 1e-12);
        EXPECT_NEAR(a[i].fp_residual, b[i].fp_residual, 1e-12);
    }
}

TEST(Sweep, StepExponentsBothConverge) {
    auto tree = scalar_tree();
    tree["grid"] = {{"step.p", {1.0, 0.5}}};
    const auto cells = run_sweep(tree, 0);
    ASSERT_EQ(cells.size(), 2u);
    for (const auto& c : cells) {
        EXPECT_EQ(c.status, "converged");
        EXPECT_GT(c.iterations, 0u);
    }
    EXPECT_EQ(*cells[0].p, 1.0);
    EXPECT_EQ(*cells[1].p, 0.5);
}

TEST(Sweep, InvalidCellIsMarkedAndSweepContinues) {
    auto tree = scalar_tree();
    tree["grid"] = {{"gamma", {0.5, 2.5, 1.0}}};
    const auto cells = run_sweep(tree, 0);
    ASSERT_EQ(cells.size(), 3u);
    EXPECT_EQ(cells[0].status, "converged");
    EXPECT_EQ(cells[1].status, "error");
    EXPECT_NE(cells[1].message.find("gamma"), std::string::npos);
    EXPECT_EQ(cells[2].status, "converged");

    std::ostringstream out;
    write_sweep_csv(out, cells);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
              "index,variant,a,p,gamma,status,iterations,final_fp_residual,final_step_norm,message");
}

TEST(Sweep, GridOrderNestsVariantOutermost) {
    auto tree = scalar_tree();
    tree["step"]["p"] = 0.5;
    tree["grid"] = {{"gamma", {0.5, 1.0}}, {"variant", {"gvimr", "marino_xu"}}};
    const auto cells = run_sweep(tree, 0);
    ASSERT_EQ(cells.size(), 4u);
    EXPECT_EQ(cells[0].variant, "gvimr");
    EXPECT_EQ(cells[1].variant, "gvimr");
    EXPECT_EQ(*cells[1].gamma, 1.0);
    EXPECT_EQ(cells[2].variant, "marino_xu");
}

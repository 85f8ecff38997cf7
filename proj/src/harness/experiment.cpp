#include "gvimr/harness/experiment.hpp"

#include "gvimr/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace gvimr::harness {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void add_condition_checks(VerificationReport& report, const SchemeConfig& scheme) {
    const bool finite_list = scheme.steps.family() == StepSequence::Family::explicit_list;
    const std::size_t horizon = finite_list ? scheme.steps.values().size() : 1000;
    if (horizon < 10) return;
    const auto cond = check_conditions(scheme.steps, horizon);
    auto emit = [&](const char* name, const ConditionVerdict& v, const char* anchor) {
        Check c{name, CheckStatus::pass, v.measured, "==", 1.0, anchor, {}};
        c.measured = v.holds ? 1.0 : 0.0;
        if (!v.conclusive) {
            c.status = CheckStatus::non_conclusive;
            c.note = "finite-list heuristic, measured statistic " + fmt_short(v.measured);
        } else if (!v.holds) {
            c.status = CheckStatus::fail;
        }
        report.checks.push_back(std::move(c));
    };
    emit("step_vanishing", cond.vanishing, "lim alpha_n = 0");
    emit("step_divergent_sum", cond.divergent_sum, "sum_n alpha_n = infinity");
    emit("step_slow_variation", cond.slow_variation,
         "sum_n |alpha_{n+1} - alpha_n| < infinity or lim alpha_{n+1}/alpha_n = 1");
}

// Random points in the box z +- radius mapped onto Fix(S); kept only when
// S fixes them to 1e-10.
std::vector<HilbertPoint> certified_samples(const ExperimentConfig& cfg, const HilbertPoint& z,
                                            const PointMap& fix_projection) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-cfg.sample_radius, cfg.sample_radius);
    std::vector<HilbertPoint> out;
    for (std::size_t k = 0; k < cfg.vi_samples; ++k) {
        std::vector<double> c(z.dim());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = z[i] + u(rng);
        HilbertPoint y = fix_projection(z.with_coords(std::move(c)));
        if (distance(cfg.scheme.S(y), y) <= 1e-10 * std::max(1.0, norm(y))) out.push_back(std::move(y));
    }
    return out;
}

void add_target_checks(ExperimentResult& r, const ExperimentConfig& cfg, const HilbertPoint& target) {
    const auto& scheme = cfg.scheme;
    const auto& x0 = cfg.problem.x0;
    r.report.checks.push_back(make_check("limit_matches_target", distance(r.trace.limit, target), "<=", 1e-5,
                                         "||x_N - z|| with z = P_Fix(S)(z - rho (B z - gamma Q z))"));

    const double radius = boundedness_radius(scheme, target, x0);
    double worst = distance(r.trace.limit, target);
    for (const auto& row : r.trace.rows)
        if (row.dist_to_ref) worst = std::max(worst, *row.dist_to_ref);
    r.report.checks.push_back(make_check("iterates_bounded", worst - radius, "<=", 1e-8,
                                         "||x_n - p|| <= max{||x_0 - p||, ||gamma Q p - B p|| / (gamma_bar - "
                                         "gamma alpha)}, p in Fix(S)"));

    const auto samples = certified_samples(cfg, r.trace.limit, *scheme.S.fix_projection());
    const auto vi = check_vi_residual(r.trace.limit, samples, scheme);
    if (vi.empty_samples) {
        r.report.checks.push_back(make_advisory_check("vi_residual", 0.0, ">=", -1e-6,
                                                      "<(B - gamma Q) z, x - z> >= 0 for x in Fix(S)",
                                                      "no certified samples"));
        r.report.checks.back().status = CheckStatus::non_conclusive;
        return;
    }
    r.vi_residual = vi.value;
    r.report.checks.push_back(
        make_check("vi_residual", vi.value, ">=", -1e-6, "<(B - gamma Q) z, x - z> >= 0 for x in Fix(S)"));
    r.report.facts.emplace_back("vi_samples", std::to_string(samples.size()));
}

void add_application_checks(ExperimentResult& r, const ExperimentConfig& cfg) {
    const auto& p = cfg.problem;
    const HilbertPoint& z = r.trace.limit;
    if (p.vip) {
        r.report.checks.push_back(make_check("vip_natural_residual", natural_residual(*p.vip, z), "<=", 1e-6,
                                             "||z - P_K(z - lambda A z)||"));
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(-cfg.sample_radius, cfg.sample_radius);
        const HilbertPoint Az = p.vip->A(z);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cfg.vi_samples; ++k) {
            std::vector<double> c(z.dim());
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = z[i] + u(rng);
            const HilbertPoint x = project(p.vip->K, z.with_coords(std::move(c)));
            worst = std::min(worst, inner(Az, x - z));
        }
        if (cfg.vi_samples > 0)
            r.report.checks.push_back(
                make_check("vip_sampled_inequality", worst, ">=", -1e-6, "<A z, x - z> >= 0 for x in K"));
    }
    if (p.fredholm && p.fredholm->is_linear()) {
        const auto oracle = fredholm_oracle(*p.fredholm);
        r.report.checks.push_back(
            make_check("fredholm_oracle_l2", distance(z, oracle), "<=", 1e-6, "||x - (I - K_w)^{-1} g||_w"));
        r.report.checks.push_back(
            make_check("fredholm_oracle_sup", sup_norm(z - oracle), "<=", 1e-3, "max_i |x_i - x*_i|"));
    }
    if (p.evolution) {
        const auto end = integrate_period(*p.evolution, z.coords(), p.ode);
        r.report.checks.push_back(make_check("periodicity", distance(z.with_coords(end), z), "<=", p.post_check_tol,
                                             "||u(omega; v) - v||"));
    }
}

} // namespace

ExperimentResult execute(const ExperimentConfig& cfg) {
    ExperimentResult r;
    SchemeConfig scheme = cfg.scheme;
    const HilbertPoint& x0 = cfg.problem.x0;
    const bool target_variant = cfg.variant == Variant::gvimr || cfg.variant == Variant::marino_xu;

    auto& rep = r.report;
    rep.title = std::string(to_string(cfg.problem.kind)) + " / " + std::string(to_string(cfg.variant));
    rep.provenance = {cfg.config_hash, cfg.seed};
    rep.facts = {
        {"problem_kind", std::string(to_string(cfg.problem.kind))},
        {"operator", std::string(to_string(cfg.problem.S.kind()))},
        {"variant", std::string(to_string(cfg.variant))},
        {"dimension", std::to_string(x0.dim())},
        {"step_family", std::string(to_string(scheme.steps.family()))},
        {"gamma", fmt(scheme.gamma)},
        {"alpha", fmt(scheme.Q.alpha())},
        {"gamma_bar", fmt(scheme.B.gamma_bar())},
        {"B_norm", fmt(scheme.B.norm())},
    };

    if (target_variant) {
        const auto h = check_hypotheses(scheme);
        rep.checks.push_back(make_check("gamma_hypothesis", scheme.gamma, "<", h.gamma_limit, "0 < gamma < gamma_bar / alpha"));
        rep.checks.push_back(make_advisory_check("gamma_upper_bracket", h.gamma_limit, "<",
                                                 scheme.gamma + 1.0 / scheme.Q.alpha(),
                                                 "gamma_bar / alpha < gamma + 1 / alpha",
                                                 "informational; not required for convergence"));
        rep.checks.push_back(make_check("step_scale", scheme.steps.value(0) * scheme.B.norm(), "<=", 1.0,
                                        "alpha_0 ||B|| <= 1"));
    }
    add_condition_checks(rep, scheme);

    std::optional<HilbertPoint> target;
    if (cfg.reference_mode == ReferenceMode::target) {
        target = solve_target(scheme, *scheme.S.fix_projection(), x0);
        scheme.reference_solution = target;
    }

    try {
        r.trace = run_variant(cfg.variant, scheme, x0);
    } catch (const NumericalError& e) {
        r.exit_code = kExitNotConverged;
        r.message = e.what();
        Check c = make_check("run_completed", e.last_residual(), "<=", scheme.inner.tol, "inner Picard difference <= tol");
        c.note = e.what();
        rep.checks.push_back(std::move(c));
        return r;
    }

    const auto& rows = r.trace.rows;
    rep.facts.emplace_back("rows", std::to_string(rows.size()));
    rep.facts.emplace_back("converged", r.trace.converged ? "true" : "false");
    if (!rows.empty()) {
        const auto& last = rows.back();
        if (scheme.stop.fp_residual_tol >= 0.0)
            rep.checks.push_back(make_check("fp_residual_final", last.fp_residual, "<=", scheme.stop.fp_residual_tol,
                                            "||x_n - S x_n|| -> 0"));
        rep.checks.push_back(
            make_check("asymptotic_regularity", last.step_norm, "<=", 1e-6, "||x_{n+1} - x_n|| -> 0"));
    }
    if (target && cfg.variant == Variant::gvimr) add_target_checks(r, cfg, *target);
    add_application_checks(r, cfg);

    r.exit_code = r.trace.converged ? kExitConverged : kExitNotConverged;
    r.message = r.trace.converged ? "converged after " + std::to_string(rows.size()) + " rows"
                                  : "not converged within " + std::to_string(rows.size()) + " rows";
    return r;
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace, std::optional<double> vi_residual) {
    out << "n,alpha_n,step_norm,fp_residual,inner_iters,dist_to_ref,vi_residual\n";
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const auto& r = trace.rows[i];
        out << r.n << ',' << fmt(r.alpha_n) << ',' << fmt(r.step_norm) << ',' << fmt(r.fp_residual) << ','
            << r.inner_iters << ',';
        if (r.dist_to_ref) out << fmt(*r.dist_to_ref);
        out << ',';
        if (vi_residual && i + 1 == trace.rows.size()) out << fmt(*vi_residual);
        out << '\n';
    }
}

int run_experiment(const std::filesystem::path& config_path, std::ostream& log) {
    ExperimentResult result;
    OutputPaths paths;
    try {
        const auto cfg = load_config(config_path);
        paths = cfg.output;
        result = execute(cfg);
    } catch (const NumericalError& e) {
        log << "error: " << e.what() << '\n';
        return kExitNotConverged;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        for (const auto* p : {&paths.trace, &paths.report})
            if (p->has_parent_path()) std::filesystem::create_directories(p->parent_path());
        std::ofstream trace(paths.trace, std::ios::binary);
        if (!trace) throw std::runtime_error("cannot write trace '" + paths.trace.string() + "'");
        write_trace_csv(trace, result.trace, result.vi_residual);
        write_report(result.report, paths.report);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    log << result.message << '\n';
    if (!result.trace.rows.empty())
        log << "final fp_residual " << fmt_short(result.trace.rows.back().fp_residual) << ", step_norm "
            << fmt_short(result.trace.rows.back().step_norm) << '\n';
    log << "checks: " << result.report.count(CheckStatus::pass) << " pass, "
        << result.report.count(CheckStatus::fail) << " fail, " << result.report.count(CheckStatus::non_conclusive)
        << " non-conclusive\n";
    log << "trace: " << paths.trace.string() << "\nreport: " << paths.report.string() << '\n';
    return result.exit_code;
}

} // namespace gvimr::harness

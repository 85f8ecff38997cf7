#include "gvimr/harness/sweep.hpp"

#include "gvimr/harness/config.hpp"
#include "gvimr/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

namespace gvimr::harness {

using nlohmann::json;

namespace {

struct Axis {
    std::vector<std::optional<json>> values;
};

Axis axis(const json& grid, const char* key) {
    Axis a;
    auto it = grid.find(key);
    if (it == grid.end()) {
        a.values.push_back(std::nullopt);
        return a;
    }
    if (!it->is_array() || it->empty())
        throw ConfigError(std::string("config error at /grid/") + key + ": expected a non-empty array");
    for (const auto& v : *it) a.values.emplace_back(v);
    return a;
}

std::string fmt(std::optional<double> v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::optional<double> as_number(const std::optional<json>& v) {
    if (v && v->is_number()) return v->get<double>();
    return std::nullopt;
}

void run_cell(SweepCell& cell, const json& tree, std::uint64_t hash) {
    try {
        const auto cfg = build_config(tree, hash);
        cell.variant = std::string(to_string(cfg.variant));
        auto r = execute(cfg);
        cell.trace = std::move(r.trace);
        cell.iterations = cell.trace.rows.size();
        if (!cell.trace.rows.empty()) {
            cell.final_fp_residual = cell.trace.rows.back().fp_residual;
            cell.final_step_norm = cell.trace.rows.back().step_norm;
        }
        cell.status = r.exit_code == kExitConverged ? "converged" : "not_converged";
        if (r.exit_code != kExitConverged) cell.message = r.message;
    } catch (const std::exception& e) {
        cell.status = "error";
        cell.message = e.what();
    }
}

} // namespace

std::vector<SweepCell> run_sweep(const json& tree, std::uint64_t config_hash, unsigned threads) {
    if (!tree.is_object()) throw ConfigError("config error at /: expected an object");
    auto git = tree.find("grid");
    if (git == tree.end() || !git->is_object()) throw ConfigError("config error at /grid: sweep needs a 'grid' object");
    for (const auto& [k, v] : git->items())
        if (k != "variant" && k != "step.a" && k != "step.p" && k != "gamma")
            throw ConfigError("config error at /grid: unknown axis '" + k + "' (variant, step.a, step.p, gamma)");

    const auto variants = axis(*git, "variant"), as = axis(*git, "step.a"), ps = axis(*git, "step.p"),
               gammas = axis(*git, "gamma");

    std::vector<SweepCell> cells;
    std::vector<json> trees;
    for (const auto& v : variants.values)
        for (const auto& a : as.values)
            for (const auto& p : ps.values)
                for (const auto& g : gammas.values) {
                    json t = tree;
                    t.erase("grid");
                    if (v) t["scheme"]["variant"] = *v;
                    if (a) t["step"]["a"] = *a;
                    if (p) t["step"]["p"] = *p;
                    if (g) t["scheme"]["gamma"] = *g;
                    SweepCell c;
                    c.index = cells.size();
                    const json& tv = t["scheme"]["variant"];
                    c.variant = tv.is_string() ? tv.get<std::string>() : "gvimr";
                    c.a = as_number(a);
                    c.p = as_number(p);
                    c.gamma = as_number(g);
                    cells.push_back(std::move(c));
                    trees.push_back(std::move(t));
                }

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) run_cell(cells[i], trees[i], config_hash);
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    return cells;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
    out << "index,variant,a,p,gamma,status,iterations,final_fp_residual,final_step_norm,message\n";
    for (const auto& c : cells) {
        out << c.index << ',' << csv_escape(c.variant) << ',' << fmt(c.a) << ',' << fmt(c.p) << ',' << fmt(c.gamma)
            << ',' << c.status << ',' << c.iterations << ',' << fmt(c.final_fp_residual) << ','
            << fmt(c.final_step_norm) << ',' << csv_escape(c.message) << '\n';
    }
}

int sweep(const std::filesystem::path& config_path, std::ostream& log, unsigned threads) {
    std::vector<SweepCell> cells;
    std::filesystem::path summary;
    try {
        const auto text = read_text(config_path);
        const auto tree = parse_tree(text, config_path.string());
        cells = run_sweep(tree, fnv1a(text), threads);
        std::string name = "sweep.csv";
        if (auto out = tree.find("output"); out != tree.end() && out->is_object() && out->contains("summary")) {
            if (!(*out)["summary"].is_string()) throw ConfigError("config error at /output/summary: expected a string");
            name = (*out)["summary"].get<std::string>();
        }
        summary = resolve_output_path(name);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        if (summary.has_parent_path()) std::filesystem::create_directories(summary.parent_path());
        std::ofstream out(summary, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write summary '" + summary.string() + "'");
        write_sweep_csv(out, cells);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    write_sweep_csv(log, cells);
    log << "summary: " << summary.string() << '\n';
    const bool all = std::all_of(cells.begin(), cells.end(), [](const SweepCell& c) { return c.status == "converged"; });
    return all ? kExitConverged : kExitNotConverged;
}

} // namespace gvimr::harness

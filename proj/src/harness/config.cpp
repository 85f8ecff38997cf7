#include "gvimr/harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

namespace gvimr::harness {

using nlohmann::json;

namespace {

// JSON value plus its pointer path, for diagnostics.
class Node {
public:
    Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("config error at " + (path_.empty() ? std::string("/") : path_) + ": " + msg);
    }

    const json& raw() const { return *j_; }
    const std::string& path() const { return path_; }

    void require_object() const {
        if (!j_->is_object()) fail("expected an object");
    }

    void only(std::initializer_list<std::string_view> keys) const {
        require_object();
        for (const auto& [k, v] : j_->items()) {
            bool known = false;
            for (auto allowed : keys) known = known || k == allowed;
            if (!known) fail("unknown key '" + k + "'");
        }
    }

    std::optional<Node> find(const std::string& key) const {
        require_object();
        auto it = j_->find(key);
        if (it == j_->end() || it->is_null()) return std::nullopt;
        return Node(*it, path_ + "/" + key);
    }

    Node at(const std::string& key) const {
        auto n = find(key);
        if (!n) fail("missing required key '" + key + "'");
        return *n;
    }

    double number() const {
        if (!j_->is_number()) fail("expected a number");
        const double v = j_->get<double>();
        if (!std::isfinite(v)) fail("expected a finite number");
        return v;
    }

    std::uint64_t count() const {
        if (j_->is_number_unsigned()) return j_->get<std::uint64_t>();
        if (j_->is_number_integer()) {
            const auto v = j_->get<std::int64_t>();
            if (v < 0) fail("expected a non-negative integer");
            return static_cast<std::uint64_t>(v);
        }
        const double v = number();
        if (v < 0.0 || v != std::floor(v) || v > 9.007199254740992e15) fail("expected a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }

    std::string str() const {
        if (!j_->is_string()) fail("expected a string");
        return j_->get<std::string>();
    }

    std::vector<Node> items() const {
        if (!j_->is_array()) fail("expected an array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < j_->size(); ++i) out.emplace_back((*j_)[i], path_ + "/" + std::to_string(i));
        return out;
    }

    std::vector<double> numbers() const {
        std::vector<double> out;
        for (const auto& n : items()) out.push_back(n.number());
        if (out.empty()) fail("expected a non-empty array of numbers");
        return out;
    }

    std::vector<std::vector<double>> rows() const {
        std::vector<std::vector<double>> out;
        for (const auto& n : items()) out.push_back(n.numbers());
        if (out.empty()) fail("expected a non-empty array of rows");
        return out;
    }

private:
    const json* j_;
    std::string path_;
};

double number_or(const Node& n, const std::string& key, double fallback) {
    auto v = n.find(key);
    return v ? v->number() : fallback;
}

// Library validation errors surface as config errors naming the section.
template <class F>
auto guarded(const Node& n, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        n.fail(e.what());
    }
}

LinearOperator matrix(const Node& n) {
    return guarded(n, [&] {
        auto rows = n.rows();
        auto op = LinearOperator::from_rows(rows);
        bool sym = true;
        for (std::size_t i = 0; i < op.dim(); ++i)
            for (std::size_t j = i + 1; j < op.dim(); ++j) sym = sym && op(i, j) == op(j, i);
        return sym ? LinearOperator::symmetric_from_upper(rows) : op;
    });
}

void require_dim(const Node& n, std::size_t got, std::size_t want) {
    if (got != want)
        n.fail("dimension " + std::to_string(got) + " does not match the problem dimension " + std::to_string(want));
}

// ---------------------------------------------------------------- pieces

ConvexSet parse_set(const Node& n) {
    const auto shape = n.at("shape").str();
    return guarded(n, [&]() -> ConvexSet {
        if (shape == "box") {
            n.only({"shape", "lo", "hi"});
            return ConvexSet(Box{n.at("lo").numbers(), n.at("hi").numbers()});
        }
        if (shape == "ball") {
            n.only({"shape", "center", "radius"});
            return ConvexSet(Ball{n.at("center").numbers(), n.at("radius").number()});
        }
        if (shape == "halfspace") {
            n.only({"shape", "a", "b"});
            return ConvexSet(Halfspace{n.at("a").numbers(), n.at("b").number()});
        }
        if (shape == "affine") {
            n.only({"shape", "basis", "offset"});
            std::vector<std::vector<double>> basis;
            if (auto b = n.find("basis"))
                for (const auto& v : b->items()) basis.push_back(v.numbers());
            return ConvexSet(AffineSubspace{std::move(basis), n.at("offset").numbers()});
        }
        n.at("shape").fail("unknown shape '" + shape + "' (box, ball, halfspace, affine)");
    });
}

MonotoneOperator parse_monotone(const Node& n, std::size_t dim) {
    const auto type = n.at("type").str();
    return guarded(n, [&]() -> MonotoneOperator {
        if (type == "zero") {
            n.only({"type", "mu"});
            return MonotoneOperator::zero(number_or(n, "mu", 1.0));
        }
        if (type == "affine") {
            n.only({"type", "matrix", "shift", "theta", "mu"});
            auto M = matrix(n.at("matrix"));
            require_dim(n.at("matrix"), M.dim(), dim);
            std::optional<double> theta, mu;
            if (auto t = n.find("theta")) theta = t->number();
            if (auto m = n.find("mu")) mu = m->number();
            return MonotoneOperator::affine(std::move(M), n.at("shift").numbers(), theta, mu);
        }
        n.at("type").fail("unknown monotone operator type '" + type + "' (affine, zero)");
    });
}

VIProblem parse_vip(const Node& n) {
    auto K = parse_set(n.at("set"));
    auto A = parse_monotone(n.at("A"), K.dim());
    return guarded(n, [&] { return VIProblem(std::move(K), std::move(A), n.at("lambda").number()); });
}

FredholmProblem::Source parse_source(const Node& n) {
    const auto type = n.at("type").str();
    if (type == "polynomial") {
        n.only({"type", "coeffs"});
        return [c = n.at("coeffs").numbers()](double t) {
            double acc = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
            return acc;
        };
    }
    if (type == "cosine") {
        n.only({"type", "amplitude", "frequency"});
        const double a = n.at("amplitude").number();
        const double k = number_or(n, "frequency", 1.0);
        return [a, k](double t) { return a * std::cos(2.0 * std::numbers::pi * k * t); };
    }
    n.at("type").fail("unknown source type '" + type + "' (polynomial, cosine)");
}

FredholmProblem parse_fredholm(const Node& n) {
    const auto m = static_cast<std::size_t>(n.find("grid_m") ? n.at("grid_m").count() : 101);
    auto g = parse_source(n.at("g"));
    const Node k = n.at("kernel");
    const auto type = k.at("type").str();
    return guarded(n, [&]() -> FredholmProblem {
        if (type == "zero") {
            k.only({"type"});
            return FredholmProblem::linear([](double, double) { return 0.0; }, g, m);
        }
        if (type == "constant") {
            k.only({"type", "scale"});
            const double c = k.at("scale").number();
            return FredholmProblem::linear([c](double, double) { return c; }, g, m);
        }
        if (type == "product") {
            k.only({"type", "scale"});
            const double c = k.at("scale").number();
            return FredholmProblem::linear([c](double t, double s) { return c * t * s; }, g, m);
        }
        if (type == "sine") {
            k.only({"type", "scale"});
            const double c = k.at("scale").number();
            if (std::abs(c) > 1.0) k.at("scale").fail("sine kernel needs |scale| <= 1");
            return FredholmProblem([c](double t, double s, double x) { return c * t * s * std::sin(x); }, g, m);
        }
        k.at("type").fail("unknown kernel type '" + type + "' (zero, constant, product, sine)");
    });
}

EvolutionProblem parse_evolution(const Node& n, OdeSolveOptions& ode) {
    const double omega = number_or(n, "omega", 1.0);
    const auto steps = static_cast<std::size_t>(n.find("ode_steps") ? n.at("ode_steps").count() : 1000);
    if (auto o = n.find("ode")) {
        o->only({"tol", "max_iter"});
        ode.tol = number_or(*o, "tol", ode.tol);
        if (auto mi = o->find("max_iter")) ode.max_iter = static_cast<std::size_t>(mi->count());
        if (!(ode.tol > 0.0) || ode.max_iter == 0) o->fail("ode needs tol > 0 and max_iter >= 1");
    }
    const Node an = n.at("A");
    an.only({"matrix", "modulation"});
    const LinearOperator M = matrix(an.at("matrix"));
    const std::size_t d = M.dim();
    if (auto dn = n.find("dimension")) require_dim(*dn, M.dim(), static_cast<std::size_t>(dn->count()));
    const double mod = number_or(an, "modulation", 0.0);

    const Node fn = n.at("f");
    fn.only({"amplitude", "shape", "cubic_damping"});
    auto amp = fn.at("amplitude").numbers();
    require_dim(fn.at("amplitude"), amp.size(), d);
    const std::string shape = fn.find("shape") ? fn.at("shape").str() : "cos";
    if (shape != "cos" && shape != "sin") fn.at("shape").fail("shape must be 'cos' or 'sin'");
    const double cubic = number_or(fn, "cubic_damping", 0.0);
    if (cubic < 0.0) fn.at("cubic_damping").fail("cubic_damping must be >= 0");

    const double w = 2.0 * std::numbers::pi / omega;
    auto A = [M, mod, w](double t) { return M.shifted(0.0, 1.0 + mod * std::cos(w * t)); };
    const bool use_sin = shape == "sin";
    auto f = [amp, use_sin, cubic, w](double t, std::span<const double> u) {
        const double phase = use_sin ? std::sin(w * t) : std::cos(w * t);
        std::vector<double> out(amp.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = amp[i] * phase - cubic * u[i] * u[i] * u[i];
        return out;
    };
    return guarded(n, [&] { return EvolutionProblem(d, A, f, omega, steps); });
}

// ------------------------------------------------------------- operators

struct OperatorSpec {
    Nonexpansive S;
    std::optional<std::size_t> dim;
    std::optional<Weights> weights;
};

void merge_space(const Node& n, OperatorSpec& into, const OperatorSpec& other) {
    if (other.dim) {
        if (into.dim && *into.dim != *other.dim) n.fail("operators act on different dimensions");
        into.dim = other.dim;
    }
    if (other.weights) {
        if (into.weights && !(*into.weights == *other.weights)) n.fail("operators act on different spaces");
        into.weights = other.weights;
    }
}

OperatorSpec parse_operator(const Node& n) {
    const auto name = n.at("name").str();
    const auto kind = nonexpansive_kind_from_string(name);
    if (!kind)
        n.at("name").fail("unknown operator '" + name +
                          "' (identity, negation, projection, averaged, vip, fredholm, poincare, composition)");
    switch (*kind) {
    case NonexpansiveKind::identity:
        n.only({"name"});
        return {Nonexpansive::identity(), std::nullopt, std::nullopt};
    case NonexpansiveKind::negation:
        n.only({"name"});
        return {Nonexpansive::negation(), std::nullopt, std::nullopt};
    case NonexpansiveKind::projection: {
        n.only({"name", "set"});
        auto K = parse_set(n.at("set"));
        const auto d = K.dim();
        return {Nonexpansive::projection(std::move(K)), d, std::nullopt};
    }
    case NonexpansiveKind::averaged: {
        n.only({"name", "theta", "inner"});
        auto inner = parse_operator(n.at("inner"));
        const double theta = n.at("theta").number();
        auto S = guarded(n, [&] { return Nonexpansive::averaged(theta, inner.S); });
        return {std::move(S), inner.dim, inner.weights};
    }
    case NonexpansiveKind::composition: {
        n.only({"name", "maps"});
        OperatorSpec out{Nonexpansive::identity(), std::nullopt, std::nullopt};
        std::vector<Nonexpansive> maps;
        for (const auto& item : n.at("maps").items()) {
            auto spec = parse_operator(item);
            merge_space(n, out, spec);
            maps.push_back(std::move(spec.S));
        }
        if (maps.empty()) n.at("maps").fail("composition needs at least one map");
        out.S = guarded(n, [&] { return Nonexpansive::composition(std::move(maps)); });
        return out;
    }
    case NonexpansiveKind::vip: {
        n.only({"name", "set", "A", "lambda"});
        auto p = parse_vip(n);
        const auto d = p.K.dim();
        return {make_vip_operator(p.K, p.A, p.lambda), d, std::nullopt};
    }
    case NonexpansiveKind::fredholm: {
        n.only({"name", "kernel", "g", "grid_m"});
        auto p = parse_fredholm(n);
        return {make_fredholm_operator(p), p.grid_m, p.weights()};
    }
    case NonexpansiveKind::poincare: {
        n.only({"name", "dimension", "A", "f", "omega", "ode_steps", "ode"});
        OdeSolveOptions ode;
        auto p = parse_evolution(n, ode);
        const auto d = p.dim;
        return {make_poincare_map(p, ode), d, std::nullopt};
    }
    }
    n.fail("unreachable operator kind");
}

// ----------------------------------------------------------------- scheme

Contraction parse_contraction(const Node& n, std::size_t dim) {
    const auto type = n.at("type").str();
    return guarded(n, [&]() -> Contraction {
        if (type == "scale") {
            n.only({"type", "factor"});
            const double f = n.at("factor").number();
            if (!(std::abs(f) > 0.0 && std::abs(f) < 1.0)) n.at("factor").fail("scale factor must satisfy 0 < |factor| < 1");
            return Contraction::scaled(f);
        }
        if (type == "constant") {
            n.only({"type", "value", "alpha"});
            auto v = n.at("value").numbers();
            require_dim(n.at("value"), v.size(), dim);
            return Contraction::constant(std::move(v), number_or(n, "alpha", 0.01));
        }
        if (type == "affine") {
            n.only({"type", "matrix", "shift", "alpha"});
            auto M = matrix(n.at("matrix"));
            require_dim(n.at("matrix"), M.dim(), dim);
            std::optional<double> alpha;
            if (auto a = n.find("alpha")) alpha = a->number();
            return Contraction::affine(std::move(M), n.at("shift").numbers(), alpha);
        }
        n.at("type").fail("unknown contraction type '" + type + "' (scale, constant, affine)");
    });
}

StrongPositiveOperator parse_strong(const Node& n, std::size_t dim, const std::optional<Weights>& weights) {
    const auto type = n.at("type").str();
    return guarded(n, [&]() -> StrongPositiveOperator {
        if (type == "identity") {
            n.only({"type"});
            return StrongPositiveOperator::identity(dim, weights);
        }
        if (type == "diagonal") {
            n.only({"type", "values"});
            auto v = n.at("values").numbers();
            require_dim(n.at("values"), v.size(), dim);
            return StrongPositiveOperator(LinearOperator::diagonal(v), weights);
        }
        if (type == "matrix") {
            n.only({"type", "rows"});
            auto M = matrix(n.at("rows"));
            require_dim(n.at("rows"), M.dim(), dim);
            return StrongPositiveOperator(std::move(M), weights);
        }
        n.at("type").fail("unknown operator type '" + type + "' (identity, diagonal, matrix)");
    });
}

StepSequence parse_steps(const std::optional<Node>& n, double default_a) {
    if (!n) return StepSequence::power(default_a, 1.0);
    n->only({"family", "a", "p", "values"});
    const std::string family = n->find("family") ? n->at("family").str() : "power";
    return guarded(*n, [&] {
        if (family == "power") {
            if (n->find("values")) n->fail("'values' belongs to the explicit family");
            return StepSequence::power(number_or(*n, "a", default_a), number_or(*n, "p", 1.0));
        }
        if (family == "explicit") {
            if (n->find("a") || n->find("p")) n->fail("'a' and 'p' belong to the power family");
            return StepSequence::explicit_list(n->at("values").numbers());
        }
        n->at("family").fail("unknown step family '" + family + "' (power, explicit)");
    });
}

std::filesystem::path output_path(const std::optional<Node>& out, const std::string& key, const char* fallback) {
    std::filesystem::path p = fallback;
    if (out) {
        if (auto v = out->find(key)) p = v->str();
    }
    return resolve_output_path(std::move(p));
}

std::pair<std::size_t, std::optional<Weights>> space_of(const Node& pn, const OperatorSpec& op,
                                                         const std::optional<Node>& x0n) {
    std::optional<std::size_t> d = op.dim;
    if (auto dn = pn.find("dimension")) {
        const auto v = static_cast<std::size_t>(dn->count());
        if (v == 0) dn->fail("dimension must be >= 1");
        if (d && *d != v) require_dim(*dn, v, *d);
        d = v;
    }
    if (x0n) {
        const auto len = x0n->numbers().size();
        if (d) require_dim(*x0n, len, *d);
        d = len;
    }
    if (!d) pn.fail("cannot infer the dimension: give 'dimension' or 'x0'");
    return {*d, op.weights};
}

} // namespace

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::fixed_point: return "fixed_point";
    case ProblemKind::vip: return "vip";
    case ProblemKind::fredholm: return "fredholm";
    case ProblemKind::evolution: return "evolution";
    }
    return "unknown";
}

std::filesystem::path resolve_output_path(std::filesystem::path p) {
    if (p.is_relative()) {
        if (const char* dir = std::getenv("GVIMR_OUTPUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
    }
    return p;
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

json parse_tree(std::string_view text, std::string_view source_name) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        // drop the library's own "[json.exception...] parse error at line L, column C: " prefix
        std::string msg = e.what();
        if (auto pos = msg.find("column"); pos != std::string::npos) {
            if (auto colon = msg.find(": ", pos); colon != std::string::npos) msg = msg.substr(colon + 2);
        }
        throw ConfigError(std::string(source_name) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                          msg);
    }
}

ExperimentConfig build_config(const json& tree, std::uint64_t config_hash) {
    const Node root(tree, "");
    root.only({"description", "seed", "problem", "scheme", "step", "inner", "stop", "output", "checks", "grid"});
    const std::uint64_t seed = root.find("seed") ? root.at("seed").count() : 0;

    // problem
    const Node pn = root.at("problem");
    const auto kind_name = pn.at("kind").str();
    std::optional<ProblemKind> kind;
    for (auto k : {ProblemKind::fixed_point, ProblemKind::vip, ProblemKind::fredholm, ProblemKind::evolution})
        if (to_string(k) == kind_name) kind = k;
    if (!kind) pn.at("kind").fail("unknown problem kind '" + kind_name + "' (fixed_point, vip, fredholm, evolution)");

    std::optional<VIProblem> vip;
    std::optional<FredholmProblem> fredholm;
    std::optional<EvolutionProblem> evolution;
    OdeSolveOptions ode;
    double post_check_tol = 1e-6;
    std::optional<OperatorSpec> op;
    switch (*kind) {
    case ProblemKind::fixed_point:
        pn.only({"kind", "operator", "dimension", "x0", "reference"});
        op = parse_operator(pn.at("operator"));
        break;
    case ProblemKind::vip:
        pn.only({"kind", "set", "A", "lambda", "dimension", "x0", "reference"});
        vip = parse_vip(pn);
        op = OperatorSpec{make_vip_operator(vip->K, vip->A, vip->lambda), vip->K.dim(), std::nullopt};
        break;
    case ProblemKind::fredholm:
        pn.only({"kind", "kernel", "g", "grid_m", "reference"});
        fredholm = parse_fredholm(pn);
        op = OperatorSpec{make_fredholm_operator(*fredholm), fredholm->grid_m, fredholm->weights()};
        break;
    case ProblemKind::evolution:
        pn.only({"kind", "dimension", "A", "f", "omega", "ode_steps", "ode", "x0", "post_check_tol", "reference"});
        evolution = parse_evolution(pn, ode);
        post_check_tol = number_or(pn, "post_check_tol", post_check_tol);
        if (!(post_check_tol > 0.0)) pn.at("post_check_tol").fail("post_check_tol must be > 0");
        op = OperatorSpec{make_poincare_map(*evolution, ode), evolution->dim, std::nullopt};
        break;
    }
    const auto x0n = pn.find("x0");
    const auto [dim, weights] = space_of(pn, *op, x0n);
    HilbertPoint x0 = x0n ? HilbertPoint(x0n->numbers(), weights) : HilbertPoint::zeros(dim, weights);

    // scheme
    std::optional<Node> sn = root.find("scheme");
    if (sn) sn->only({"variant", "gamma", "Q", "B"});
    Variant variant = Variant::gvimr;
    if (sn && sn->find("variant")) {
        const auto v = sn->at("variant").str();
        auto parsed = variant_from_string(v);
        if (!parsed)
            sn->at("variant").fail("unknown variant '" + v + "' (gvimr, moudafi, marino_xu, alghamdi_imr, xu_vimr)");
        variant = *parsed;
    }
    const double gamma = sn ? number_or(*sn, "gamma", 1.0) : 1.0;
    Contraction Q = (sn && sn->find("Q")) ? parse_contraction(sn->at("Q"), dim) : Contraction::scaled(0.5);
    StrongPositiveOperator B = (sn && sn->find("B")) ? parse_strong(sn->at("B"), dim, weights)
                                                      : StrongPositiveOperator::identity(dim, weights);

    const double default_a = *kind == ProblemKind::fixed_point ? 0.9 : default_application_steps().a();
    StepSequence steps = parse_steps(root.find("step"), default_a);

    InnerSolve inner;
    if (auto in = root.find("inner")) {
        in->only({"tol", "max_iter"});
        inner.tol = number_or(*in, "tol", inner.tol);
        if (auto mi = in->find("max_iter")) inner.max_iter = static_cast<std::size_t>(mi->count());
        if (!(inner.tol > 0.0) || inner.max_iter == 0) in->fail("inner needs tol > 0 and max_iter >= 1");
    }
    OuterStop stop;
    if (auto st = root.find("stop")) {
        st->only({"fp_residual_tol", "step_tol", "max_outer"});
        stop.fp_residual_tol = number_or(*st, "fp_residual_tol", stop.fp_residual_tol);
        stop.step_tol = number_or(*st, "step_tol", stop.step_tol);
        if (auto mo = st->find("max_outer")) stop.max_outer = static_cast<std::size_t>(mo->count());
        if (stop.max_outer == 0) st->at("max_outer").fail("max_outer must be >= 1");
    }

    std::size_t vi_samples = 100;
    double sample_radius = 3.0;
    if (auto cn = root.find("checks")) {
        cn->only({"vi_samples", "sample_radius"});
        if (auto v = cn->find("vi_samples")) vi_samples = static_cast<std::size_t>(v->count());
        sample_radius = number_or(*cn, "sample_radius", sample_radius);
        if (!(sample_radius > 0.0)) cn->at("sample_radius").fail("sample_radius must be > 0");
    }

    const auto out = root.find("output");
    if (out) out->only({"trace", "report", "summary"});
    OutputPaths paths{output_path(out, "trace", "trace.csv"), output_path(out, "report", "report.json"),
                      output_path(out, "summary", "sweep.csv")};

    SchemeConfig scheme{std::move(Q), op->S, std::move(B), gamma, std::move(steps), inner, stop};

    // reference for dist_to_ref
    const bool target_variant = variant == Variant::gvimr || variant == Variant::marino_xu;
    ReferenceMode mode = ReferenceMode::none;
    if (auto rn = pn.find("reference")) {
        if (rn->raw().is_string()) {
            const auto r = rn->str();
            if (r == "target") {
                if (!scheme.S.fix_projection()) rn->fail("'target' needs an operator with a known Fix(S) projection");
                mode = ReferenceMode::target;
            } else if (r != "none") {
                rn->fail("reference must be 'target', 'none' or a point");
            }
        } else {
            auto v = rn->numbers();
            require_dim(*rn, v.size(), dim);
            scheme.reference_solution = HilbertPoint(std::move(v), weights);
            mode = ReferenceMode::explicit_point;
        }
    } else if (scheme.S.fix_projection() && target_variant) {
        mode = ReferenceMode::target;
    }

    if (target_variant) guarded(sn ? *sn : root, [&] { validate(scheme); });

    ProblemInstance problem{*kind, op->S, std::move(x0), std::move(vip), std::move(fredholm), std::move(evolution),
                            ode, post_check_tol};
    return ExperimentConfig{std::move(problem), variant,      std::move(scheme), mode,       std::move(paths),
                            seed,               config_hash, vi_samples,        sample_radius};
}

ExperimentConfig parse_config(std::string_view text, std::string_view source_name) {
    return build_config(parse_tree(text, source_name), fnv1a(text));
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text(path), path.string());
}

} // namespace gvimr::harness

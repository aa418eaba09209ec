#include "runner.hpp"

#include "hdsine/concentration.hpp"
#include "hdsine/errors.hpp"
#include "hdsine/generalized_sine.hpp"
#include "hdsine/identities.hpp"
#include "hdsine/parallel.hpp"
#include "hdsine/random.hpp"
#include "hdsine/semimetric.hpp"
#include "hdsine/sines.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace hdsine::cli {

namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// Everything a subcommand hands back to the driver.
struct Outcome {
    Table table;
    std::optional<json> violation;
    std::string summary;
};

std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_cell(const Cell& cell)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_double(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                return std::to_string(v);
            }
        },
        cell);
}

json json_cell(const Cell& cell)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return std::isfinite(v) ? json(v) : json(format_double(v));
            } else {
                return json(v);
            }
        },
        cell);
}

void write_table(const Table& table, const std::string& format, std::ostream& os)
{
    if (format == "json") {
        json rows = json::array();
        for (const auto& row : table.rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                obj[table.columns[i]] = json_cell(row[i]);
            }
            rows.push_back(std::move(obj));
        }
        os << rows.dump(1) << '\n';
        return;
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << csv_cell(row[i]);
        }
        os << '\n';
    }
}

json to_json(const Vector& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v[i]);
    }
    return a;
}

json to_json(const VectorList& vs)
{
    json a = json::array();
    for (const auto& v : vs) {
        a.push_back(to_json(v));
    }
    return a;
}

Vector vector_from(const json& j)
{
    if (!j.is_array() || j.empty()) {
        throw InputError("expected a nonempty array of numbers");
    }
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
    }
    return v;
}

VectorList list_from(const json& j)
{
    if (!j.is_array() || j.empty()) {
        throw InputError("expected a nonempty array of vectors");
    }
    VectorList out;
    for (const auto& v : j) {
        out.push_back(vector_from(v));
    }
    return out;
}

VectorList columns_of(const Matrix& m)
{
    VectorList out;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        out.push_back(m.col(c));
    }
    return out;
}

Matrix matrix_from_columns(const VectorList& cols)
{
    Matrix m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        m.col(static_cast<Eigen::Index>(c)) = cols[c];
    }
    return m;
}

// Recorded outputs must be reproduced: numbers within 1e-9 max(1, |x|),
// booleans and array lengths exactly.
bool outputs_match(const json& recorded, const json& recomputed, const std::string& key, std::ostream& os)
{
    if (recorded.is_boolean() || recomputed.is_boolean()) {
        if (recorded != recomputed) {
            os << "mismatch " << key << ": recorded " << recorded.dump() << ", recomputed " << recomputed.dump()
               << '\n';
            return false;
        }
        return true;
    }
    if (recorded.is_array() && recomputed.is_array()) {
        if (recorded.size() != recomputed.size()) {
            os << "mismatch " << key << ": array length\n";
            return false;
        }
        bool ok = true;
        for (std::size_t i = 0; i < recorded.size(); ++i) {
            ok = outputs_match(recorded[i], recomputed[i], key + "[" + std::to_string(i) + "]", os) && ok;
        }
        return ok;
    }
    if (recorded.is_number() && recomputed.is_number()) {
        const double a = recorded.get<double>();
        const double b = recomputed.get<double>();
        if (!(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)))) {
            os << "mismatch " << key << ": recorded " << format_double(a) << ", recomputed " << format_double(b)
               << '\n';
            return false;
        }
        return true;
    }
    os << "mismatch " << key << ": incompatible types\n";
    return false;
}

bool recorded_outputs_match(const json& instance, const json& recomputed, std::ostream& os)
{
    if (!instance.contains("outputs")) {
        return true;
    }
    bool ok = true;
    for (const auto& [key, value] : instance.at("outputs").items()) {
        if (!recomputed.contains(key)) {
            os << "mismatch " << key << ": not a recomputed output\n";
            ok = false;
            continue;
        }
        ok = outputs_match(value, recomputed.at(key), key, os) && ok;
    }
    return ok;
}

struct Common {
    std::uint64_t seed = 0;
    std::string output = "-";
    std::string format = "csv";
    std::string dump;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--seed", c.seed, "Experiment seed")->capture_default_str();
    sub->add_option("-o,--output", c.output, "Output file, - for standard output")->capture_default_str();
    sub->add_option("--format", c.format, "Row format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--dump", c.dump, "File receiving the first violating instance");
}

std::vector<double> resolve_radii(const std::vector<double>& radii, const std::string& decades)
{
    if (!radii.empty()) {
        return radii;
    }
    const std::string spec = decades.empty() ? "0.01:1:7" : decades;
    const auto first = spec.find(':');
    const auto second = spec.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw InputError("--radii-decades expects a:b:n");
    }
    try {
        std::size_t used = 0;
        const double lo = std::stod(spec.substr(0, first));
        const double hi = std::stod(spec.substr(first + 1, second - first - 1));
        const int count = std::stoi(spec.substr(second + 1), &used);
        if (used != spec.size() - second - 1) {
            throw InputError("--radii-decades expects a:b:n");
        }
        return log_spaced(lo, hi, count);
    } catch (const std::logic_error&) {
        throw InputError("--radii-decades expects a:b:n");
    }
}

std::pair<double, double> parse_range(const std::string& spec)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw InputError("range expects lo:hi");
    }
    try {
        return {std::stod(spec.substr(0, colon)), std::stod(spec.substr(colon + 1))};
    } catch (const std::logic_error&) {
        throw InputError("range expects lo:hi");
    }
}

// ---------------------------------------------------------------- identities

struct IdentitiesArgs {
    Common common;
    int d = 2;
    std::uint64_t trials = 1000;
};

json identity_outputs(const IdentityTrial& t)
{
    return json{{"det_split", t.det_split},
                {"p_path_disagreement", t.p_path_disagreement},
                {"p_identity_residual", t.p_identity_residual},
                {"uniform_polar_residual", t.uniform_polar_residual},
                {"q_path_disagreement", t.q_path_disagreement},
                {"q_law_of_sines_disagreement", t.q_law_of_sines_disagreement},
                {"q_identity_residual", t.q_identity_residual},
                {"min_q", t.min_q},
                {"holds", t.holds()}};
}

Outcome run_identities(const IdentitiesArgs& a)
{
    if (a.d < 1 || a.trials < 1) {
        throw InputError("identities needs d >= 1 and trials >= 1");
    }
    std::vector<IdentityTrial> results(a.trials);
    parallel_for(a.trials, [&](std::size_t i) {
        results[i] = identity_trial(draw_identity_context(a.d, a.common.seed, i));
    });
    Outcome out;
    out.table.columns = {"command",
                         "seed",
                         "index",
                         "d",
                         "det_split",
                         "p_path_disagreement",
                         "p_identity_residual",
                         "uniform_polar_residual",
                         "q_path_disagreement",
                         "q_law_of_sines_disagreement",
                         "q_identity_residual",
                         "min_q",
                         "holds"};
    std::uint64_t failures = 0;
    for (std::uint64_t i = 0; i < a.trials; ++i) {
        const auto& t = results[i];
        out.table.rows.push_back({std::string("identities"), a.common.seed, i, std::int64_t{a.d}, t.det_split,
                                  t.p_path_disagreement, t.p_identity_residual, t.uniform_polar_residual,
                                  t.q_path_disagreement, t.q_law_of_sines_disagreement, t.q_identity_residual,
                                  t.min_q, t.holds()});
        if (!t.holds()) {
            if (!out.violation) {
                const auto ctx = draw_identity_context(a.d, a.common.seed, i);
                out.violation = json{{"command", "identities"}, {"seed", a.common.seed}, {"index", i},
                                     {"d", a.d},                {"vs", to_json(ctx.vs)},  {"u", to_json(ctx.u)},
                                     {"betas", ctx.betas},      {"outputs", identity_outputs(t)}};
            }
            ++failures;
        }
    }
    out.summary = "identities: " + std::to_string(failures) + " of " + std::to_string(a.trials) + " trials failed";
    return out;
}

int replay_identities(const json& j, std::ostream& os)
{
    const auto ctx = build_context(list_from(j.at("vs")), vector_from(j.at("u")), j.at("betas").get<std::vector<double>>());
    const auto t = identity_trial(ctx);
    const auto p = p_coefficients(ctx);
    const auto q = q_coefficients(ctx);
    os << "d = " << ctx.d() << '\n';
    for (std::size_t i = 0; i < ctx.vs.size(); ++i) {
        os << "i=" << i << " lambda=" << format_double(ctx.lambdas[i]) << " beta=" << format_double(ctx.betas[i])
           << " P(norm)=" << format_double(p.norm_ratio[i]) << " P(sine)=" << format_double(p.sine_ratio[i])
           << " Q(content)=" << format_double(q.content_ratio[i]) << " Q(distance)="
           << format_double(q.distance_ratio[i]) << " Q(elevation)=" << format_double(q.elevation_form[i])
           << " Q(law)=" << format_double(q.law_of_sines[i]) << '\n';
    }
    os << "|u_tilde| = " << format_double(ctx.u_tilde.norm()) << '\n';
    const json recomputed = identity_outputs(t);
    for (const auto& [key, value] : recomputed.items()) {
        os << key << " = " << value.dump() << '\n';
    }
    const bool match = recorded_outputs_match(j, recomputed, os);
    return t.holds() && match ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- semimetric

struct SemimetricArgs {
    Common common;
    std::string kind = "polar";
    int d = 2;
    int n = 0;
    std::uint64_t trials = 1000;
    bool summary = false;
};

SineKind parse_kind(const std::string& kind) { return kind == "hyper" ? SineKind::hyper : SineKind::polar; }

json semimetric_instance(SineKind kind, const AuditInstance& inst, int d, int n)
{
    return json{{"command", "semimetric"}, {"kind", to_string(kind)},       {"seed", inst.seed},
                {"index", inst.index},     {"d", d},                        {"n", n},
                {"family", to_string(inst.family)}, {"w", to_json(inst.w)}, {"vs", to_json(inst.vs)},
                {"u", to_json(inst.u)}};
}

json semimetric_outputs(SineKind kind, const VectorList& vs, const Vector& w, const Vector& u)
{
    const auto report = check_simplex_inequality(kind, PointConfig(w, vs), u);
    json out{{"lhs", report.lhs}, {"rhs_terms", report.rhs_terms}, {"slack", report.slack}, {"holds", report.holds}};
    VectorList edges;
    for (const auto& v : vs) {
        edges.push_back(v - w);
    }
    const int d = static_cast<int>(vs.size()) - 1;
    if (w.size() == d + 1) {
        out["proof_path_holds"] = proof_path_check(kind, edges, u - w).holds;
    } else {
        out["chain_holds"] = chaining_check(kind, edges, u - w).holds;
    }
    return out;
}

Outcome run_semimetric(const SemimetricArgs& a)
{
    const SineKind kind = parse_kind(a.kind);
    const int n = a.n == 0 ? a.d + 1 : a.n;
    Outcome out;
    if (a.summary) {
        const auto s = semimetric_audit(kind, a.d, n, a.trials, a.common.seed);
        const bool ok = s.failures == 0 && s.symmetry_failures == 0 && s.proof_path_mismatches == 0 &&
                        s.chain_failures == 0;
        out.table.columns = {"command", "seed", "kind", "d", "n", "trials", "failures", "symmetry_failures",
                             "proof_path_mismatches", "chain_failures", "min_slack", "worst_index", "holds"};
        out.table.rows.push_back({std::string("semimetric"), a.common.seed, std::string(to_string(kind)),
                                  std::int64_t{a.d}, std::int64_t{n}, a.trials, s.failures, s.symmetry_failures,
                                  s.proof_path_mismatches, s.chain_failures, s.min_slack, s.worst.index, ok});
        if (!ok) {
            auto inst = semimetric_instance(kind, s.worst, a.d, n);
            inst["outputs"] = semimetric_outputs(kind, s.worst.vs, s.worst.w, s.worst.u);
            out.violation = inst;
        }
        out.summary = "semimetric: min slack " + format_double(s.min_slack) + ", " + std::to_string(s.failures) +
                      " failures in " + std::to_string(a.trials) + " trials";
        return out;
    }
    if (a.trials < 1 || a.d < 1 || n < a.d + 1) {
        throw InputError("semimetric needs trials >= 1, d >= 1 and n >= d+1");
    }
    std::vector<AuditTrial> results(a.trials);
    parallel_for(a.trials, [&](std::size_t i) { results[i] = audit_trial(kind, a.d, n, a.common.seed, i); });
    out.table.columns = {"command", "seed",  "index",     "kind",          "d",        "n",    "family",
                         "lhs",     "rhs_sum", "slack",   "symmetric",     "proof_path_ok", "chain_ok", "holds"};
    double min_slack = INFINITY;
    std::uint64_t failures = 0;
    for (std::uint64_t i = 0; i < a.trials; ++i) {
        const auto& t = results[i];
        out.table.rows.push_back({std::string("semimetric"), a.common.seed, i, std::string(to_string(kind)),
                                  std::int64_t{a.d}, std::int64_t{n},
                                  std::string(to_string(static_cast<FuzzFamily>(i % 5))), t.lhs, t.rhs_sum,
                                  t.slack, t.symmetric, !t.proof_mismatch, !t.chain_failed, t.all_ok()});
        min_slack = std::min(min_slack, t.slack);
        if (!t.all_ok()) {
            if (!out.violation) {
                const auto inst = draw_audit_instance(a.d, n, a.common.seed, i);
                auto dumped = semimetric_instance(kind, inst, a.d, n);
                dumped["outputs"] = semimetric_outputs(kind, inst.vs, inst.w, inst.u);
                out.violation = dumped;
            }
            ++failures;
        }
    }
    out.summary = "semimetric: min slack " + format_double(min_slack) + ", " + std::to_string(failures) +
                  " failing trials of " + std::to_string(a.trials);
    return out;
}

int replay_semimetric(const json& j, std::ostream& os)
{
    const SineKind kind = parse_kind(j.at("kind").get<std::string>());
    const Vector w = vector_from(j.at("w"));
    const VectorList vs = list_from(j.at("vs"));
    const Vector u = vector_from(j.at("u"));
    VectorList edges;
    for (const auto& v : vs) {
        edges.push_back(v - w);
    }
    os << "kind = " << to_string(kind) << ", d = " << vs.size() - 1 << ", n = " << w.size() << '\n';
    os << "content of edges = " << format_double(abs_content(edges)) << '\n';
    for (std::size_t i = 0; i < edges.size(); ++i) {
        os << "|v" << i << " - w| = " << format_double(edges[i].norm()) << '\n';
    }
    os << "|u - w| = " << format_double((u - w).norm()) << '\n';
    const json recomputed = semimetric_outputs(kind, vs, w, u);
    for (const auto& [key, value] : recomputed.items()) {
        os << key << " = " << value.dump() << '\n';
    }
    bool ok = recomputed.at("holds").get<bool>();
    if (recomputed.contains("proof_path_holds")) {
        const auto proof = proof_path_check(kind, edges, u - w);
        os << "proof path: max coefficient = " << format_double(proof.max_coefficient)
           << ", identity residual = " << format_double(proof.identity_residual) << '\n';
        ok = ok && proof.holds == recomputed.at("holds").get<bool>();
    } else {
        const auto chain = chaining_check(kind, edges, u - w);
        os << "chain: projected sum = " << format_double(chain.projected_sum)
           << ", sum = " << format_double(chain.sum) << '\n';
        ok = ok && chain.holds;
    }
    const bool match = recorded_outputs_match(j, recomputed, os);
    return ok && match ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- funceq

struct FuncEqArgs {
    Common common;
    std::string family = "sk";
    double c = 1.0;
    double k = 0.0;
    double a = 0.01;
    int grid = 40;
    std::string range = "-1.5:1.5";
    double tol = 1e-9;
};

RealFunction make_family(const std::string& family, double c, double k, double a)
{
    if (family == "sk") {
        const GeneralizedSine f{c, k};
        return [f](double x) { return eval_sk(f, x); };
    }
    if (family == "square") {
        return [](double x) { return x * x; };
    }
    if (family == "cos") {
        return [](double x) { return std::cos(x); };
    }
    return [a](double x) { return x + a * x * x; };
}

json funceq_outputs(const RealFunction& f, double alpha, double beta, double delta, double tol)
{
    const double residual = functional_equation_residual(f, alpha, beta, delta);
    const double scaled = residual / std::max(1.0, std::abs(f(alpha + beta)));
    return json{{"residual", residual}, {"scaled_residual", scaled}, {"holds", scaled <= tol}};
}

Outcome run_funceq(const FuncEqArgs& a)
{
    const auto [lo, hi] = parse_range(a.range);
    if (a.grid < 1 || !(a.tol > 0.0)) {
        throw InputError("funceq needs grid >= 1 and tol > 0");
    }
    const auto f = make_family(a.family, a.c, a.k, a.a);
    const auto grid = cube_grid(lo, hi, a.grid);
    const auto G = static_cast<std::size_t>(a.grid);

    struct Point {
        bool admissible = false;
        double residual = 0.0;
        double scaled = 0.0;
    };
    std::vector<Point> points(G * G * G);
    parallel_for(G, [&](std::size_t ia) {
        for (std::size_t ib = 0; ib < G; ++ib) {
            for (std::size_t id = 0; id < G; ++id) {
                auto& p = points[(ia * G + ib) * G + id];
                const double delta = grid.deltas[id];
                if (std::abs(f(delta)) <= 1e-12) {
                    continue;
                }
                p.admissible = true;
                p.residual = functional_equation_residual(f, grid.alphas[ia], grid.betas[ib], delta);
                p.scaled = p.residual / std::max(1.0, std::abs(f(grid.alphas[ia] + grid.betas[ib])));
            }
        }
    });

    Outcome out;
    out.table.columns = {"command", "seed",  "index",    "family",          "c",    "k", "a",
                         "alpha",   "beta",  "delta",    "residual", "scaled_residual", "holds"};
    double worst = 0.0;
    std::uint64_t rows = 0;
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        const auto& p = points[idx];
        if (!p.admissible) {
            continue;
        }
        ++rows;
        const double alpha = grid.alphas[idx / (G * G)];
        const double beta = grid.betas[idx / G % G];
        const double delta = grid.deltas[idx % G];
        const bool holds = p.scaled <= a.tol;
        worst = std::max(worst, p.scaled);
        out.table.rows.push_back({std::string("funceq"), a.common.seed, std::uint64_t{idx}, a.family, a.c, a.k, a.a,
                                  alpha, beta, delta, p.residual, p.scaled, holds});
        if (!holds && !out.violation) {
            out.violation = json{{"command", "funceq"}, {"family", a.family}, {"c", a.c},       {"k", a.k},
                                 {"a", a.a},           {"tol", a.tol},       {"alpha", alpha}, {"beta", beta},
                                 {"delta", delta},     {"outputs", funceq_outputs(f, alpha, beta, delta, a.tol)}};
        }
    }
    if (rows == 0) {
        throw DomainError("no grid delta is admissible");
    }
    out.summary = "funceq: max scaled residual " + format_double(worst) + " over " + std::to_string(rows) + " points";
    return out;
}

int replay_funceq(const json& j, std::ostream& os)
{
    const auto family = j.at("family").get<std::string>();
    const auto f = make_family(family, j.value("c", 1.0), j.value("k", 0.0), j.value("a", 0.01));
    const double alpha = j.at("alpha").get<double>();
    const double beta = j.at("beta").get<double>();
    const double delta = j.at("delta").get<double>();
    const double tol = j.value("tol", 1e-9);
    os << "family = " << family << '\n';
    for (const auto& [name, x] : {std::pair{"alpha+beta", alpha + beta}, std::pair{"alpha", alpha},
                                  std::pair{"beta", beta}, std::pair{"delta", delta},
                                  std::pair{"alpha+delta", alpha + delta}, std::pair{"delta-beta", delta - beta}}) {
        os << "f(" << name << ") = " << format_double(f(x)) << '\n';
    }
    const json recomputed = funceq_outputs(f, alpha, beta, delta, tol);
    for (const auto& [key, value] : recomputed.items()) {
        os << key << " = " << value.dump() << '\n';
    }
    const bool match = recorded_outputs_match(j, recomputed, os);
    return recomputed.at("holds").get<bool>() && match ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- samplers

struct SamplerArgs {
    std::string sampler = "auto";
    double gamma = 2.0;
    int d = 2;
    int n = 0;
    double c_mu = 0.0;  // zero: exact or self-tested
};

void add_sampler_options(CLI::App* sub, SamplerArgs& s)
{
    sub->add_option("--sampler", s.sampler, "plane, cantor, full or auto")
        ->check(CLI::IsMember({"auto", "plane", "cantor", "full"}))
        ->capture_default_str();
    sub->add_option("--gamma", s.gamma, "Regularity dimension of the measure")->capture_default_str();
    sub->add_option("--d", s.d, "Simplex dimension")->capture_default_str();
    sub->add_option("--n", s.n, "Ambient dimension (default d+2, or gamma for full)");
    sub->add_option("--c-mu", s.c_mu, "Declared regularity constant for the Cantor sampler");
}

std::string resolve_sampler(const SamplerArgs& s)
{
    if (s.sampler != "auto") {
        return s.sampler;
    }
    if (s.gamma > s.d) {
        return "full";
    }
    return s.gamma == std::floor(s.gamma) ? "plane" : "cantor";
}

int resolve_ambient(const SamplerArgs& s, const std::string& kind)
{
    if (s.n > 0) {
        return s.n;
    }
    return kind == "full" ? static_cast<int>(s.gamma) : s.d + 2;
}

void require_integer_gamma(double gamma)
{
    if (gamma != std::floor(gamma) || gamma < 1) {
        throw InputError("Lebesgue samplers need a positive integer gamma");
    }
}

// A sampler drawn for one configuration; Cantor samplers are shared.
std::unique_ptr<MeasureSampler> make_sampler(const SamplerArgs& s, const std::string& kind, int n, Rng& rng,
                                             const std::shared_ptr<CantorProductSampler>& cantor)
{
    if (kind == "cantor") {
        return std::make_unique<CantorProductSampler>(*cantor);
    }
    require_integer_gamma(s.gamma);
    const int dim = static_cast<int>(s.gamma);
    if (kind == "full" && dim != n) {
        throw InputError("the full-dimensional sampler needs n == gamma");
    }
    return std::make_unique<PlaneLebesgueSampler>(PlaneLebesgueSampler::random(n, dim, rng));
}

std::shared_ptr<CantorProductSampler> maybe_cantor(const SamplerArgs& s, const std::string& kind, int n)
{
    if (kind != "cantor") {
        return nullptr;
    }
    return std::make_shared<CantorProductSampler>(s.d, s.gamma, n,
                                                  s.c_mu > 0.0 ? std::optional<double>(s.c_mu) : std::nullopt);
}

void describe_sampler(json& j, const MeasureSampler& sampler, const std::string& kind, const SamplerArgs& s, int n)
{
    j["sampler"] = kind;
    j["gamma"] = s.gamma;
    j["d"] = s.d;
    j["n"] = n;
    j["c_mu"] = sampler.c_mu();
    if (const auto* plane = dynamic_cast<const PlaneLebesgueSampler*>(&sampler)) {
        j["plane_origin"] = to_json(plane->origin());
        j["plane_basis"] = to_json(columns_of(plane->basis()));
    }
}

std::unique_ptr<MeasureSampler> sampler_from(const json& j)
{
    const auto kind = j.at("sampler").get<std::string>();
    if (kind == "cantor") {
        return std::make_unique<CantorProductSampler>(j.at("d").get<int>(), j.at("gamma").get<double>(),
                                                      j.at("n").get<int>(), j.at("c_mu").get<double>());
    }
    return std::make_unique<PlaneLebesgueSampler>(vector_from(j.at("plane_origin")),
                                                  matrix_from_columns(list_from(j.at("plane_basis"))));
}

// ---------------------------------------------------------------- concentration

struct ConcentrationArgs {
    Common common;
    SamplerArgs sampler;
    double eps = 0.2;
    double C = 0.0;  // zero: derived from the bound
    bool one_term = false;
    std::size_t samples = 20000;
    std::vector<double> radii;
    std::string decades;
    std::uint64_t configs = 1;
};

json concentration_outputs(const RadiusRecord& r)
{
    return json{{"fraction", r.fraction}, {"stderr", r.stderr_}, {"samples", r.samples}, {"pass", r.pass}};
}

Outcome run_concentration_command(const ConcentrationArgs& a)
{
    const auto& s = a.sampler;
    const std::string kind = resolve_sampler(s);
    const int n = resolve_ambient(s, kind);
    const bool one_term = a.one_term || s.gamma > s.d;
    const auto radii = resolve_radii(a.radii, a.decades);
    if (a.configs < 1) {
        throw InputError("configs must be positive");
    }
    const auto cantor = maybe_cantor(s, kind, n);

    Outcome out;
    out.table.columns = {"command", "seed", "index",    "radius_index", "sampler", "gamma",  "d",
                         "n",       "eps",  "C",        "c_mu",         "one_term", "radius", "samples",
                         "fraction", "stderr", "pass"};
    std::uint64_t failures = 0;
    double worst = 1.0;
    for (std::uint64_t c = 0; c < a.configs; ++c) {
        auto rng = substream(a.common.seed, c, 7);
        const auto sampler = make_sampler(s, kind, n, rng, cantor);
        ConcentrationConfig cfg;
        cfg.epsilon = a.eps;
        cfg.w = sampler->random_support_point(rng);
        for (const auto& g : gaussian_vectors(rng, s.d + 1, n)) {
            cfg.S.push_back(cfg.w + g);
        }
        cfg.radii = radii;
        cfg.samples_per_ball = a.samples;
        cfg.seed = rng();
        cfg.one_term = one_term;
        if (a.C > 0.0) {
            cfg.C = a.C;
        } else {
            cfg.C = one_term ? c0_one_term(a.eps, s.gamma, s.d, sampler->c_mu())
                             : c0_prime(a.eps, s.gamma, s.d, sampler->c_mu());
        }
        const auto records = run_concentration(cfg, *sampler);
        for (std::size_t ri = 0; ri < records.size(); ++ri) {
            const auto& r = records[ri];
            out.table.rows.push_back({std::string("concentration"), a.common.seed, c, std::uint64_t{ri}, kind,
                                      s.gamma, std::int64_t{s.d}, std::int64_t{n}, a.eps, cfg.C, sampler->c_mu(),
                                      one_term, r.radius, std::uint64_t{r.samples}, r.fraction, r.stderr_, r.pass});
            worst = std::min(worst, r.fraction);
            if (!r.pass) {
                ++failures;
                if (!out.violation) {
                    json j{{"command", "concentration"}, {"seed", a.common.seed}, {"index", c}};
                    describe_sampler(j, *sampler, kind, s, n);
                    j["eps"] = a.eps;
                    j["C"] = cfg.C;
                    j["one_term"] = one_term;
                    j["radius"] = r.radius;
                    j["samples"] = a.samples;
                    j["run_seed"] = cfg.seed;
                    j["S"] = to_json(cfg.S);
                    j["w"] = to_json(cfg.w);
                    j["outputs"] = concentration_outputs(r);
                    out.violation = j;
                }
            }
        }
    }
    out.summary = "concentration: smallest fraction " + format_double(worst) + ", " + std::to_string(failures) +
                  " failing radii";
    return out;
}

int replay_concentration(const json& j, std::ostream& os)
{
    const auto sampler = sampler_from(j);
    ConcentrationConfig cfg;
    cfg.epsilon = j.at("eps").get<double>();
    cfg.C = j.at("C").get<double>();
    cfg.one_term = j.at("one_term").get<bool>();
    cfg.S = list_from(j.at("S"));
    cfg.w = vector_from(j.at("w"));
    cfg.radii = {j.at("radius").get<double>()};
    cfg.samples_per_ball = j.at("samples").get<std::size_t>();
    cfg.seed = j.at("run_seed").get<std::uint64_t>();
    VectorList edges;
    for (const auto& v : cfg.S) {
        edges.push_back(v - cfg.w);
    }
    os << "sampler = " << sampler->name() << ", gamma = " << format_double(sampler->gamma())
       << ", C_mu = " << format_double(sampler->c_mu()) << '\n';
    os << "C = " << format_double(cfg.C) << ", eps = " << format_double(cfg.epsilon)
       << ", one-term = " << (cfg.one_term ? "true" : "false") << '\n';
    os << "|polar sine of S at w| = " << format_double(abs_polar_sine(edges)) << '\n';
    for (std::size_t i = 0; i < cfg.S.size(); ++i) {
        const auto L = span_without(edges, {static_cast<int>(i)}, static_cast<int>(cfg.w.size()));
        os << "theta(v" << i << " - w, L" << i << ") = " << format_double(elevation_angle(edges[i], L)) << '\n';
    }
    const auto r = run_concentration(cfg, *sampler).front();
    os << "radius = " << format_double(r.radius) << ", threshold = "
       << format_double(1.0 - cfg.epsilon - 3.0 * r.stderr_) << '\n';
    const json recomputed = concentration_outputs(r);
    for (const auto& [key, value] : recomputed.items()) {
        os << key << " = " << value.dump() << '\n';
    }
    const bool match = recorded_outputs_match(j, recomputed, os);
    return r.pass && match ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- tube-bound

struct TubeArgs {
    Common common;
    SamplerArgs sampler;
    int m = 1;
    std::vector<double> eps{0.05, 0.1, 0.2, 0.5, 1.0};
    std::vector<double> radii;
    std::string decades;
    std::size_t samples = 20000;
    std::uint64_t trials = 3;
};

json tube_outputs(const MeasureBoundRecord& r)
{
    return json{{"fraction", r.fraction}, {"ball_mass", r.ball_mass}, {"empirical", r.empirical},
                {"stderr", r.stderr_},    {"bound", r.bound},         {"holds", r.holds}};
}

SubspaceFrame flat_through(const Vector& x, const VectorList& directions)
{
    VectorList points{x};
    for (const auto& dir : directions) {
        points.push_back(x + dir);
    }
    return orthonormal_frame(points, x);
}

Outcome run_tube(const TubeArgs& a)
{
    const auto& s = a.sampler;
    const std::string kind = resolve_sampler(s);
    const int n = resolve_ambient(s, kind);
    const auto radii = resolve_radii(a.radii, a.decades);
    if (a.m < 0 || a.trials < 1 || a.eps.empty()) {
        throw InputError("tube-bound needs m >= 0, trials >= 1 and at least one eps");
    }
    const auto cantor = maybe_cantor(s, kind, n);

    Outcome out;
    out.table.columns = {"command", "seed",     "index",     "eps_index", "radius_index", "sampler",
                         "gamma",   "m",        "eps",       "radius",    "fraction",     "ball_mass",
                         "empirical", "stderr", "bound",     "closed_form", "closed_form_ok", "holds"};
    std::uint64_t failures = 0;
    for (std::uint64_t t = 0; t < a.trials; ++t) {
        auto rng = substream(a.common.seed, t, 0);
        const auto sampler = make_sampler(s, kind, n, rng, cantor);
        const Vector x = sampler->random_support_point(rng);
        const auto* plane = dynamic_cast<const PlaneLebesgueSampler*>(sampler.get());
        VectorList directions;
        for (int i = 0; i < a.m; ++i) {
            if (plane && a.m < plane->basis().cols()) {
                directions.push_back(plane->basis() * gaussian_vector(rng, static_cast<int>(plane->basis().cols())));
            } else {
                directions.push_back(gaussian_vector(rng, n));
            }
        }
        const auto L = flat_through(x, directions);
        const bool closed_form = plane && plane->basis().cols() == 2 && a.m == 1;
        for (std::size_t ei = 0; ei < a.eps.size(); ++ei) {
            for (std::size_t ri = 0; ri < radii.size(); ++ri) {
                const std::uint64_t salt = 1 + ei * radii.size() + ri;
                auto stream = substream(a.common.seed, t, salt);
                const auto r = tube_measure_bound_check(*sampler, L, x, radii[ri], a.eps[ei], a.samples, stream);
                Cell cf = std::string("na");
                Cell cf_ok = std::string("na");
                if (closed_form) {
                    const double exact = disk_strip_fraction(a.eps[ei]);
                    const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(a.samples));
                    cf = exact;
                    cf_ok = std::abs(r.fraction - exact) <= 3.0 * se;
                }
                out.table.rows.push_back({std::string("tube-bound"), a.common.seed, t, std::uint64_t{ei},
                                          std::uint64_t{ri}, kind, s.gamma, std::int64_t{a.m}, a.eps[ei], radii[ri],
                                          r.fraction, r.ball_mass, r.empirical, r.stderr_, r.bound, cf, cf_ok,
                                          r.holds});
                if (!r.holds) {
                    ++failures;
                    if (!out.violation) {
                        json j{{"command", "tube-bound"}, {"seed", a.common.seed}, {"index", t}, {"salt", salt}};
                        describe_sampler(j, *sampler, kind, s, n);
                        j["m"] = a.m;
                        j["eps"] = a.eps[ei];
                        j["radius"] = radii[ri];
                        j["samples"] = a.samples;
                        j["x"] = to_json(x);
                        j["directions"] = to_json(directions);
                        j["outputs"] = tube_outputs(r);
                        out.violation = j;
                    }
                }
            }
        }
    }
    out.summary = "tube-bound: " + std::to_string(failures) + " bound violations";
    return out;
}

int replay_tube(const json& j, std::ostream& os)
{
    const auto sampler = sampler_from(j);
    const Vector x = vector_from(j.at("x"));
    const auto L = flat_through(x, list_from(j.at("directions")));
    auto stream = substream(j.at("seed").get<std::uint64_t>(), j.at("index").get<std::uint64_t>(),
                            j.at("salt").get<std::uint64_t>());
    const double eps = j.at("eps").get<double>();
    const double radius = j.at("radius").get<double>();
    const auto r = tube_measure_bound_check(*sampler, L, x, radius, eps, j.at("samples").get<std::size_t>(), stream);
    os << "sampler = " << sampler->name() << ", gamma = " << format_double(sampler->gamma())
       << ", C_mu = " << format_double(sampler->c_mu()) << '\n';
    os << "m = " << L.rank() << ", eps = " << format_double(eps) << ", radius = " << format_double(radius) << '\n';
    const json recomputed = tube_outputs(r);
    for (const auto& [key, value] : recomputed.items()) {
        os << key << " = " << value.dump() << '\n';
    }
    const bool match = recorded_outputs_match(j, recomputed, os);
    return r.holds && match ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- replay

int replay(const std::string& path, std::ostream& os)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed instance file: ") + e.what());
    }
    try {
        const auto command = j.at("command").get<std::string>();
        os << "replay " << command << '\n';
        if (command == "identities") {
            return replay_identities(j, os);
        }
        if (command == "semimetric") {
            return replay_semimetric(j, os);
        }
        if (command == "funceq") {
            return replay_funceq(j, os);
        }
        if (command == "concentration") {
            return replay_concentration(j, os);
        }
        if (command == "tube-bound") {
            return replay_tube(j, os);
        }
        throw InputError("unknown command in instance file: " + command);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed instance file: ") + e.what());
    }
}

// ---------------------------------------------------------------- driver

int emit(const Outcome& outcome, const Common& common, std::ostream& out, std::ostream& err)
{
    if (common.output == "-") {
        write_table(outcome.table, common.format, out);
    } else {
        std::ofstream file(common.output, std::ios::binary);
        if (!file) {
            throw InputError("cannot write " + common.output);
        }
        write_table(outcome.table, common.format, file);
    }
    err << outcome.summary << '\n';
    if (!outcome.violation) {
        return kExitOk;
    }
    err << "violation: " << outcome.violation->dump() << '\n';
    if (!common.dump.empty()) {
        std::ofstream file(common.dump, std::ios::binary);
        if (!file) {
            throw InputError("cannot write " + common.dump);
        }
        file << outcome.violation->dump(1) << '\n';
    }
    return kExitViolation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sine-function identities, simplex inequalities and concentration experiments", "hdsine"};
    app.require_subcommand(1);
    std::function<int()> action;

    IdentitiesArgs ia;
    auto* identities = app.add_subcommand("identities", "Residuals of the exact sine identities on random contexts");
    add_common(identities, ia.common);
    identities->add_option("--d", ia.d, "Dimension d (d+1 vectors in R^{d+1})")->capture_default_str();
    identities->add_option("--trials", ia.trials, "Number of random contexts")->capture_default_str();
    identities->callback([&] { action = [&] { return emit(run_identities(ia), ia.common, out, err); }; });

    SemimetricArgs sa;
    auto* semimetric = app.add_subcommand("semimetric", "Fuzz audit of the simplex inequalities");
    add_common(semimetric, sa.common);
    semimetric->add_option("--kind", sa.kind, "polar or hyper")
        ->check(CLI::IsMember({"polar", "hyper"}))
        ->capture_default_str();
    semimetric->add_option("--d", sa.d, "Dimension d")->capture_default_str();
    semimetric->add_option("--n", sa.n, "Ambient dimension (default d+1)");
    semimetric->add_option("--trials", sa.trials, "Number of seeded trials")->capture_default_str();
    semimetric->add_flag("--summary", sa.summary, "One summary row instead of one row per trial");
    semimetric->callback([&] { action = [&] { return emit(run_semimetric(sa), sa.common, out, err); }; });

    FuncEqArgs fa;
    auto* funceq = app.add_subcommand("funceq", "Functional-equation residuals on a parameter grid");
    add_common(funceq, fa.common);
    funceq->add_option("--family", fa.family, "sk (c s_k), square, cos or perturbed (x + a x^2)")
        ->check(CLI::IsMember({"sk", "square", "cos", "perturbed"}))
        ->capture_default_str();
    funceq->add_option("--c", fa.c, "Scale of c s_k")->capture_default_str();
    funceq->add_option("--k", fa.k, "Curvature of c s_k")->capture_default_str();
    funceq->add_option("--a", fa.a, "Quadratic coefficient of the perturbed family")->capture_default_str();
    funceq->add_option("--grid", fa.grid, "Points per axis")->capture_default_str();
    funceq->add_option("--range", fa.range, "Grid interval lo:hi")->capture_default_str();
    funceq->add_option("--tol", fa.tol, "Scaled residual tolerance")->capture_default_str();
    funceq->callback([&] { action = [&] { return emit(run_funceq(fa), fa.common, out, err); }; });

    ConcentrationArgs ca;
    auto* concentration = app.add_subcommand("concentration", "Monte-Carlo share of U_C in balls around w");
    add_common(concentration, ca.common);
    add_sampler_options(concentration, ca.sampler);
    concentration->add_option("--eps", ca.eps, "Allowed exceptional share")->capture_default_str();
    concentration->add_option("--C", ca.C, "Relaxation constant (default: the constant of the bound)");
    concentration->add_flag("--one-term", ca.one_term, "Use the one-term set (implied when gamma > d)");
    concentration->add_option("--samples", ca.samples, "Samples per ball")->capture_default_str();
    auto* radii = concentration->add_option("--radii", ca.radii, "Comma-separated radii")->delimiter(',');
    concentration->add_option("--radii-decades", ca.decades, "Log-spaced radii a:b:n (default 0.01:1:7)")
        ->excludes(radii);
    concentration->add_option("--configs", ca.configs, "Random (S, w) configurations")->capture_default_str();
    concentration->callback(
        [&] { action = [&] { return emit(run_concentration_command(ca), ca.common, out, err); }; });

    TubeArgs ta;
    auto* tube = app.add_subcommand("tube-bound", "Tube measure against its Ahlfors bound");
    add_common(tube, ta.common);
    add_sampler_options(tube, ta.sampler);
    tube->add_option("--m", ta.m, "Dimension of the flat L")->capture_default_str();
    tube->add_option("--eps", ta.eps, "Comma-separated tube widths relative to r")->delimiter(',');
    auto* tube_radii = tube->add_option("--radii", ta.radii, "Comma-separated radii")->delimiter(',');
    tube->add_option("--radii-decades", ta.decades, "Log-spaced radii a:b:n (default 0.01:1:7)")
        ->excludes(tube_radii);
    tube->add_option("--samples", ta.samples, "Samples per ball")->capture_default_str();
    tube->add_option("--trials", ta.trials, "Random (x, L) pairs")->capture_default_str();
    tube->callback([&] { action = [&] { return emit(run_tube(ta), ta.common, out, err); }; });

    std::string instance;
    auto* rep = app.add_subcommand("replay", "Re-evaluate a dumped instance verbosely");
    rep->add_option("instance", instance, "Instance file written by --dump")->required();
    rep->callback([&] { action = [&] { return replay(instance, out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    try {
        return action();
    } catch (const ConsistencyError& e) {
        err << "numerical inconsistency: " << e.what() << '\n';
        return kExitViolation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace hdsine::cli

#include "hdsine/concentration.hpp"

#include "hdsine/errors.hpp"
#include "hdsine/parallel.hpp"
#include "hdsine/sines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace hdsine {

namespace {

constexpr double kPi = std::numbers::pi;

// Absolute slack in the relaxed simplex inequalities.
constexpr double kMembershipSlack = 1e-12;

// Samples per independent batch of a concentration run.
constexpr std::size_t kBatchSize = 1000;

// Support membership tolerance, relative to max(1, |x|).
constexpr double kSupportTolerance = 1e-9;

// Fixed seed and margin for the Cantor sampler's declared constant.
constexpr std::uint64_t kSelfTestSeed = 0x5eed;
constexpr double kSelfTestMargin = 1.25;

void require_radius(const MeasureSampler& sampler, double r)
{
    if (!(r > 0.0) || !std::isfinite(r) || r > sampler.support_diam()) {
        throw InputError("radius must lie in (0, diam(supp mu)]");
    }
}

void require_center(const MeasureSampler& sampler, const Vector& center)
{
    if (center.size() != sampler.ambient_dim() || !center.allFinite()) {
        throw InputError("center has the wrong dimension");
    }
    if (!sampler.on_support(center)) {
        throw InputError("center is not on the support of mu");
    }
}

int require_family(const VectorList& S)
{
    if (S.size() < 2) {
        throw InputError("S needs at least two vectors");
    }
    return common_dimension(S);
}

VectorList shifted(const VectorList& S, const Vector& w)
{
    VectorList out;
    out.reserve(S.size());
    for (const auto& v : S) {
        out.push_back(v - w);
    }
    return out;
}

// lhs and the ascending substituted terms of the polar sine inequality.
std::pair<double, std::vector<double>> polar_terms(const VectorList& S, const Vector& w, const Vector& u)
{
    const int n = require_family(S);
    if (w.size() != n || u.size() != n) {
        throw InputError("w and u must match the dimension of S");
    }
    if (u == w) {
        throw InputError("u must differ from w");
    }
    const VectorList edges = shifted(S, w);
    const Vector eu = u - w;
    std::vector<double> terms;
    terms.reserve(edges.size());
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        terms.push_back(abs_polar_sine(replaced(edges, i, eu)));
    }
    std::sort(terms.begin(), terms.end());
    return {abs_polar_sine(edges), std::move(terms)};
}

MeasureBoundRecord region_measure(const MeasureSampler& sampler, const Vector& x, double r, std::size_t samples,
                                  Rng& rng, const std::function<bool(const Vector&)>& inside, double bound)
{
    if (samples < 1) {
        throw InputError("samples must be positive");
    }
    const auto ball = sampler.draw(x, r, samples, rng);
    std::size_t hits = 0;
    for (const auto& p : ball.points) {
        hits += inside(p) ? 1 : 0;
    }
    MeasureBoundRecord out;
    const auto N = static_cast<double>(ball.points.size());
    out.fraction = static_cast<double>(hits) / N;
    out.ball_mass = ball.mass;
    out.empirical = out.fraction * ball.mass;
    const double se_fraction = std::sqrt(out.fraction * (1.0 - out.fraction) / N);
    out.stderr_ = std::hypot(ball.mass * se_fraction, out.fraction * ball.mass_stderr);
    out.bound = bound;
    out.holds = out.empirical <= bound + 3.0 * out.stderr_;
    return out;
}

void require_flat_through(const MeasureSampler& sampler, const SubspaceFrame& L, const Vector& x, double r)
{
    require_center(sampler, x);
    require_radius(sampler, r);
    if (L.ambient_dim() != sampler.ambient_dim()) {
        throw InputError("L has the wrong ambient dimension");
    }
    if (static_cast<double>(L.rank()) >= sampler.gamma()) {
        throw InputError("the flat dimension m must be below gamma");
    }
    if (!L.contains(x, x.norm())) {
        throw InputError("x is not in L");
    }
}

}  // namespace

PlaneLebesgueSampler::PlaneLebesgueSampler(Vector origin, Matrix basis)
    : origin_(std::move(origin)), basis_(std::move(basis))
{
    if (basis_.rows() != origin_.size() || basis_.cols() < 1 || basis_.cols() > basis_.rows()) {
        throw InputError("plane basis must be n x dim with 1 <= dim <= n");
    }
    const Matrix gram = basis_.transpose() * basis_;
    if (!(gram - Matrix::Identity(basis_.cols(), basis_.cols())).isZero(1e-10)) {
        throw InputError("plane basis must be orthonormal");
    }
}

PlaneLebesgueSampler PlaneLebesgueSampler::random(int n, int dim, Rng& rng)
{
    if (dim < 1 || n < dim) {
        throw InputError("plane sampler needs 1 <= dim <= n");
    }
    const Matrix Q = random_orthogonal(rng, n);
    return PlaneLebesgueSampler(gaussian_vector(rng, n), Q.leftCols(dim));
}

std::string PlaneLebesgueSampler::name() const
{
    std::ostringstream os;
    os << "plane(dim=" << basis_.cols() << ",n=" << basis_.rows() << ")";
    return os.str();
}

double PlaneLebesgueSampler::support_diam() const { return std::numeric_limits<double>::infinity(); }

bool PlaneLebesgueSampler::on_support(const Vector& x) const
{
    if (x.size() != origin_.size()) {
        return false;
    }
    const Vector rel = x - origin_;
    const Vector off = rel - basis_ * (basis_.transpose() * rel);
    return off.norm() <= kSupportTolerance * std::max(1.0, rel.norm());
}

Vector PlaneLebesgueSampler::random_support_point(Rng& rng) const
{
    return origin_ + basis_ * gaussian_vector(rng, static_cast<int>(basis_.cols()));
}

BallSample PlaneLebesgueSampler::draw(const Vector& center, double r, std::size_t count, Rng& rng) const
{
    require_center(*this, center);
    require_radius(*this, r);
    const auto dim = static_cast<int>(basis_.cols());
    BallSample out;
    out.points.reserve(count);
    Vector y(dim);
    while (out.points.size() < count) {
        for (int k = 0; k < dim; ++k) {
            y[k] = uniform(rng, -1.0, 1.0);
        }
        ++out.proposals;
        if (y.squaredNorm() <= 1.0) {
            out.points.push_back(center + r * (basis_ * y));
        }
    }
    out.mass = std::pow(r, dim);
    return out;
}

CantorProductSampler::CantorProductSampler(int d, double gamma, int n, std::optional<double> declared_c_mu)
    : d_(d), gamma_(gamma), n_(n)
{
    if (d < 1 || n < d) {
        throw InputError("Cantor product sampler needs 1 <= d <= n");
    }
    if (!(gamma > d - 1.0) || gamma > d) {
        throw InputError("Cantor product sampler needs d - 1 < gamma <= d");
    }
    ratio_ = std::pow(2.0, -1.0 / (gamma - d + 1.0));
    if (declared_c_mu) {
        if (!(*declared_c_mu >= 1.0)) {
            throw InputError("C_mu must be at least one");
        }
        c_mu_ = *declared_c_mu;
    } else {
        const auto report = regularity_self_test(*this, 200, 4000, 1e-3, 1.0, kSelfTestSeed);
        c_mu_ = std::max(1.0, kSelfTestMargin * report.estimated_c_mu);
    }
}

std::string CantorProductSampler::name() const
{
    std::ostringstream os;
    os << "cantor(d=" << d_ << ",gamma=" << gamma_ << ",n=" << n_ << ")";
    return os.str();
}

double CantorProductSampler::support_diam() const { return std::sqrt(static_cast<double>(d_)); }

bool CantorProductSampler::on_support(const Vector& x) const
{
    if (x.size() != n_) {
        return false;
    }
    const double tol = 1e-12;
    for (int k = d_; k < n_; ++k) {
        if (std::abs(x[k]) > tol) {
            return false;
        }
    }
    for (int k = 0; k + 1 < d_; ++k) {
        if (x[k] < -tol || x[k] > 1.0 + tol) {
            return false;
        }
    }
    const double c = x[d_ - 1];
    double left = 0.0;
    double len = 1.0;
    while (len > tol) {
        if (c < left - tol || c > left + len + tol) {
            return false;
        }
        const double child = len * ratio_;
        if (c <= left + child + tol) {
            len = child;
        } else if (c >= left + len - child - tol) {
            left += len - child;
            len = child;
        } else {
            return false;
        }
    }
    return true;
}

double CantorProductSampler::cantor_point(double left, int level, Rng& rng) const
{
    double len = std::pow(ratio_, level);
    std::uint64_t bits = 0;
    int remaining = 0;
    while (len > 1e-18) {
        if (remaining == 0) {
            bits = rng();
            remaining = 64;
        }
        const double child = len * ratio_;
        if (bits & 1u) {
            left += len - child;
        }
        bits >>= 1;
        --remaining;
        len = child;
    }
    return left;
}

void CantorProductSampler::cantor_intervals(double lo, double hi, int level, std::vector<double>& lefts) const
{
    std::function<void(double, int, double)> descend = [&](double left, int lev, double len) {
        if (left > hi || left + len < lo) {
            return;
        }
        if (lev == level) {
            lefts.push_back(left);
            return;
        }
        const double child = len * ratio_;
        descend(left, lev + 1, child);
        descend(left + len - child, lev + 1, child);
    };
    descend(0.0, 0, 1.0);
}

Vector CantorProductSampler::random_support_point(Rng& rng) const
{
    Vector x = Vector::Zero(n_);
    for (int k = 0; k + 1 < d_; ++k) {
        x[k] = uniform(rng, 0.0, 1.0);
    }
    x[d_ - 1] = cantor_point(0.0, 0, rng);
    return x;
}

BallSample CantorProductSampler::draw(const Vector& center, double r, std::size_t count, Rng& rng) const
{
    require_center(*this, center);
    require_radius(*this, r);

    // Proposal: uniform on the clipped box for the interval factors times the
    // Cantor measure on the level-l cylinders meeting [c - r, c + r].
    std::vector<double> lo(static_cast<std::size_t>(d_ - 1));
    std::vector<double> hi(lo.size());
    double box = 1.0;
    for (int k = 0; k + 1 < d_; ++k) {
        lo[k] = std::max(0.0, center[k] - r);
        hi[k] = std::min(1.0, center[k] + r);
        box *= hi[k] - lo[k];
    }
    int level = 0;
    while (std::pow(ratio_, level) > r) {
        ++level;
    }
    const double c = center[d_ - 1];
    std::vector<double> lefts;
    cantor_intervals(c - r, c + r, level, lefts);
    const double proposal_mass = box * static_cast<double>(lefts.size()) * std::pow(0.5, level);

    BallSample out;
    out.points.reserve(count);
    const std::uint64_t cap = 100000 * static_cast<std::uint64_t>(count) + 1000000;
    std::uniform_int_distribution<std::size_t> pick(0, lefts.size() - 1);
    Vector p = Vector::Zero(n_);
    const double r2 = r * r;
    while (out.points.size() < count) {
        if (out.proposals >= cap) {
            throw ConsistencyError("Cantor ball sampler exceeded its proposal budget");
        }
        for (int k = 0; k + 1 < d_; ++k) {
            p[k] = uniform(rng, lo[k], hi[k]);
        }
        p[d_ - 1] = cantor_point(lefts[pick(rng)], level, rng);
        ++out.proposals;
        if ((p - center).squaredNorm() <= r2) {
            out.points.push_back(p);
        }
    }
    const double accept = static_cast<double>(count) / static_cast<double>(out.proposals);
    out.mass = proposal_mass * accept;
    out.mass_stderr =
        proposal_mass * std::sqrt(accept * (1.0 - accept) / static_cast<double>(out.proposals));
    return out;
}

RegularityReport regularity_self_test(const MeasureSampler& sampler, int balls, std::size_t samples, double r_lo,
                                      double r_hi, std::uint64_t seed)
{
    if (balls < 1 || samples < 1 || !(r_lo > 0.0) || r_hi < r_lo) {
        throw InputError("self-test needs balls, samples and 0 < r_lo <= r_hi");
    }
    RegularityReport out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.max_ratio = 0.0;
    out.within_declared = true;
    const double C = sampler.c_mu();
    for (int b = 0; b < balls; ++b) {
        auto rng = substream(seed, static_cast<std::uint64_t>(b));
        const Vector x = sampler.random_support_point(rng);
        const double r = std::min(log_uniform(rng, r_lo, r_hi), sampler.support_diam());
        const auto ball = sampler.draw(x, r, samples, rng);
        const double scale = std::pow(r, sampler.gamma());
        const double ratio = ball.mass / scale;
        const double band = 3.0 * ball.mass_stderr / scale;
        out.min_ratio = std::min(out.min_ratio, ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
        if (ratio - band > C || ratio + band < 1.0 / C) {
            out.within_declared = false;
        }
    }
    out.estimated_c_mu = std::max(out.max_ratio, 1.0 / out.min_ratio);
    return out;
}

bool in_U_C(const VectorList& S, const Vector& w, const Vector& u, double C)
{
    const auto [lhs, terms] = polar_terms(S, w, u);
    return lhs <= C * (terms[0] + terms[1]) + kMembershipSlack;
}

bool in_U_C_one_term(const VectorList& S, const Vector& w, const Vector& u, double C)
{
    const auto [lhs, terms] = polar_terms(S, w, u);
    return lhs <= C * terms[0] + kMembershipSlack;
}

bool in_cone_i(const VectorList& S, int i, double eps, const Vector& u)
{
    const int n = require_family(S);
    if (i < 0 || i >= static_cast<int>(S.size()) || u.size() != n) {
        throw InputError("cone index or vector dimension out of range");
    }
    const auto L = span_without(S, {i}, n);
    const double theta = elevation_angle(S[static_cast<std::size_t>(i)], L);
    return in_cone(eps * theta, L, Vector::Zero(n), u);
}

namespace {

std::vector<bool> cone_memberships(const VectorList& S, double C, const Vector& u)
{
    const int n = require_family(S);
    if (static_cast<int>(S.size()) > n || abs_polar_sine(S) < kDefaultTolerance) {
        throw InputError("S must be linearly independent");
    }
    if (u.size() != n || u.isZero(0.0)) {
        throw InputError("u must be a nonzero vector of the ambient dimension");
    }
    if (!(C >= 1.0)) {
        throw InputError("C must be at least one");
    }
    std::vector<bool> inside;
    for (int i = 0; i < static_cast<int>(S.size()); ++i) {
        inside.push_back(in_cone_i(S, i, 1.0 / C, u));
    }
    return inside;
}

}  // namespace

Implication cone_complement_containment_check(const VectorList& S, double C, const Vector& u)
{
    const auto inside = cone_memberships(S, C, u);
    Implication out;
    // Outside every pairwise intersection means inside at most one cone.
    out.premise = std::count(inside.begin(), inside.end(), true) <= 1;
    out.conclusion = in_U_C(S, Vector::Zero(u.size()), u, C);
    return out;
}

Implication cone_complement_one_term_check(const VectorList& S, double C, const Vector& u)
{
    const auto inside = cone_memberships(S, C, u);
    Implication out;
    out.premise = std::none_of(inside.begin(), inside.end(), [](bool b) { return b; });
    out.conclusion = in_U_C_one_term(S, Vector::Zero(u.size()), u, C);
    return out;
}

Implication two_cone_containment_check(const SubspaceFrame& V1, const SubspaceFrame& V2, const Vector& v1,
                                       const Vector& v2, double s, const Vector& u)
{
    const int n = V1.ambient_dim();
    if (V1.is_affine() || V2.is_affine() || V2.ambient_dim() != n || v1.size() != n || v2.size() != n ||
        u.size() != n) {
        throw InputError("V1, V2 must be linear subspaces of one ambient space");
    }
    const int k = V1.rank() + 1;
    if (k < 3 || V2.rank() != k - 1 || joint_rank(V1, V2) != k) {
        throw InputError("V1 and V2 must be (k-1)-dimensional with a k-dimensional sum, k >= 3");
    }
    if (!V1.contains(v1, v1.norm()) || V2.contains(v1, v1.norm())) {
        throw InputError("v1 must lie in V1 \\ V2");
    }
    if (!V2.contains(v2, v2.norm()) || V1.contains(v2, v2.norm())) {
        throw InputError("v2 must lie in V2 \\ V1");
    }
    if (!(s > 0.0) || s > 1.0) {
        throw InputError("s must lie in (0, 1]");
    }
    const double c = 2.0 * s / (std::sqrt(5.0) * kPi);
    const Vector zero = Vector::Zero(n);
    Implication out;
    out.premise = in_cone(c * elevation_angle(v1, V2), V2, zero, u) &&
                  in_cone(c * elevation_angle(v2, V1), V1, zero, u);
    const auto W = intersect(V1, V2);
    out.conclusion = in_cone(s * max_elevation(v1, v2, W), W, zero, u);
    return out;
}

Implication pair_cone_containment_check(const VectorList& S, int i, int j, double s, const Vector& u)
{
    const int n = require_family(S);
    const int count = static_cast<int>(S.size());
    if (i < 0 || j < 0 || i >= count || j >= count || i == j) {
        throw InputError("i and j must be distinct indices of S");
    }
    if (count > n || abs_polar_sine(S) < kDefaultTolerance) {
        throw InputError("S must be linearly independent");
    }
    return two_cone_containment_check(span_without(S, {i}, n), span_without(S, {j}, n),
                                      S[static_cast<std::size_t>(j)], S[static_cast<std::size_t>(i)], s, u);
}

MeasureBoundRecord tube_measure_bound_check(const MeasureSampler& sampler, const SubspaceFrame& L, const Vector& x,
                                            double r, double eps, std::size_t samples, Rng& rng)
{
    require_flat_through(sampler, L, x, r);
    if (!(eps >= 0.0) || eps > 1.0) {
        throw InputError("eps must lie in [0, 1]");
    }
    const double m = L.rank();
    const double gamma = sampler.gamma();
    const double bound =
        std::pow(2.0, m + 1.5 * gamma) * sampler.c_mu() * std::pow(eps, gamma - m) * std::pow(r, gamma);
    const double height = eps * r;
    return region_measure(sampler, x, r, samples, rng,
                          [&](const Vector& p) { return L.distance_to(p) <= height; }, bound);
}

MeasureBoundRecord cone_measure_bound_check(const MeasureSampler& sampler, const SubspaceFrame& L, const Vector& x,
                                            double r, double theta, std::size_t samples, Rng& rng)
{
    require_flat_through(sampler, L, x, r);
    if (!(theta >= 0.0) || theta > kPi / 2) {
        throw InputError("theta must lie in [0, pi/2]");
    }
    const double m = L.rank();
    const double gamma = sampler.gamma();
    const double bound = std::pow(2.0, m + 1.5 * gamma) * sampler.c_mu() * std::pow(std::sin(theta), gamma - m) *
                         std::pow(r, gamma);
    return region_measure(sampler, x, r, samples, rng,
                          [&](const Vector& p) { return in_cone(theta, L, x, p); }, bound);
}

double disk_strip_fraction(double eps)
{
    if (!(eps >= 0.0) || eps > 1.0) {
        throw InputError("eps must lie in [0, 1]");
    }
    return 2.0 / kPi * (eps * std::sqrt(1.0 - eps * eps) + std::asin(eps));
}

std::vector<RadiusRecord> run_concentration(const ConcentrationConfig& cfg, const MeasureSampler& sampler, int workers)
{
    if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < 1.0)) {
        throw InputError("epsilon must lie in (0, 1)");
    }
    if (!(cfg.C >= 1.0) || !std::isfinite(cfg.C)) {
        throw InputError("C must be finite and at least one");
    }
    if (cfg.samples_per_ball < 1 || cfg.radii.empty()) {
        throw InputError("need at least one radius and one sample per ball");
    }
    if (require_family(cfg.S) != sampler.ambient_dim()) {
        throw InputError("S does not live in the sampler's ambient space");
    }
    require_center(sampler, cfg.w);
    for (double r : cfg.radii) {
        require_radius(sampler, r);
    }

    const std::size_t batches = (cfg.samples_per_ball + kBatchSize - 1) / kBatchSize;
    const std::size_t tasks = cfg.radii.size() * batches;
    std::vector<std::size_t> hits(tasks, 0);
    std::vector<std::size_t> totals(tasks, 0);
    parallel_for(
        tasks,
        [&](std::size_t t) {
            const std::size_t ri = t / batches;
            const std::size_t b = t % batches;
            const std::size_t count = std::min(kBatchSize, cfg.samples_per_ball - b * kBatchSize);
            auto rng = substream(cfg.seed, std::bit_cast<std::uint64_t>(cfg.radii[ri]), b);
            const auto ball = sampler.draw(cfg.w, cfg.radii[ri], count, rng);
            for (const auto& u : ball.points) {
                if (u == cfg.w) {
                    continue;  // a null event for every non-atomic measure
                }
                ++totals[t];
                const bool member = cfg.one_term ? in_U_C_one_term(cfg.S, cfg.w, u, cfg.C)
                                                 : in_U_C(cfg.S, cfg.w, u, cfg.C);
                hits[t] += member ? 1 : 0;
            }
        },
        workers > 0 ? workers : worker_count());

    std::vector<RadiusRecord> out;
    for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri) {
        RadiusRecord rec;
        rec.radius = cfg.radii[ri];
        std::size_t h = 0;
        for (std::size_t b = 0; b < batches; ++b) {
            h += hits[ri * batches + b];
            rec.samples += totals[ri * batches + b];
        }
        const auto N = static_cast<double>(rec.samples);
        rec.fraction = static_cast<double>(h) / N;
        rec.stderr_ = std::sqrt(rec.fraction * (1.0 - rec.fraction) / N);
        rec.pass = rec.fraction >= 1.0 - cfg.epsilon - 3.0 * rec.stderr_;
        out.push_back(rec);
    }
    return out;
}

namespace {

void require_concentration_params(double epsilon, int d, double c_mu)
{
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw InputError("epsilon must lie in (0, 1)");
    }
    if (d < 1) {
        throw InputError("d must be positive");
    }
    if (!(c_mu >= 1.0) || !std::isfinite(c_mu)) {
        throw InputError("C_mu must be finite and at least one");
    }
}

double checked_asin(double arg)
{
    if (arg > 1.0) {
        throw InputError("epsilon is too large for the bound: arcsine argument exceeds one");
    }
    return std::asin(arg);
}

}  // namespace

double c0_prime(double epsilon, double gamma, int d, double c_mu)
{
    require_concentration_params(epsilon, d, c_mu);
    if (!(gamma > d - 1.0) || gamma > d) {
        throw InputError("gamma must lie in (d-1, d]");
    }
    const double pairs = d * (d + 1) / 2.0;
    const double base = epsilon / (std::pow(2.0, 1.5 * gamma + d - 1.0) * c_mu * c_mu * pairs);
    const double arg = std::pow(base, 1.0 / (gamma + 1.0 - d));
    return std::sqrt(5.0) * (kPi / 2) * (kPi / 2) / checked_asin(arg);
}

double c0_double_prime(double epsilon, int d, double c_mu)
{
    require_concentration_params(epsilon, d, c_mu);
    const double arg = epsilon / (std::pow(2.0, 2.5 * d - 1.0) * c_mu * c_mu);
    return std::sqrt(5.0) * (kPi / 2) * (kPi / 2) / checked_asin(arg);
}

double c0_one_term(double epsilon, double gamma, int d, double c_mu)
{
    require_concentration_params(epsilon, d, c_mu);
    if (!(gamma > d) || !std::isfinite(gamma)) {
        throw InputError("the one-term constant needs gamma > d");
    }
    const double base = epsilon / ((d + 1.0) * std::pow(2.0, d + 1.5 * gamma) * c_mu * c_mu);
    const double arg = std::pow(base, 1.0 / (gamma - d));
    return (kPi / 2) / checked_asin(arg);
}

std::vector<double> log_spaced(double lo, double hi, int count)
{
    if (!(lo > 0.0) || hi < lo || count < 1) {
        throw InputError("log spacing needs 0 < lo <= hi and count >= 1");
    }
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        out.push_back(std::exp((1.0 - t) * std::log(lo) + t * std::log(hi)));
    }
    // Exact endpoints, so a radius equal to the diameter stays admissible.
    out.front() = lo;
    if (count > 1) {
        out.back() = hi;
    }
    return out;
}

}  // namespace hdsine

#pragma once

#include "hdsine/angles.hpp"
#include "hdsine/linalg.hpp"
#include "hdsine/random.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hdsine {

/// Points drawn from mu restricted to a ball, with an estimate of mu(ball).
struct BallSample {
    VectorList points;
    double mass = 0.0;
    double mass_stderr = 0.0;  ///< zero when the mass is known exactly
    std::uint64_t proposals = 0;
};

/// A gamma-dimensional Ahlfors regular measure that can be sampled exactly
/// inside balls centred on its support.
class MeasureSampler {
public:
    virtual ~MeasureSampler() = default;

    virtual std::string name() const = 0;
    virtual double gamma() const = 0;
    /// Regularity constant, exact or declared from the self-test.
    virtual double c_mu() const = 0;
    /// Infinity for unbounded support.
    virtual double support_diam() const = 0;
    virtual int ambient_dim() const = 0;
    virtual bool on_support(const Vector& x) const = 0;
    virtual Vector random_support_point(Rng& rng) const = 0;
    /// `count` independent points of mu restricted to B(center, r), normalized.
    /// Throws InputError when center is off the support or r <= 0.
    virtual BallSample draw(const Vector& center, double r, std::size_t count, Rng& rng) const = 0;
};

/// Lebesgue measure on an affine `dim`-plane of R^n, scaled so that every ball
/// centred on the plane has mass r^dim. C_mu = 1 and the support is unbounded.
/// dim == n gives the full-dimensional measure.
class PlaneLebesgueSampler final : public MeasureSampler {
public:
    /// `basis` is n x dim with orthonormal columns.
    PlaneLebesgueSampler(Vector origin, Matrix basis);

    /// A uniformly rotated plane through a Gaussian origin.
    static PlaneLebesgueSampler random(int n, int dim, Rng& rng);

    std::string name() const override;
    double gamma() const override { return static_cast<double>(basis_.cols()); }
    double c_mu() const override { return 1.0; }
    double support_diam() const override;
    int ambient_dim() const override { return static_cast<int>(basis_.rows()); }
    bool on_support(const Vector& x) const override;
    Vector random_support_point(Rng& rng) const override;
    BallSample draw(const Vector& center, double r, std::size_t count, Rng& rng) const override;

    const Vector& origin() const { return origin_; }
    const Matrix& basis() const { return basis_; }

private:
    Vector origin_;
    Matrix basis_;
};

/// Product of Lebesgue measure on [0,1]^{d-1} and the two-piece Cantor measure
/// of dimension gamma - d + 1 on [0,1], placed in the first d coordinates of R^n.
class CantorProductSampler final : public MeasureSampler {
public:
    /// Requires d - 1 < gamma <= d and n >= d. Without `declared_c_mu` the
    /// constant is taken from a fixed-seed self-test with a 25% margin.
    CantorProductSampler(int d, double gamma, int n, std::optional<double> declared_c_mu = std::nullopt);

    std::string name() const override;
    double gamma() const override { return gamma_; }
    double c_mu() const override { return c_mu_; }
    double support_diam() const override;
    int ambient_dim() const override { return n_; }
    bool on_support(const Vector& x) const override;
    Vector random_support_point(Rng& rng) const override;
    BallSample draw(const Vector& center, double r, std::size_t count, Rng& rng) const override;

    /// Contraction ratio of the Cantor factor.
    double ratio() const { return ratio_; }

private:
    double cantor_point(double left, int level, Rng& rng) const;
    void cantor_intervals(double lo, double hi, int level, std::vector<double>& lefts) const;

    int d_;
    double gamma_;
    int n_;
    double ratio_;
    double c_mu_ = 1.0;
};

struct RegularityReport {
    double min_ratio = 0.0;  ///< smallest mu(B)/r^gamma seen
    double max_ratio = 0.0;
    double estimated_c_mu = 0.0;  ///< max(max_ratio, 1/min_ratio)
    bool within_declared = false; ///< all ratios inside [1/C_mu, C_mu] within 3 sigma
};

/// mu(B(x, r))/r^gamma over `balls` random support points and radii log-uniform
/// in [r_lo, r_hi].
RegularityReport regularity_self_test(const MeasureSampler& sampler, int balls, std::size_t samples,
                                      double r_lo, double r_hi, std::uint64_t seed);

/// |p_w(S)| <= C (|p_w(S, u in slot i)| + |p_w(S, u in slot j)|) + 1e-12 for all i < j.
/// Throws InputError for u == w.
bool in_U_C(const VectorList& S, const Vector& w, const Vector& u, double C);

/// |p_w(S)| <= C |p_w(S, u in slot i)| + 1e-12 for every i.
bool in_U_C_one_term(const VectorList& S, const Vector& w, const Vector& u, double C);

/// Outcome of checking an implication premise => conclusion on one input.
struct Implication {
    bool premise = false;
    bool conclusion = false;
    bool holds() const { return !premise || conclusion; }
};

/// Cone(eps * theta(v_i, L_i), L_i, 0) with L_i = span(S \ v_i).
bool in_cone_i(const VectorList& S, int i, double eps, const Vector& u);

/// u outside every Cone^i(1/C) ∩ Cone^j(1/C) implies u in U_C(S, 0).
/// Throws InputError for dependent S or u == 0.
Implication cone_complement_containment_check(const VectorList& S, double C, const Vector& u);

/// The one-term analogue: u outside every Cone^i(1/C) implies u in U'_C(S, 0).
Implication cone_complement_one_term_check(const VectorList& S, double C, const Vector& u);

/// u in Cone(c theta(v1, V2), V2, 0) ∩ Cone(c theta(v2, V1), V1, 0) with
/// c = 2s/(sqrt(5) pi) implies u in Cone(s Theta(v1, v2, V1 ∩ V2), V1 ∩ V2, 0).
/// Throws InputError unless V1, V2 are (k-1)-dimensional with a k-dimensional
/// joint span, k >= 3, v1 in V1 \ V2, v2 in V2 \ V1 and s in (0, 1].
Implication two_cone_containment_check(const SubspaceFrame& V1, const SubspaceFrame& V2, const Vector& v1,
                                       const Vector& v2, double s, const Vector& u);

/// The previous check with V1 = span(S \ v_i), V2 = span(S \ v_j), v1 = v_j, v2 = v_i.
Implication pair_cone_containment_check(const VectorList& S, int i, int j, double s, const Vector& u);

struct MeasureBoundRecord {
    double fraction = 0.0;   ///< share of ball samples inside the region
    double ball_mass = 0.0;
    double empirical = 0.0;  ///< fraction * ball_mass
    double stderr_ = 0.0;
    double bound = 0.0;
    bool holds = false;      ///< empirical <= bound + 3 stderr
};

/// mu(Tube(L, eps r) ∩ B(x, r)) against 2^{m + 3 gamma/2} C_mu eps^{gamma - m} r^gamma.
/// Throws InputError when m >= gamma, x is not on the support or not in L,
/// eps is outside [0, 1] or r is outside (0, diam].
MeasureBoundRecord tube_measure_bound_check(const MeasureSampler& sampler, const SubspaceFrame& L, const Vector& x,
                                            double r, double eps, std::size_t samples, Rng& rng);

/// mu(Cone(theta, L, x) ∩ B(x, r)) against 2^{m + 3 gamma/2} C_mu sin(theta)^{gamma - m} r^gamma.
MeasureBoundRecord cone_measure_bound_check(const MeasureSampler& sampler, const SubspaceFrame& L, const Vector& x,
                                            double r, double theta, std::size_t samples, Rng& rng);

/// Share of a disk within distance eps of a diameter: (2/pi)(eps sqrt(1 - eps^2) + asin eps).
double disk_strip_fraction(double eps);

struct ConcentrationConfig {
    double epsilon = 0.2;
    double C = 1.0;
    VectorList S;
    Vector w;
    std::vector<double> radii;
    std::size_t samples_per_ball = 20000;
    std::uint64_t seed = 0;
    bool one_term = false;  ///< evaluate U'_C instead of U_C
};

struct RadiusRecord {
    double radius = 0.0;
    std::size_t samples = 0;
    double fraction = 0.0;
    double stderr_ = 0.0;
    bool pass = false;  ///< fraction >= 1 - eps - 3 stderr
};

/// Batches draw from substream(seed, bits of the radius, batch), so one radius
/// reproduces on its own. Throws InputError for invalid parameters or w off the support.
std::vector<RadiusRecord> run_concentration(const ConcentrationConfig& cfg, const MeasureSampler& sampler,
                                            int workers = 0);

/// sqrt(5) (pi/2)^2 / asin[(eps / (2^{3 gamma/2 + d - 1} C_mu^2 binom(d+1, 2)))^{1/(gamma + 1 - d)}].
/// Throws InputError when the arcsine argument exceeds one or parameters leave their ranges.
double c0_prime(double epsilon, double gamma, int d, double c_mu);

/// sqrt(5) (pi/2)^2 / asin(eps / (2^{5d/2 - 1} C_mu^2)), for a fixed index pair and gamma = d.
double c0_double_prime(double epsilon, int d, double c_mu);

/// Constant for the one-term set when gamma > d:
/// (pi/2) / asin[(eps / ((d+1) 2^{d + 3 gamma/2} C_mu^2))^{1/(gamma - d)}].
double c0_one_term(double epsilon, double gamma, int d, double c_mu);

/// Radii a^(1-t) b^t for t = 0, 1/(count-1), ..., 1.
std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace hdsine

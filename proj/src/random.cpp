#include "hdsine/random.hpp"

#include <cmath>

namespace hdsine {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng substream(std::uint64_t seed, std::uint64_t index)
{
    return substream(seed, index, 0);
}

Rng substream(std::uint64_t seed, std::uint64_t index, std::uint64_t salt)
{
    const std::uint64_t a = splitmix64(seed ^ splitmix64(salt));
    const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(Rng& rng, double lo, double hi)
{
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

Vector gaussian_vector(Rng& rng, int n)
{
    std::normal_distribution<double> normal;
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = normal(rng);
    }
    return v;
}

VectorList gaussian_vectors(Rng& rng, int count, int n)
{
    VectorList out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(gaussian_vector(rng, n));
    }
    return out;
}

Vector unit_vector(Rng& rng, int n)
{
    Vector v = gaussian_vector(rng, n);
    while (v.norm() == 0.0) {
        v = gaussian_vector(rng, n);
    }
    return v / v.norm();
}

Matrix random_householder(Rng& rng, int n)
{
    const Vector h = unit_vector(rng, n);
    return Matrix::Identity(n, n) - 2.0 * h * h.transpose();
}

Matrix random_orthogonal(Rng& rng, int n)
{
    Matrix q = Matrix::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        q = random_householder(rng, n) * q;
    }
    return q;
}

}  // namespace hdsine

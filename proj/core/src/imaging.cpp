#include "tvwf/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tvwf/grid_ops.hpp"

namespace tvwf {

ScalarField gen_square(int n, double inside, double outside) {
    if (n < 8) throw Error("gen_square: n must be at least 8");
    int side = n / 3;
    if ((n - side) % 2 != 0) ++side;  // keep the square centered
    const int start = (n - side) / 2;
    ScalarField u(Grid(n, n, 1.0), outside);
    for (int j = start; j < start + side; ++j)
        for (int i = start; i < start + side; ++i) u(i, j) = inside;
    return u;
}

ScalarField gen_pyramid(int n) {
    if (n < 8) throw Error("gen_pyramid: n must be at least 8");
    const double h = 1.0 / (n - 1);
    ScalarField u(Grid(n, n, h));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double x = i * h;
            const double y = j * h;
            const double d = std::max(std::abs(x - 0.5), std::abs(y - 0.5));
            u(i, j) = std::max(0.0, 1.0 - 2.0 * d);
        }
    }
    return u;
}

namespace {

// Uniform draw in (0,1) from the top 53 bits; the half-step offset keeps the
// log in Box-Muller away from zero.
double u01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

ScalarField add_gaussian_noise(const ScalarField& u, double variance, std::uint64_t seed) {
    if (variance < 0.0) throw Error("add_gaussian_noise: variance must be nonnegative");
    ScalarField out = u;
    if (variance == 0.0) return out;
    const double sigma = std::sqrt(variance);
    std::mt19937_64 rng(seed);
    const double two_pi = 2.0 * 3.14159265358979323846;
    const std::size_t n = out.values.size();
    for (std::size_t k = 0; k < n; k += 2) {
        const double r = std::sqrt(-2.0 * std::log(u01(rng)));
        const double phi = two_pi * u01(rng);
        out.values[k] += sigma * r * std::cos(phi);
        if (k + 1 < n) out.values[k + 1] += sigma * r * std::sin(phi);
    }
    return out;
}

ScalarField to_field(const ImageBuffer& buf, double h) {
    if (buf.width < 2 || buf.height < 2)
        throw Error("to_field: image must be at least 2x2");
    if (static_cast<int>(buf.pixels.size()) != buf.width * buf.height)
        throw Error("to_field: pixel count does not match dimensions");
    return ScalarField(Grid(buf.width, buf.height, h), buf.pixels);
}

ImageBuffer to_image(const ScalarField& u, bool rescale) {
    ImageBuffer buf;
    buf.width = u.grid.nx;
    buf.height = u.grid.ny;
    buf.pixels.resize(u.values.size());
    if (rescale) {
        const double lo = min_value(u);
        const double range = max_value(u) - lo;
        for (std::size_t k = 0; k < u.values.size(); ++k)
            buf.pixels[k] = range > 0.0 ? (u.values[k] - lo) / range : 0.0;
    } else {
        for (std::size_t k = 0; k < u.values.size(); ++k)
            buf.pixels[k] = std::clamp(u.values[k], 0.0, 1.0);
    }
    return buf;
}

double psnr(const ScalarField& u, const ScalarField& ref) {
    if (!(u.grid == ref.grid)) throw Error("psnr: fields live on different grids");
    double mse = 0.0;
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        const double d = u.values[k] - ref.values[k];
        mse += d * d;
    }
    mse /= static_cast<double>(u.values.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    const double range = max_value(ref) - min_value(ref);
    return 10.0 * std::log10(range * range / mse);
}

double mass(const ScalarField& u, double h) {
    if (!(h > 0.0)) throw Error("mass: h must be positive");
    return h * h * sum(u);
}

double discrete_tv(const ScalarField& u) {
    const VectorField g = grad(u);
    double tv = 0.0;
    for (std::size_t k = 0; k < g.comp1.size(); ++k)
        tv += std::abs(g.comp1[k]) + std::abs(g.comp2[k]);
    return u.grid.h * tv;
}

}  // namespace tvwf

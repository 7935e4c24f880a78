// Phantom generators, seeded noise, grayscale image I/O, and quality metrics.
//
// Two on-disk formats: Netpbm PGM (P2 ascii / P5 binary, maxval 255 or 65535,
// 16-bit samples big-endian) for interchange and previews, and the lossless
// "TVWF" float container for exact field round trips. The TVWF layout is a
// 16-byte header -- magic "TVWF", u32 width, u32 height, u32 reserved (zero),
// all little-endian -- followed by width*height float64 values, row-major,
// little-endian.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvwf/field.hpp"

namespace tvwf {

struct ImageBuffer {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;  // row-major; in [0,1] when read from PGM
};

// Centered axis-aligned square on an n x n pixel grid (h = 1), roughly a
// third of the side length; the side is widened by one pixel when needed to
// keep the figure centered exactly.
ScalarField gen_square(int n, double inside = 1.0, double outside = 0.0);

// Square-based pyramid u = max(0, 1 - 2 max(|x-1/2|, |y-1/2|)) sampled on
// the unit square with h = 1/(n-1); apex value 1, boundary 0.
ScalarField gen_pyramid(int n);

// Adds i.i.d. zero-mean Gaussian noise of the given variance, no clamping.
// Deterministic across platforms: the samples come from a hand-pinned
// Box-Muller transform over mt19937_64 draws, not from std::distributions.
ScalarField add_gaussian_noise(const ScalarField& u, double variance, std::uint64_t seed);

ScalarField to_field(const ImageBuffer& buf, double h = 1.0);
// rescale=false clamps values into [0,1]; rescale=true maps min..max onto
// [0,1] first, which is what previews of low-amplitude densities need.
ImageBuffer to_image(const ScalarField& u, bool rescale = false);

// Reads either format, dispatching on the leading magic bytes. TVWF input
// yields unclamped pixel values.
ImageBuffer read_image(const std::string& path);
// Writes PGM when the path ends in ".pgm" (binary, maxval 255), TVWF float
// otherwise.
void write_image(const ImageBuffer& buf, const std::string& path);

enum class PgmFlavor { ascii, binary };
ImageBuffer read_pgm(const std::string& path);
void write_pgm(const ImageBuffer& buf, const std::string& path,
               PgmFlavor flavor = PgmFlavor::binary, int maxval = 255);

// Lossless float container; the grid spacing is not stored and must be
// supplied by the caller on read.
ScalarField read_field(const std::string& path, double h = 1.0);
void write_field(const ScalarField& u, const std::string& path);

// 10 log10(range^2 / MSE) with range taken from ref; +inf for identical
// fields.
double psnr(const ScalarField& u, const ScalarField& ref);
double mass(const ScalarField& u, double h);
// Anisotropic discrete TV: h * sum(|d1| + |d2|) over the forward-difference
// gradient.
double discrete_tv(const ScalarField& u);

}  // namespace tvwf

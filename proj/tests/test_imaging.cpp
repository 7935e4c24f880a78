#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "tvwf/imaging.hpp"

using namespace tvwf;

namespace {

std::string temp_path(const char* stem) {
    static int counter = 0;  // stem goes last so extension dispatch sees it
    return std::string("/tmp/tvwf_imaging_") + std::to_string(::getpid()) + "_" +
           std::to_string(counter++) + "_" + stem;
}

std::vector<unsigned char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("tvwf container round trips bit for bit") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    ScalarField u(Grid(23, 17, 0.01));
    for (double& v : u.values) v = d(rng);
    u.values[0] = 4.9e-324;  // subnormal
    u.values[1] = 0.0;
    u.values[2] = -1.7976931348623157e308;

    const std::string path = temp_path("roundtrip.tvwf");
    write_field(u, path);
    ScalarField back = read_field(path, 0.01);
    REQUIRE(back.grid.nx == 23);
    REQUIRE(back.grid.ny == 17);
    CHECK(std::memcmp(back.values.data(), u.values.data(), u.values.size() * sizeof(double)) == 0);
    std::remove(path.c_str());
}

TEST_CASE("tvwf header layout: magic, little-endian sizes, zero reserved") {
    ScalarField u(Grid(3, 2), 1.0);
    const std::string path = temp_path("header.tvwf");
    write_field(u, path);
    auto bytes = slurp(path);
    REQUIRE(bytes.size() == 16 + 6 * 8);
    CHECK(std::memcmp(bytes.data(), "TVWF", 4) == 0);
    CHECK(bytes[4] == 3);  // width LE
    CHECK(bytes[5] == 0);
    CHECK(bytes[8] == 2);  // height LE
    for (int k = 12; k < 16; ++k) CHECK(bytes[static_cast<std::size_t>(k)] == 0);
    std::remove(path.c_str());
}

TEST_CASE("pgm round trips are exact at both depths and flavors") {
    std::mt19937_64 rng(11);
    ImageBuffer img;
    img.width = 9;
    img.height = 5;

    for (int maxval : {255, 65535}) {
        std::uniform_int_distribution<int> level(0, maxval);
        img.pixels.clear();
        for (int k = 0; k < img.width * img.height; ++k)
            img.pixels.push_back(static_cast<double>(level(rng)) / maxval);

        for (PgmFlavor flavor : {PgmFlavor::ascii, PgmFlavor::binary}) {
            const std::string path = temp_path("img.pgm");
            write_pgm(img, path, flavor, maxval);
            ImageBuffer back = read_pgm(path);
            REQUIRE(back.width == img.width);
            REQUIRE(back.height == img.height);
            for (std::size_t k = 0; k < img.pixels.size(); ++k) CHECK(back.pixels[k] == img.pixels[k]);
            std::remove(path.c_str());
        }
    }
}

TEST_CASE("ascii and binary flavors carry the same pixels") {
    ImageBuffer img;
    img.width = 4;
    img.height = 3;
    for (int k = 0; k < 12; ++k) img.pixels.push_back((k % 5) / 4.0);

    const std::string p2 = temp_path("p2.pgm");
    const std::string p5 = temp_path("p5.pgm");
    write_pgm(img, p2, PgmFlavor::ascii);
    write_pgm(img, p5, PgmFlavor::binary);
    ImageBuffer a = read_pgm(p2);
    ImageBuffer b = read_pgm(p5);
    for (std::size_t k = 0; k < a.pixels.size(); ++k) CHECK(a.pixels[k] == b.pixels[k]);
    std::remove(p2.c_str());
    std::remove(p5.c_str());
}

TEST_CASE("16-bit samples are written big-endian") {
    ImageBuffer img;
    img.width = 2;
    img.height = 1;
    img.pixels = {1.0, 258.0 / 65535.0};

    const std::string path = temp_path("be.pgm");
    write_pgm(img, path, PgmFlavor::binary, 65535);
    auto bytes = slurp(path);
    // last four bytes are the two samples: 0xFFFF then 0x0102
    REQUIRE(bytes.size() >= 4);
    CHECK(bytes[bytes.size() - 4] == 0xFF);
    CHECK(bytes[bytes.size() - 3] == 0xFF);
    CHECK(bytes[bytes.size() - 2] == 0x01);
    CHECK(bytes[bytes.size() - 1] == 0x02);
    std::remove(path.c_str());
}

TEST_CASE("read_image dispatches on magic, write_image on extension") {
    ScalarField u(Grid(4, 4), 0.25);
    const std::string as_tvwf = temp_path("dispatch.tvwf");
    const std::string as_pgm = temp_path("dispatch.pgm");
    write_image(to_image(u), as_tvwf);
    write_image(to_image(u), as_pgm);

    auto t = slurp(as_tvwf);
    auto p = slurp(as_pgm);
    CHECK(std::memcmp(t.data(), "TVWF", 4) == 0);
    CHECK(p[0] == 'P');
    CHECK(p[1] == '5');

    CHECK(read_image(as_tvwf).width == 4);
    CHECK(read_image(as_pgm).width == 4);
    std::remove(as_tvwf.c_str());
    std::remove(as_pgm.c_str());
}

TEST_CASE("parse errors carry the offending byte offset") {
    const std::string path = temp_path("bad.bin");

    SUBCASE("wrong magic") {
        spit(path, {'T', 'V', 'W', 'X', 0, 0, 0, 0});
        try {
            (void)read_field(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.byte_offset == 0);
        }
    }
    SUBCASE("truncated tvwf header") {
        spit(path, {'T', 'V', 'W', 'F', 3, 0});
        try {
            (void)read_field(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.byte_offset == 6);
        }
    }
    SUBCASE("truncated tvwf payload") {
        ScalarField u(Grid(3, 3), 1.0);
        write_field(u, path);
        auto bytes = slurp(path);
        bytes.resize(bytes.size() - 5);
        spit(path, bytes);
        CHECK_THROWS_AS((void)read_field(path), ParseError);
    }
    SUBCASE("pgm with bad maxval") {
        const char* text = "P2\n2 2\n70000\n0 0 0 0\n";
        spit(path, std::vector<unsigned char>(text, text + std::strlen(text)));
        CHECK_THROWS_AS((void)read_pgm(path), ParseError);
    }
    SUBCASE("pgm with truncated raster") {
        const char* text = "P2\n2 2\n255\n0 0 0\n";
        spit(path, std::vector<unsigned char>(text, text + std::strlen(text)));
        CHECK_THROWS_AS((void)read_pgm(path), ParseError);
    }
    SUBCASE("pgm with a pixel above maxval") {
        const char* text = "P2\n2 2\n255\n0 0 0 256\n";
        spit(path, std::vector<unsigned char>(text, text + std::strlen(text)));
        CHECK_THROWS_AS((void)read_pgm(path), ParseError);
    }
    std::remove(path.c_str());
}

TEST_CASE("missing file raises IoError") {
    CHECK_THROWS_AS((void)read_field("/nonexistent/nowhere.tvwf"), IoError);
}

TEST_CASE("to_image rescale maps the range onto [0,1], clamp mode clips") {
    ScalarField u(Grid(2, 2));
    u.values = {-1.0, 0.0, 1.0, 3.0};
    ImageBuffer r = to_image(u, true);
    CHECK(r.pixels[0] == 0.0);
    CHECK(r.pixels[3] == 1.0);
    CHECK(r.pixels[1] == doctest::Approx(0.25));

    ImageBuffer c = to_image(u, false);
    CHECK(c.pixels[0] == 0.0);  // clamped up
    CHECK(c.pixels[3] == 1.0);  // clamped down
    CHECK(c.pixels[2] == 1.0);
}

TEST_CASE("to_field keeps pixels and applies the grid spacing") {
    ImageBuffer img;
    img.width = 3;
    img.height = 2;
    img.pixels = {0, 0.5, 1, 0.25, 0.75, 0.125};
    ScalarField u = to_field(img, 0.2);
    CHECK(u.grid.h == 0.2);
    CHECK(u(1, 0) == 0.5);
    CHECK(u(2, 1) == 0.125);
}

TEST_CASE("square phantom: binary, centered, about a third wide") {
    for (int n : {16, 63, 64}) {
        ScalarField u = gen_square(n);
        CHECK(u.grid.h == 1.0);
        int inside = 0;
        for (double v : u.values) {
            CHECK((v == 0.0 || v == 1.0));
            inside += v == 1.0;
        }
        const int lo = n / 3, hi = n / 3 + 1;
        CHECK(inside >= lo * lo);
        CHECK(inside <= hi * hi);
        // centered: reflection symmetry both ways
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                CHECK(u(i, j) == u(n - 1 - i, j));
                CHECK(u(i, j) == u(i, n - 1 - j));
            }
    }
}

TEST_CASE("pyramid phantom: unit apex, zero boundary, unit-square sampling") {
    ScalarField u = gen_pyramid(65);
    CHECK(u.grid.h == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
    CHECK(u(32, 32) == 1.0);
    for (int i = 0; i < 65; ++i) {
        CHECK(u(i, 0) == 0.0);
        CHECK(u(i, 64) == 0.0);
        CHECK(u(0, i) == 0.0);
        CHECK(u(64, i) == 0.0);
    }
    // faces are planes: constant slope along the midline
    const double s1 = u(10, 32) - u(9, 32);
    const double s2 = u(20, 32) - u(19, 32);
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-12));
}

TEST_CASE("noise is seeded, deterministic, and has the advertised variance") {
    ScalarField u(Grid(256, 256), 0.5);
    ScalarField a = add_gaussian_noise(u, 0.001, 424242);
    ScalarField b = add_gaussian_noise(u, 0.001, 424242);
    ScalarField c = add_gaussian_noise(u, 0.001, 424243);

    double max_ab = 0.0, max_ac = 0.0, mean = 0.0, var = 0.0;
    const int n = a.size();
    for (int k = 0; k < n; ++k) {
        max_ab = std::max(max_ab, std::abs(a.values[static_cast<std::size_t>(k)] -
                                           b.values[static_cast<std::size_t>(k)]));
        max_ac = std::max(max_ac, std::abs(a.values[static_cast<std::size_t>(k)] -
                                           c.values[static_cast<std::size_t>(k)]));
        mean += a.values[static_cast<std::size_t>(k)] - 0.5;
    }
    mean /= n;
    for (int k = 0; k < n; ++k) {
        const double d = a.values[static_cast<std::size_t>(k)] - 0.5 - mean;
        var += d * d;
    }
    var /= n - 1;

    CHECK(max_ab == 0.0);
    CHECK(max_ac > 0.0);
    CHECK(std::abs(var - 0.001) <= 0.05 * 0.001);
    CHECK(std::abs(mean) <= 5.0 * std::sqrt(0.001 / n));  // five sigma of the sample mean
}

TEST_CASE("psnr, mass, and discrete tv on hand-checked inputs") {
    ScalarField a(Grid(2, 2));
    a.values = {0.0, 1.0, 0.0, 1.0};
    CHECK(std::isinf(psnr(a, a)));
    CHECK(psnr(a, a) > 0.0);

    ScalarField b = a;
    b.values[0] = 0.5;  // mse = 0.0625, range 1 -> 10 log10(16)
    CHECK(psnr(b, a) == doctest::Approx(10.0 * std::log10(16.0)).epsilon(1e-12));

    ScalarField m(Grid(3, 3, 0.5), 2.0);
    CHECK(mass(m, 0.5) == doctest::Approx(0.25 * 9 * 2.0).epsilon(1e-14));

    // forward differences: comp1 jumps of 1 at (0,0),(0,1); comp2 zero rows
    CHECK(discrete_tv(a) == doctest::Approx(2.0).epsilon(1e-14));
}

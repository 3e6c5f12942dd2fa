#include <catch2/catch_amalgamated.hpp>

#include "halfgrid/gspmodel.hpp"
#include "halfgrid/grid.hpp"

using namespace halfgrid;

TEST_CASE("make_grid produces the stated arithmetic progression") {
    const Grid1D g = make_grid(8, 1.0, -4.0);
    for (int a = 0; a < 8; ++a) REQUIRE(g.point(a) == Catch::Approx(-4.0 + a).margin(0.0));

    const Grid1D h = make_grid(2, 0.5, 0.0);
    REQUIRE(h.point(0) == 0.0);
    REQUIRE(h.point(1) == 0.5);
}

TEST_CASE("make_grid rejects bad parameters") {
    REQUIRE_THROWS_AS(make_grid(7, 1.0, 0.0), parameter_error);
    REQUIRE_THROWS_AS(make_grid(0, 1.0, 0.0), parameter_error);
    REQUIRE_THROWS_AS(make_grid(-4, 1.0, 0.0), parameter_error);
    REQUIRE_THROWS_AS(make_grid(8, 0.0, 0.0), parameter_error);
    REQUIRE_THROWS_AS(make_grid(8, -0.25, 0.0), parameter_error);
}

TEST_CASE("phase grid frequency lattice") {
    SECTION("n=8, dx=1") {
        const PhaseGrid pg = make_phase_grid(make_grid(8, 1.0, 0.0));
        REQUIRE(pg.dxi() == Catch::Approx(pi / 8).epsilon(1e-15));
        REQUIRE(pg.xi(0) == Catch::Approx(-pi / 2).epsilon(1e-15));
        REQUIRE(pg.xi(7) == Catch::Approx(3 * pi / 8).epsilon(1e-15));
        REQUIRE(pg.xi(4) == 0.0);
    }
    SECTION("n=4, dx=0.5") {
        const PhaseGrid pg = make_phase_grid(make_grid(4, 0.5, -1.0));
        REQUIRE(pg.dxi() == Catch::Approx(pi / 2).epsilon(1e-15));
        REQUIRE(pg.s_count() == 7);
        for (int s = 0; s + 1 < pg.s_count(); ++s)
            REQUIRE(pg.x(s + 1) - pg.x(s) == Catch::Approx(0.25).epsilon(1e-15));
    }
    SECTION("dxi * n * dx = pi and midpoint alignment, several grids") {
        for (int n : {2, 4, 6, 16, 64}) {
            const Grid1D g = make_grid(n, 0.3, -1.7);
            const PhaseGrid pg = make_phase_grid(g);
            REQUIRE(pg.dxi() * n * g.dx == Catch::Approx(pi).epsilon(1e-15));
            REQUIRE(pg.xi(n / 2) == 0.0);
            for (int a = 0; a < n; ++a) REQUIRE(pg.x(2 * a) == g.point(a));
        }
    }
}

TEST_CASE("signal and kernel validation") {
    const Grid1D g = make_grid(4, 1.0, 0.0);
    REQUIRE_THROWS_AS(make_signal(g, std::vector<cplx>(3)), parameter_error);
    std::vector<cplx> bad(4);
    bad[2] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    REQUIRE_THROWS_AS(make_signal(g, bad), parameter_error);

    MatrixXcd m = MatrixXcd::Zero(4, 4);
    REQUIRE_NOTHROW(make_kernel(g, m));
    REQUIRE_THROWS_AS(make_kernel(g, MatrixXcd::Zero(3, 3)), parameter_error);
}

TEST_CASE("kernel PSD validation accepts model kernels, rejects [[0,1],[1,0]]") {
    const Grid1D g = make_grid(8, 0.5, -2.0);
    REQUIRE(is_psd_kernel(white_noise_kernel(g, 1.0)));
    REQUIRE(is_psd_kernel(brownian_kernel(g)));
    const SpectralDensity mu = SpectralDensity::from_function(
        [](double xi) { return sqrt_2pi * std::exp(-0.5 * xi * xi); });
    REQUIRE(is_psd_kernel(stationary_kernel(g, mu)));

    const Grid1D g2 = make_grid(2, 1.0, 0.0);
    MatrixXcd swap(2, 2);
    swap << 0, 1, 1, 0;
    REQUIRE_FALSE(is_psd_kernel(Kernel{g2, swap}));
}

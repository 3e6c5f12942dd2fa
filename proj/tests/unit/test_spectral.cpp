#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "halfgrid/spectral.hpp"
#include "halfgrid/wigner.hpp"

using namespace halfgrid;

namespace {

std::vector<cplx> random_values(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(nd(gen), nd(gen));
    return v;
}

double rel_err(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double num = 0, den = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den == 0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace

TEST_CASE("dft of unit impulse at x = 0 is the flat (2 pi)^{-1/2}") {
    const Grid1D g = make_grid(8, 1.0, -4.0);
    std::vector<cplx> v(8, cplx(0.0));
    v[4] = 1.0;  // x = 0
    const FreqSignal F = dft(make_signal(g, v));
    for (int k = 0; k < 8; ++k) {
        REQUIRE(F.values[k].real() == Catch::Approx(inv_sqrt_2pi).margin(1e-14));
        REQUIRE(F.values[k].imag() == Catch::Approx(0.0).margin(1e-14));
    }
}

TEST_CASE("dft of the standard Gaussian matches the closed form e^{-xi^2/2}") {
    const Grid1D g = make_grid(64, 0.25, -8.0);
    const Signal f = sample_signal(g, [](double x) { return std::exp(-0.5 * x * x); });
    const FreqSignal F = dft(f);
    // F(0) = 1 within 1e-6 (closed-form transform as oracle)
    REQUIRE(std::abs(F.values[32] - cplx(1.0)) < 1e-6);
    for (int k = 0; k < 64; ++k) {
        const double xi = F.grid.point(k);
        REQUIRE(std::abs(F.values[k] - cplx(std::exp(-0.5 * xi * xi))) < 1e-6);
    }
}

TEST_CASE("dft of zero is zero; idft round trip; flat spectrum is an impulse") {
    const Grid1D g = make_grid(16, 0.5, -4.0);
    const Signal zero = make_signal(g, std::vector<cplx>(16, cplx(0.0)));
    for (const cplx& z : dft(zero).values) REQUIRE(std::abs(z) == 0.0);

    const Signal f = make_signal(g, random_values(16, 7));
    const Signal back = idft(dft(f));
    REQUIRE(rel_err(back.values, f.values) < 1e-12);

    // constant (2 pi)^{-1/2} -> impulse at x = 0
    const Grid1D g2 = make_grid(8, 1.0, -4.0);
    FreqSignal F{frequency_grid(g2), g2, std::vector<cplx>(8, cplx(inv_sqrt_2pi))};
    const Signal imp = idft(F);
    for (int a = 0; a < 8; ++a) {
        const double expected = (a == 4) ? 1.0 : 0.0;
        REQUIRE(std::abs(imp.values[a] - cplx(expected)) < 1e-12);
    }
}

TEST_CASE("dft direct and fft-with-chirp routes agree to 1e-12") {
    const Grid1D g = make_grid(64, 0.37, -11.3);
    const Signal f = make_signal(g, random_values(64, 21));
    const FreqSignal a = dft(f, Route::Direct);
    const FreqSignal b = dft(f, Route::Fft);
    REQUIRE(rel_err(a.values, b.values) < 1e-12);
    const Signal ia = idft(a, Route::Direct);
    const Signal ib = idft(a, Route::Fft);
    REQUIRE(rel_err(ia.values, ib.values) < 1e-12);
}

TEST_CASE("Parseval under the module quadratures") {
    const Grid1D g = make_grid(32, 0.25, -4.0);
    const Signal f = make_signal(g, random_values(32, 3));
    const FreqSignal F = dft(f);
    double ef = 0, eF = 0;
    for (const cplx& z : f.values) ef += std::norm(z);
    for (const cplx& z : F.values) eF += std::norm(z);
    ef *= g.dx;
    eF *= F.grid.dx;
    REQUIRE(eF == Catch::Approx(ef).epsilon(1e-12));
}

TEST_CASE("dft is linear") {
    const Grid1D g = make_grid(16, 0.5, -4.0);
    const Signal f = make_signal(g, random_values(16, 5));
    const Signal h = make_signal(g, random_values(16, 6));
    const cplx alpha(0.7, -1.3), beta(-0.2, 0.45);
    std::vector<cplx> mix(16);
    for (int i = 0; i < 16; ++i) mix[i] = alpha * f.values[i] + beta * h.values[i];
    const FreqSignal lhs = dft(make_signal(g, mix));
    const FreqSignal Ff = dft(f), Fh = dft(h);
    std::vector<cplx> rhs(16);
    for (int i = 0; i < 16; ++i) rhs[i] = alpha * Ff.values[i] + beta * Fh.values[i];
    REQUIRE(rel_err(lhs.values, rhs) < 1e-12);
}

TEST_CASE("row_transform basics") {
    const PhaseGrid pg = make_phase_grid(make_grid(8, 1.0, -4.0));

    SECTION("single coefficient c_0 = 1 gives the all-ones row") {
        const int js[] = {0};
        const cplx cs[] = {cplx(1.0)};
        const auto out = row_transform(js, cs, pg, Direction::Forward);
        for (const cplx& z : out) REQUIRE(std::abs(z - cplx(1.0)) < 1e-14);
    }

    SECTION("c_2 = 1 matches direct pointwise evaluation") {
        const int js[] = {2};
        const cplx cs[] = {cplx(1.0)};
        const auto out = row_transform(js, cs, pg, Direction::Forward);
        for (int k = 0; k < 8; ++k) {
            const cplx expected = std::exp(cplx(0.0, -2.0 * 1.0 * pg.xi(k)));
            REQUIRE(std::abs(out[k] - expected) < 1e-14);
        }
    }

    SECTION("forward then inverse is the identity on an even parity class") {
        std::mt19937 gen(11);
        std::normal_distribution<double> nd;
        std::vector<int> js;
        for (int j = -6; j <= 6; j += 2) js.push_back(j);
        std::vector<cplx> cs(js.size());
        for (auto& z : cs) z = cplx(nd(gen), nd(gen));
        const auto out = row_transform(js, cs, pg, Direction::Forward);
        const auto back = row_transform(js, out, pg, Direction::Inverse);
        REQUIRE(rel_err(back, cs) < 1e-12);
    }

    SECTION("odd parity class round trip, both routes agree") {
        std::mt19937 gen(13);
        std::normal_distribution<double> nd;
        std::vector<int> js;
        for (int j = -7; j <= 7; j += 2) js.push_back(j);
        std::vector<cplx> cs(js.size());
        for (auto& z : cs) z = cplx(nd(gen), nd(gen));
        const auto direct = row_transform_forward(js, cs, 8, Route::Direct);
        const auto fft = row_transform_forward(js, cs, 8, Route::Fft);
        REQUIRE(rel_err(fft, direct) < 1e-12);
        const auto back = row_transform_inverse(direct, js, 8);
        REQUIRE(rel_err(back, cs) < 1e-12);
    }

    SECTION("mixed parity offsets are rejected") {
        const int js[] = {0, 1};
        const cplx cs[] = {cplx(1.0), cplx(1.0)};
        REQUIRE_THROWS_AS(row_transform(js, cs, pg, Direction::Forward), parameter_error);
    }

    SECTION("odd lattice size (pair-transform case) round trips too") {
        std::mt19937 gen(17);
        std::normal_distribution<double> nd;
        const int m = 15;
        std::vector<int> js;
        for (int j = -8; j <= 8; j += 2) js.push_back(j);
        std::vector<cplx> cs(js.size());
        for (auto& z : cs) z = cplx(nd(gen), nd(gen));
        const auto out = row_transform_forward(js, cs, m);
        const auto back = row_transform_inverse(out, js, m);
        REQUIRE(rel_err(back, cs) < 1e-12);
    }
}

TEST_CASE("rotate_neg_J") {
    SECTION("Wigner of the standard Gaussian is rotation invariant") {
        const Grid1D g = make_grid(64, 0.25, -8.0);
        const Signal f = sample_signal(
            g, [](double x) { return std::pow(pi, -0.25) * std::exp(-0.5 * x * x); });
        const PhaseField W = wigner(f);
        const PhaseField R = rotate_neg_J(W);
        double num = 0, den = 0;
        for (int s = 0; s < W.values.rows(); ++s)
            for (int k = 0; k < W.values.cols(); ++k) {
                num += std::norm(R.values(s, k) - W.values(s, k));
                den += std::norm(W.values(s, k));
            }
        REQUIRE(std::sqrt(num / den) < 1e-3);
    }

    SECTION("zero field maps to zero; fourth power returns the field") {
        const PhaseGrid pg = make_phase_grid(make_grid(32, 0.35, -5.6));
        PhaseField Z = zero_phase_field(pg);
        const PhaseField RZ = rotate_neg_J(Z);
        REQUIRE(max_abs(RZ.values) == 0.0);

        // smooth decaying test field: rotating four times is the identity up
        // to interpolation error
        MatrixXcd vals(pg.s_count(), pg.xi_count());
        for (int s = 0; s < pg.s_count(); ++s)
            for (int k = 0; k < pg.xi_count(); ++k) {
                const double x = pg.x(s), xi = pg.xi(k);
                vals(s, k) = std::exp(-0.7 * x * x - 1.1 * xi * xi) * (1.0 + 0.3 * x);
            }
        PhaseField F{pg, vals};
        PhaseField R = F;
        for (int rep = 0; rep < 4; ++rep) R = rotate_neg_J(R);
        double num = 0, den = 0;
        for (int s = 0; s < pg.s_count(); ++s)
            for (int k = 0; k < pg.xi_count(); ++k) {
                num += std::norm(R.values(s, k) - F.values(s, k));
                den += std::norm(F.values(s, k));
            }
        REQUIRE(std::sqrt(num / den) < 4e-3);
    }
}

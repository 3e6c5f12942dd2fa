#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "halfgrid/weyl.hpp"
#include "halfgrid/wigner.hpp"

using namespace halfgrid;

namespace {

Signal random_signal(const Grid1D& g, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    std::vector<cplx> v(g.n);
    for (auto& z : v) z = cplx(nd(gen), nd(gen));
    return Signal{g, std::move(v)};
}

double field_rel_err(const PhaseField& a, const PhaseField& b) {
    double num = 0, den = 0;
    for (int s = 0; s < a.values.rows(); ++s)
        for (int k = 0; k < a.values.cols(); ++k) {
            num += std::norm(a.values(s, k) - b.values(s, k));
            den += std::norm(b.values(s, k));
        }
    return den == 0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace

TEST_CASE("Wigner of a unit impulse: one constant row") {
    const Grid1D g = make_grid(8, 1.0, -4.0);
    const int site = 3;
    std::vector<cplx> v(8, cplx(0.0));
    v[site] = 1.0;
    const PhaseField W = wigner(make_signal(g, v));
    const double expected = 2.0 * inv_sqrt_2pi;  // 0.7978845608...
    REQUIRE(expected == Catch::Approx(0.7978845608).epsilon(1e-9));
    for (int s = 0; s < W.values.rows(); ++s)
        for (int k = 0; k < W.values.cols(); ++k) {
            const double want = (s == 2 * site) ? expected : 0.0;
            REQUIRE(std::abs(W.values(s, k) - cplx(want)) < 1e-14);
        }
}

TEST_CASE("Wigner of the normalized Gaussian peaks at sqrt(2/pi)") {
    const Grid1D g = make_grid(64, 0.25, -8.0);
    const Signal f = sample_signal(
        g, [](double x) { return std::pow(pi, -0.25) * std::exp(-0.5 * x * x); });
    const PhaseField W = wigner(f);
    // x = 0 is s = 64 (s = 2a with a = 32), xi = 0 is k = 32
    const double peak = W.values(64, 32).real();
    REQUIRE(peak == Catch::Approx(std::sqrt(2.0 / pi)).margin(1e-5));

    // Hudson direction: Gaussian Wigner is non-negative on the whole lattice
    const double mx = max_abs(W.values);
    for (int s = 0; s < W.values.rows(); ++s)
        for (int k = 0; k < W.values.cols(); ++k)
            REQUIRE(W.values(s, k).real() >= -1e-9 * mx);
}

TEST_CASE("Wigner of the first Hermite function goes genuinely negative") {
    const Grid1D g = make_grid(64, 0.25, -8.0);
    // normalized x e^{-x^2/2}: continuum L2 norm (sqrt(pi)/2)^{1/2}
    const double nrm = std::sqrt(std::sqrt(pi) / 2.0);
    const Signal f = sample_signal(g, [&](double x) { return x * std::exp(-0.5 * x * x) / nrm; });
    const PhaseField W = wigner(f);
    double mn = 0.0;
    const double mx = max_abs(W.values);
    for (int s = 0; s < W.values.rows(); ++s)
        for (int k = 0; k < W.values.cols(); ++k) mn = std::min(mn, W.values(s, k).real());
    REQUIRE(mn < -0.01 * mx);
}

TEST_CASE("cross_wigner of zero is zero and grid mismatch throws") {
    const Grid1D g = make_grid(8, 1.0, -4.0);
    const Signal z = make_signal(g, std::vector<cplx>(8, cplx(0.0)));
    REQUIRE(max_abs(cross_wigner(z, z).values) == 0.0);

    const Signal other = random_signal(make_grid(8, 0.5, 0.0), 3);
    REQUIRE_THROWS_AS(cross_wigner(z, other), parameter_error);
}

TEST_CASE("cross_wigner is sesquilinear and Hermitian in its arguments") {
    const Grid1D grid = make_grid(16, 0.5, -4.0);
    const Signal f = random_signal(grid, 5), g = random_signal(grid, 6);
    const cplx alpha(0.8, -0.4), beta(-1.1, 0.3);

    Signal ag = g, bf = f;
    for (auto& z : ag.values) z *= alpha;
    for (auto& z : bf.values) z *= beta;
    PhaseField lhs = cross_wigner(ag, bf);
    PhaseField rhs = cross_wigner(g, f);
    for (int s = 0; s < rhs.values.rows(); ++s)
        for (int k = 0; k < rhs.values.cols(); ++k)
            rhs.values(s, k) *= alpha * std::conj(beta);
    REQUIRE(field_rel_err(lhs, rhs) < 1e-12);

    const PhaseField wgf = cross_wigner(g, f), wfg = cross_wigner(f, g);
    double worst = 0;
    for (int s = 0; s < wgf.values.rows(); ++s)
        for (int k = 0; k < wgf.values.cols(); ++k)
            worst = std::max(worst,
                             std::abs(wgf.values(s, k) - std::conj(wfg.values(s, k))));
    REQUIRE(worst < 1e-12 * std::max(1.0, max_abs(wgf.values)));
}

TEST_CASE("time marginal identity is exact for all test signals") {
    const Grid1D g = make_grid(32, 0.25, -4.0);
    for (unsigned seed : {1u, 2u, 3u}) {
        const Signal f = random_signal(g, seed);
        const auto marg = time_marginal(wigner(f));
        for (int a = 0; a < g.n; ++a) {
            const double want = sqrt_2pi * std::norm(f.values[a]);
            REQUIRE(marg[a] == Catch::Approx(want).margin(1e-12 * sqrt_2pi * 10));
        }
    }
    SECTION("Gaussian and impulse cases") {
        const Signal f = sample_signal(g, [](double x) { return std::exp(-x * x); });
        const auto marg = time_marginal(wigner(f));
        for (int a = 0; a < g.n; ++a)
            REQUIRE(marg[a] == Catch::Approx(sqrt_2pi * std::norm(f.values[a])).margin(1e-12));

        std::vector<cplx> v(g.n, cplx(0.0));
        v[7] = 2.0;
        const auto mi = time_marginal(wigner(make_signal(g, v)));
        for (int a = 0; a < g.n; ++a)
            REQUIRE(mi[a] == Catch::Approx(a == 7 ? 4.0 * sqrt_2pi : 0.0).margin(1e-12));
    }
    SECTION("zero signal") {
        const Signal z = make_signal(g, std::vector<cplx>(g.n, cplx(0.0)));
        for (double m : time_marginal(wigner(z))) REQUIRE(m == 0.0);
    }
}

TEST_CASE("wigner_frame reproduces the Wigner quadratic form") {
    const Grid1D grid = make_grid(16, 0.5, -4.0);
    const PhaseGrid pg = make_phase_grid(grid);
    const Signal f = random_signal(grid, 9);
    const PhaseField W = wigner(f);

    for (auto [s, k] : {std::pair{0, 0}, {5, 3}, {16, 8}, {30, 15}, {13, 0}}) {
        const WignerFrame frame = wigner_frame(pg, s, k);
        cplx acc(0.0);
        for (int a = 0; a < grid.n; ++a)
            for (int b = 0; b < grid.n; ++b)
                acc += frame.A(a, b) * f.values[a] * std::conj(f.values[b]);
        REQUIRE(std::abs(acc - W.values(s, k)) < 1e-12 * std::max(1.0, max_abs(W.values)));
    }

    SECTION("s = 0 frame has the single admissible pair") {
        const WignerFrame frame = wigner_frame(pg, 0, 4);
        REQUIRE(frame.A(0, 0) == cplx(2.0 * grid.dx * inv_sqrt_2pi));
        REQUIRE(frame.A.cwiseAbs().sum() ==
                Catch::Approx(2.0 * grid.dx * inv_sqrt_2pi).epsilon(1e-14));
    }
    SECTION("odd s forces zero diagonal") {
        const WignerFrame frame = wigner_frame(pg, 7, 2);
        for (int a = 0; a < grid.n; ++a) REQUIRE(frame.A(a, a) == cplx(0.0));
    }
    SECTION("out-of-range point rejected") {
        REQUIRE_THROWS_AS(wigner_frame(pg, 31, 0), parameter_error);
        REQUIRE_THROWS_AS(wigner_frame(pg, 0, 16), parameter_error);
    }
}

TEST_CASE("frame covariance pairing: weak identity holds to machine precision") {
    const Grid1D grid = make_grid(16, 0.5, -4.0);
    const PhaseGrid pg = make_phase_grid(grid);
    std::mt19937 gen(33);
    std::normal_distribution<double> nd;

    for (int rep = 0; rep < 5; ++rep) {
        MatrixXcd sig(pg.s_count(), pg.xi_count());
        for (int s = 0; s < sig.rows(); ++s)
            for (int k = 0; k < sig.cols(); ++k) sig(s, k) = cplx(nd(gen), nd(gen));
        const PhaseField sigma{pg, sig};
        const Signal f = random_signal(grid, 100 + rep), g2 = random_signal(grid, 200 + rep);

        const Kernel K = symbol_to_kernel(sigma);
        // lhs: (2 pi)^{-1/2} <sigma, W(g,f)> ; rhs: dx^2 sum K[a,b] f[b] conj(g[a])
        const cplx lhs = inv_sqrt_2pi * phase_space_pairing(sigma, cross_wigner(g2, f));
        cplx rhs(0.0);
        for (int a = 0; a < grid.n; ++a)
            for (int b = 0; b < grid.n; ++b)
                rhs += K.values(a, b) * f.values[b] * std::conj(g2.values[a]);
        rhs *= grid.dx * grid.dx;
        REQUIRE(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("Fourier rotation surrogate for Wigner fields on n = 64") {
    const Grid1D g = make_grid(64, 0.25, -8.0);
    for (int which = 0; which < 3; ++which) {
        const Signal f = sample_signal(g, [&](double x) {
            switch (which) {
                case 0: return std::exp(-0.5 * x * x);
                case 1: return x * std::exp(-0.6 * x * x);
                default: return std::exp(-0.5 * (x - 0.5) * (x - 0.5)) * std::cos(x);
            }
        });
        const PhaseField Wf = wigner(f);
        const PhaseField rot = rotate_neg_J(Wf);

        // Wigner of the dft-resampled signal, interpolated back onto f's lattice
        const FreqSignal F = dft(f);
        const Signal fhat{F.grid, F.values};
        const PhaseField What = wigner(fhat);
        MatrixXcd resampled(Wf.values.rows(), Wf.values.cols());
        for (int s = 0; s < resampled.rows(); ++s)
            for (int k = 0; k < resampled.cols(); ++k)
                resampled(s, k) = bilinear_value(What, Wf.pgrid.x(s), Wf.pgrid.xi(k));

        double num = 0, den = 0;
        for (int s = 0; s < resampled.rows(); ++s)
            for (int k = 0; k < resampled.cols(); ++k) {
                num += std::norm(resampled(s, k) - rot.values(s, k));
                den += std::norm(Wf.values(s, k));
            }
        REQUIRE(std::sqrt(num / den) < 5e-2);
    }
}

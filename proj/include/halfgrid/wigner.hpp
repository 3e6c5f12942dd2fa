#pragma once

#include "halfgrid/parallel.hpp"
#include "halfgrid/spectral.hpp"

namespace halfgrid {

/**
 * Discrete cross-Wigner transform on the half-grid phase lattice:
 *
 *   W[s,k] = (2 dx / sqrt(2 pi)) * sum_{j = s mod 2}
 *            g[(s+j)/2] conj(f[(s-j)/2]) exp(-i j dx xi_k),
 *
 * with indices outside 0..n-1 contributing zero. The weight 2*dx is the
 * y-step inside one anti-diagonal; the frequency band is half the DFT band.
 */
inline PhaseField cross_wigner(const Signal& g, const Signal& f, Route route = Route::Auto) {
    if (!(g.grid == f.grid)) throw parameter_error("cross_wigner: signals on different grids");
    const PhaseGrid pg = make_phase_grid(g.grid);
    const int n = g.grid.n;
    const double w = 2.0 * g.grid.dx * inv_sqrt_2pi;
    const detail::PhaseTable tab(n);
    const bool use_fft = (route == Route::Fft) ||
                         (route == Route::Auto && detail::is_pow2(n) && n > 32);
    if (route == Route::Fft && !detail::is_pow2(n))
        throw parameter_error("cross_wigner: fft route requires power-of-two n");

    MatrixXcd out(pg.s_count(), pg.xi_count());
    std::vector<cplx> coeffs, row(n);
    for (int s = 0; s < pg.s_count(); ++s) {
        const std::vector<int> js = antidiag_offsets(s, n);
        coeffs.resize(js.size());
        for (size_t i = 0; i < js.size(); ++i) {
            const int a = (s + js[i]) / 2, b = (s - js[i]) / 2;
            coeffs[i] = w * g.values[a] * std::conj(f.values[b]);
        }
        if (use_fft)
            detail::row_fwd_fft(js.data(), coeffs.data(), js.size(), n, s % 2, tab, row.data());
        else
            detail::row_fwd_direct(js.data(), coeffs.data(), js.size(), n, tab, row.data());
        for (int k = 0; k < n; ++k) out(s, k) = row[k];
    }
    return PhaseField{pg, std::move(out)};
}

/// Wigner distribution W(f) = W(f,f); rows are real by Hermitian symmetry,
/// roundoff imaginary parts are zeroed on output.
inline PhaseField wigner(const Signal& f, Route route = Route::Auto) {
    PhaseField W = cross_wigner(f, f, route);
    const double scale = max_abs(W.values);
    for (int s = 0; s < W.values.rows(); ++s)
        for (int k = 0; k < W.values.cols(); ++k) {
            if (std::abs(W.values(s, k).imag()) > 1e-10 * std::max(scale, 1e-300))
                throw contract_error("wigner: non-real value beyond roundoff");
            W.values(s, k) = cplx(W.values(s, k).real(), 0.0);
        }
    return W;
}

/**
 * Quadratic-form frame of one phase point: the n x n matrix A with
 * W(u)[s,k] = sum_{a,b} A[a,b] u[a] conj(u[b]), supported on a + b = s.
 */
struct WignerFrame {
    PhaseGrid pgrid;
    int s = 0, k = 0;
    MatrixXcd A;
};

inline WignerFrame wigner_frame(const PhaseGrid& pg, int s, int k) {
    const int n = pg.base.n;
    if (s < 0 || s >= pg.s_count() || k < 0 || k >= pg.xi_count())
        throw parameter_error("wigner_frame: phase point out of range");
    const detail::PhaseTable tab(n);
    const int c = axis_center(n);
    const double w = 2.0 * pg.base.dx * inv_sqrt_2pi;
    MatrixXcd A = MatrixXcd::Zero(n, n);
    for (int j : antidiag_offsets(s, n)) {
        const int a = (s + j) / 2, b = (s - j) / 2;
        A(a, b) = w * tab(static_cast<long long>(j) * (k - c));
    }
    return WignerFrame{pg, s, k, std::move(A)};
}

/// Even-row time marginal: dxi * sum_k F[2a, k]; equals sqrt(2 pi) |f[a]|^2
/// exactly for Wigner fields by parity orthogonality of the frequency lattice.
inline std::vector<double> time_marginal(const PhaseField& F) {
    const int n = F.pgrid.base.n;
    std::vector<double> out(n, 0.0);
    for (int a = 0; a < n; ++a) {
        cplx acc(0.0);
        for (int k = 0; k < n; ++k) acc += F.values(2 * a, k);
        out[a] = (F.pgrid.dxi() * acc).real();
    }
    return out;
}

}  // namespace halfgrid

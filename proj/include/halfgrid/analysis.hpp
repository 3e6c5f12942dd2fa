#pragma once

#include <limits>
#include <memory>

#include "halfgrid/gspmodel.hpp"
#include "halfgrid/weyl.hpp"

namespace halfgrid {

/// Continuous symbol map (x, xi) -> sigma_u(x, xi), either a closed form or
/// bilinear interpolation of a discrete field (real part, zero extension).
struct SymbolEvaluator {
    enum class Provenance { ClosedForm, Interpolated };

    std::function<double(double, double)> eval;
    Provenance provenance = Provenance::ClosedForm;

    double operator()(double x, double xi) const { return eval(x, xi); }
};

inline SymbolEvaluator closed_form_evaluator(std::function<double(double, double)> fn) {
    return SymbolEvaluator{std::move(fn), SymbolEvaluator::Provenance::ClosedForm};
}

inline SymbolEvaluator interpolated_evaluator(PhaseField field) {
    auto shared = std::make_shared<PhaseField>(std::move(field));
    return SymbolEvaluator{
        [shared](double x, double xi) { return bilinear_value(*shared, x, xi).real(); },
        SymbolEvaluator::Provenance::Interpolated};
}

/// sigma_b(x, xi) = 2 x^2 sinc^2(x xi) h(x), the closed-form Weyl symbol of
/// the Brownian covariance operator; series-stabilized sinc near 0.
inline double sinc_stable(double t) {
    if (std::abs(t) < 1e-4) {
        const double t2 = t * t;
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    }
    return std::sin(t) / t;
}

inline double brownian_symbol(double x, double xi) {
    if (x <= 0.0) return 0.0;
    const double s = sinc_stable(x * xi);
    return 2.0 * x * x * s * s;
}

/// The product form of the Brownian sigma_W; vanishes for x1 <= |xi2|/2.
inline double brownian_sigma_w(double x1, double x2, double xi1, double xi2) {
    return brownian_symbol(x1 - 0.5 * xi2, x2 + 0.5 * xi1) *
           brownian_symbol(x1 + 0.5 * xi2, x2 - 0.5 * xi1);
}

inline SymbolEvaluator evaluator_of(const ProcessModel& model) {
    switch (model.kind) {
        case ProcessModel::Kind::WhiteNoise: {
            const double p = model.power;
            return closed_form_evaluator([p](double, double) { return p; });
        }
        case ProcessModel::Kind::Brownian:
            return closed_form_evaluator([](double x, double xi) { return brownian_symbol(x, xi); });
        case ProcessModel::Kind::Stationary: {
            auto mu = model.density->density;
            return closed_form_evaluator([mu](double, double xi) { return mu(xi); });
        }
        case ProcessModel::Kind::Custom:
            break;
    }
    return interpolated_evaluator(kernel_to_symbol(model.kernel));
}

/// E W(u) = (2 pi)^{-1/2} sigma_u, evaluated through the exact discrete
/// kernel-to-symbol map; exact for the sampled process, all phase points.
inline PhaseField expected_wigner(const Kernel& K) {
    if (!is_psd_kernel(K)) throw contract_error("expected_wigner: kernel is not PSD");
    PhaseField sigma = kernel_to_symbol(K);
    sigma.values *= inv_sqrt_2pi;
    return sigma;
}

/**
 * Exact covariance of the zero-mean Wigner field of a circularly symmetric
 * Gaussian process with covariance K:
 *
 *   Cov(W0[p], W0[q]) = sum_{a,b,a',b'} A_p[a,b] K[a,a'] conj(A_q[a',b']) conj(K[b,b'])
 *
 * (the only surviving Wick pairing; the mean-product pairing cancels and the
 * pseudo-covariance pairing vanishes by symmetry). Assembled anti-diagonal
 * block by anti-diagonal block in O(P^2 n) using the frame support a+b = s.
 */
inline CovTensor4 exact_wigner_covariance(const Kernel& K) {
    if (!is_psd_kernel(K)) throw contract_error("exact_wigner_covariance: kernel is not PSD");
    const PhaseGrid pg = make_phase_grid(K.grid);
    const int n = K.grid.n;
    const int S = pg.s_count();
    const int c = axis_center(n);
    const double w = 2.0 * K.grid.dx * inv_sqrt_2pi;
    const detail::PhaseTable tab(n);

    CovTensor4 T = make_cov_tensor4(pg);
    parallel_for(0, S, [&](int s) {
        const std::vector<int> js = antidiag_offsets(s, n);
        MatrixXcd Es(js.size(), n);
        for (size_t i = 0; i < js.size(); ++i)
            for (int k = 0; k < n; ++k)
                Es(i, k) = tab(static_cast<long long>(js[i]) * (k - c));
        for (int sp = s; sp < S; ++sp) {
            const std::vector<int> jps = antidiag_offsets(sp, n);
            MatrixXcd Ep(jps.size(), n);
            for (size_t i = 0; i < jps.size(); ++i)
                for (int k = 0; k < n; ++k)
                    Ep(i, k) = tab(static_cast<long long>(jps[i]) * (k - c));
            MatrixXcd M1(js.size(), jps.size());
            for (size_t i = 0; i < js.size(); ++i) {
                const int a = (s + js[i]) / 2, b = (s - js[i]) / 2;
                for (size_t ip = 0; ip < jps.size(); ++ip) {
                    const int ap = (sp + jps[ip]) / 2, bp = (sp - jps[ip]) / 2;
                    M1(i, ip) = K.values(a, ap) * std::conj(K.values(b, bp));
                }
            }
            const MatrixXcd block =
                (w * w) * (Es.transpose() * M1 * Ep.conjugate());
            for (int k = 0; k < n; ++k)
                for (int kp = 0; kp < n; ++kp) {
                    T.t.at(s, k, sp, kp) = block(k, kp);
                    if (sp != s) T.t.at(sp, kp, s, k) = std::conj(block(k, kp));
                }
        }
    });
    return T;
}

/**
 * sigma_W(x1,x2,xi1,xi2) = sigma_u(x1 - xi2/2, x2 + xi1/2) *
 *                          sigma_u(x1 + xi2/2, x2 - xi1/2)
 * evaluated pointwise on the Symbol4 lattice.
 */
inline Symbol4 product_formula_symbol(const SymbolEvaluator& sigma, const PhaseGrid& pg) {
    Symbol4 out = make_symbol4(pg);
    const auto& sh = out.t.shape;
    parallel_for(0, sh[0], [&](int i) {
        const double x1 = out.x1(i);
        for (int j = 0; j < sh[1]; ++j) {
            const double x2 = out.x2(j);
            for (int t = 0; t < sh[2]; ++t) {
                const double xi1 = out.xi1(t);
                for (int u = 0; u < sh[3]; ++u) {
                    const double xi2 = out.xi2(u);
                    out.t.at(i, j, t, u) = sigma(x1 - 0.5 * xi2, x2 + 0.5 * xi1) *
                                           sigma(x1 + 0.5 * xi2, x2 - 0.5 * xi1);
                }
            }
        }
    });
    return out;
}

/// b(x1,x2,xi1,xi2) = a(x1 - xi2/2, x2 + xi1/2) a(x1 + xi2/2, x2 - xi1/2);
/// shares the evaluation core with the theorem's product formula.
inline Symbol4 build_b_symbol(const SymbolEvaluator& a, const PhaseGrid& pg) {
    return product_formula_symbol(a, pg);
}

/// sigma_W of a stationary process: mu(x2 + xi1/2) mu(x2 - xi1/2),
/// independent of x1 and xi2.
inline std::vector<double> stationary_sigma_w(const SpectralDensity& mu,
                                              std::span<const std::array<double, 4>> points) {
    std::vector<double> out(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        out[i] = mu.density(p[1] + 0.5 * p[2]) * mu.density(p[1] - 0.5 * p[2]);
    }
    return out;
}

/// sigma_W of a frequency-stationary process: muhat(-x1 + xi2/2) muhat(-x1 - xi2/2),
/// independent of x2 and xi1.
inline std::vector<double> freq_stationary_sigma_w(
    const SpectralDensity& muhat, std::span<const std::array<double, 4>> points) {
    std::vector<double> out(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        out[i] = muhat.density(-p[0] + 0.5 * p[3]) * muhat.density(-p[0] - 0.5 * p[3]);
    }
    return out;
}

/// Wigner spectrum of the shift model: discrete convolution of the Gaussian
/// shift density with W(f), (dx/2)*dxi quadrature, zero extension.
inline PhaseField shift_spectrum(const ShiftModel& model) {
    const PhaseField W = wigner(model.f);
    const PhaseGrid& pg = W.pgrid;
    const double quad = 0.5 * pg.base.dx * pg.dxi();
    const double norm = 1.0 / (2.0 * pi * std::sqrt(model.a * model.b));
    const double ia = 0.5 / model.a, ib = 0.5 / model.b;

    MatrixXcd out(pg.s_count(), pg.xi_count());
    parallel_for(0, pg.s_count(), [&](int s) {
        for (int k = 0; k < pg.xi_count(); ++k) {
            double acc = 0.0;
            for (int sp = 0; sp < pg.s_count(); ++sp) {
                const double dxp = pg.x(s) - pg.x(sp);
                const double ey = std::exp(-ia * dxp * dxp);
                if (ey == 0.0) continue;
                for (int kp = 0; kp < pg.xi_count(); ++kp) {
                    const double dkp = pg.xi(k) - pg.xi(kp);
                    acc += ey * std::exp(-ib * dkp * dkp) * W.values(sp, kp).real();
                }
            }
            out(s, k) = quad * norm * acc;
        }
    });
    return PhaseField{pg, std::move(out)};
}

// ---------------------------------------------------------------------------
// Theorem check
// ---------------------------------------------------------------------------

/// Interior index window [len/4, 3len/4) used for symbol comparisons; the
/// zero-extension truncation corrupts boundary anti-diagonals.
struct AxisWindow {
    int lo = 0, hi = 0;
};

inline AxisWindow interior_window(int len) { return AxisWindow{len / 4, (3 * len) / 4}; }

struct TheoremReport {
    double rel_error_interior = 0.0;      // ||exact - formula||_2 / ||formula||_2 on interior
    std::array<double, 4> axis_variation{};  // max range of exact along each axis / max|exact|
    std::string boundary_mask;
};

/// Relative interior L2 distance between two Symbol4 tensors of equal shape.
inline double symbol4_interior_rel_error(const Symbol4& exact, const Symbol4& formula) {
    const auto& sh = exact.t.shape;
    if (sh != formula.t.shape) throw parameter_error("symbol4 comparison: shape mismatch");
    double num = 0.0, den = 0.0;
    std::array<AxisWindow, 4> win{interior_window(sh[0]), interior_window(sh[1]),
                                  interior_window(sh[2]), interior_window(sh[3])};
    for (int i = win[0].lo; i < win[0].hi; ++i)
        for (int j = win[1].lo; j < win[1].hi; ++j)
            for (int t = win[2].lo; t < win[2].hi; ++t)
                for (int u = win[3].lo; u < win[3].hi; ++u) {
                    const cplx d = exact.t.at(i, j, t, u) - formula.t.at(i, j, t, u);
                    num += std::norm(d);
                    den += std::norm(formula.t.at(i, j, t, u));
                }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

/// Largest interior variation (max - min of the real part) along each axis,
/// relative to the interior maximum modulus.
inline std::array<double, 4> symbol4_axis_variation(const Symbol4& S) {
    const auto& sh = S.t.shape;
    std::array<AxisWindow, 4> win{interior_window(sh[0]), interior_window(sh[1]),
                                  interior_window(sh[2]), interior_window(sh[3])};
    double scale = 0.0;
    for (int i = win[0].lo; i < win[0].hi; ++i)
        for (int j = win[1].lo; j < win[1].hi; ++j)
            for (int t = win[2].lo; t < win[2].hi; ++t)
                for (int u = win[3].lo; u < win[3].hi; ++u)
                    scale = std::max(scale, std::abs(S.t.at(i, j, t, u)));
    std::array<double, 4> var{0.0, 0.0, 0.0, 0.0};
    if (scale == 0.0) return var;

    auto sweep = [&](int axis) {
        std::array<int, 4> idx;
        const std::array<int, 3> others = [axis] {
            std::array<int, 3> o{};
            for (int d = 0, w = 0; d < 4; ++d)
                if (d != axis) o[w++] = d;
            return o;
        }();
        double worst = 0.0;
        for (int u0 = win[others[0]].lo; u0 < win[others[0]].hi; ++u0)
            for (int u1 = win[others[1]].lo; u1 < win[others[1]].hi; ++u1)
                for (int u2 = win[others[2]].lo; u2 < win[others[2]].hi; ++u2) {
                    idx[others[0]] = u0;
                    idx[others[1]] = u1;
                    idx[others[2]] = u2;
                    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                    for (int v = win[axis].lo; v < win[axis].hi; ++v) {
                        idx[axis] = v;
                        const double r = S.t.at(idx[0], idx[1], idx[2], idx[3]).real();
                        lo = std::min(lo, r);
                        hi = std::max(hi, r);
                    }
                    worst = std::max(worst, hi - lo);
                }
        var[axis] = worst / scale;
    };
    for (int axis = 0; axis < 4; ++axis) sweep(axis);
    return var;
}

/**
 * Verifies the main product formula for one model: compares the exact
 * Wick-propagated symbol kernel4_to_symbol4(exact_wigner_covariance(K))
 * against product_formula_symbol(evaluator) over the interior window.
 */
inline TheoremReport theorem_check(const ProcessModel& model,
                                   std::optional<SymbolEvaluator> evaluator = {}) {
    const PhaseGrid pg = make_phase_grid(model.grid);
    const CovTensor4 T = exact_wigner_covariance(model.kernel);
    const Symbol4 exact = kernel4_to_symbol4(T);
    const SymbolEvaluator ev = evaluator ? *evaluator : evaluator_of(model);
    const Symbol4 formula = product_formula_symbol(ev, pg);

    TheoremReport rep;
    rep.rel_error_interior = symbol4_interior_rel_error(exact, formula);
    rep.axis_variation = symbol4_axis_variation(exact);
    rep.boundary_mask = "interior window [len/4, 3*len/4) on each of the four axes";
    return rep;
}

/// Covariance kernel of the Fourier-transformed process on the full-band
/// frequency grid: Khat = D K D^H with D the dft matrix (dx-quadrature).
inline Kernel dft_conjugated_kernel(const Kernel& K) {
    const Grid1D fg = frequency_grid(K.grid);
    const int n = K.grid.n;
    MatrixXcd D(n, n);
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            D(k, a) = K.grid.dx * inv_sqrt_2pi *
                      std::polar(1.0, -K.grid.point(a) * fg.point(k));
    MatrixXcd Khat = D * K.values * D.adjoint();
    return Kernel{fg, std::move(Khat)};
}

}  // namespace halfgrid

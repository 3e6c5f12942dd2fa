#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace halfgrid {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt_2pi = 2.5066282746310005024;
inline constexpr double inv_sqrt_2pi = 0.3989422804014326779;

/// Invalid arguments to an operation (CLI maps these to usage errors).
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A precondition on the mathematical state was violated (non-Hermitian
/// input where Hermitian is required, non-PSD covariance, ...).
struct contract_error : std::logic_error {
    using std::logic_error::logic_error;
};

/// A process model could not be realized (e.g. covariance fails the PSD
/// tolerance); carries the diagnostic text of the failed factorization.
struct model_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed external input (CSV / JSON files).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * Uniform sampling lattice on the line: x_a = x0 + a*dx, a = 0..n-1.
 *
 * n is restricted to even values so the centered frequency lattice of the
 * associated PhaseGrid contains 0 exactly.
 */
struct Grid1D {
    int n = 0;
    double dx = 0.0;
    double x0 = 0.0;

    double point(int a) const { return x0 + a * dx; }
    double extent() const { return n * dx; }

    bool operator==(const Grid1D&) const = default;
};

inline Grid1D make_grid(int n, double dx, double x0) {
    if (n < 2 || n % 2 != 0)
        throw parameter_error("make_grid: n must be even and >= 2, got " + std::to_string(n));
    if (!(dx > 0.0) || !std::isfinite(dx))
        throw parameter_error("make_grid: dx must be positive and finite");
    if (!std::isfinite(x0))
        throw parameter_error("make_grid: x0 must be finite");
    return Grid1D{n, dx, x0};
}

/**
 * Phase-space lattice attached to a Grid1D.
 *
 *  - symbol (position) axis: 2n-1 midpoints x0 + s*dx/2, s = 0..2n-2, so
 *    every pair midpoint (x_a+x_b)/2 of the base grid is on-lattice;
 *  - frequency axis: n centered points xi_k = (k - n/2)*pi/(n*dx), i.e. the
 *    half band [-pi/(2 dx), pi/(2 dx)) matching the y-step 2*dx inside one
 *    kernel anti-diagonal.
 */
struct PhaseGrid {
    Grid1D base;

    int s_count() const { return 2 * base.n - 1; }
    int xi_count() const { return base.n; }
    double dxi() const { return pi / (base.n * base.dx); }
    double x(int s) const { return base.x0 + 0.5 * s * base.dx; }
    double xi(int k) const { return (k - base.n / 2) * dxi(); }
    double xi0() const { return xi(0); }

    bool operator==(const PhaseGrid&) const = default;
};

inline PhaseGrid make_phase_grid(const Grid1D& g) {
    if (g.n < 2 || g.n % 2 != 0 || !(g.dx > 0.0))
        throw parameter_error("make_phase_grid: invalid base grid");
    return PhaseGrid{g};
}

/// Complex sample vector on a Grid1D.
struct Signal {
    Grid1D grid;
    std::vector<cplx> values;
};

inline Signal make_signal(const Grid1D& g, std::vector<cplx> values) {
    if (static_cast<int>(values.size()) != g.n)
        throw parameter_error("make_signal: length does not match grid");
    for (const cplx& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw parameter_error("make_signal: non-finite sample");
    return Signal{g, std::move(values)};
}

template <class F>
Signal sample_signal(const Grid1D& g, F&& f) {
    std::vector<cplx> v(g.n);
    for (int a = 0; a < g.n; ++a) v[a] = cplx(f(g.point(a)));
    return Signal{g, std::move(v)};
}

/// n x n complex matrix, entry [a,b] ~ k(x_a, x_b); used both for two-point
/// covariances and for general operator kernels under dx-quadrature.
struct Kernel {
    Grid1D grid;
    MatrixXcd values;
};

inline Kernel make_kernel(const Grid1D& g, MatrixXcd values) {
    if (values.rows() != g.n || values.cols() != g.n)
        throw parameter_error("make_kernel: shape does not match grid");
    if (!values.allFinite()) throw parameter_error("make_kernel: non-finite entry");
    return Kernel{g, std::move(values)};
}

inline double max_abs(const MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const MatrixXcd& m, double rel_tol = 1e-12) {
    const double scale = max_abs(m);
    if (scale == 0.0) return true;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// PSD check used by the covariance contracts: smallest eigenvalue of the
/// Hermitian part must be >= -1e-10 * max|entry|.
inline bool is_psd_kernel(const Kernel& k, double rel_tol = 1e-10) {
    if (!is_hermitian(k.values, 1e-9)) return false;
    const double scale = max_abs(k.values);
    if (scale == 0.0) return true;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(
        0.5 * (k.values + k.values.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -rel_tol * scale;
}

/// Complex field over the phase lattice: (2n-1) x n, indexed (s, k).
struct PhaseField {
    PhaseGrid pgrid;
    MatrixXcd values;
};

inline PhaseField make_phase_field(const PhaseGrid& pg, MatrixXcd values) {
    if (values.rows() != pg.s_count() || values.cols() != pg.xi_count())
        throw parameter_error("make_phase_field: shape does not match phase grid");
    if (!values.allFinite()) throw parameter_error("make_phase_field: non-finite entry");
    return PhaseField{pg, std::move(values)};
}

inline PhaseField zero_phase_field(const PhaseGrid& pg) {
    return PhaseField{pg, MatrixXcd::Zero(pg.s_count(), pg.xi_count())};
}

/// Dense row-major 4-axis complex tensor.
struct Tensor4 {
    std::array<int, 4> shape{0, 0, 0, 0};
    std::vector<cplx> v;

    Tensor4() = default;
    explicit Tensor4(std::array<int, 4> sh) : shape(sh) {
        v.assign(static_cast<size_t>(sh[0]) * sh[1] * sh[2] * sh[3], cplx(0.0));
    }
    size_t index(int i0, int i1, int i2, int i3) const {
        return ((static_cast<size_t>(i0) * shape[1] + i1) * shape[2] + i2) * shape[3] + i3;
    }
    cplx& at(int i0, int i1, int i2, int i3) { return v[index(i0, i1, i2, i3)]; }
    const cplx& at(int i0, int i1, int i2, int i3) const { return v[index(i0, i1, i2, i3)]; }
    size_t size() const { return v.size(); }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : v) m = std::max(m, std::abs(z));
        return m;
    }
};

/**
 * Covariance kernel of the zero-mean Wigner field: axes (s, k, s', k'),
 * shape (2n-1, n, 2n-1, n). Hermitian under swap of the two phase points
 * with conjugation.
 */
struct CovTensor4 {
    PhaseGrid pgrid;
    Tensor4 t;
};

inline CovTensor4 make_cov_tensor4(const PhaseGrid& pg) {
    return CovTensor4{pg, Tensor4({pg.s_count(), pg.xi_count(), pg.s_count(), pg.xi_count()})};
}

/**
 * Weyl symbol over the doubled phase lattice, axes (x1, x2, xi1, xi2) of
 * shape (4n-3, 2n-1, 2n-1, n):
 *
 *  - x1: midpoints of the symbol axis pair, spacing dx/4;
 *  - x2: midpoints of the frequency axis pair, spacing dxi/2;
 *  - xi1: conjugate to position-pair differences, spacing 2*pi/((2n-1)*dx);
 *  - xi2: conjugate to frequency-pair differences, spacing dx.
 */
struct Symbol4 {
    PhaseGrid pgrid;
    Tensor4 t;

    int m1() const { return pgrid.s_count(); }   // position-pair lattice size
    int m2() const { return pgrid.xi_count(); }  // frequency-pair lattice size

    double x1(int i) const { return pgrid.base.x0 + 0.25 * i * pgrid.base.dx; }
    double x2(int j) const { return pgrid.xi0() + 0.5 * j * pgrid.dxi(); }
    double dxi1() const { return pi / (m1() * 0.5 * pgrid.base.dx); }
    double dxi2() const { return pi / (m2() * pgrid.dxi()); }  // equals dx
    double xi1(int t) const { return (t - m1() / 2) * dxi1(); }
    double xi2(int u) const { return (u - m2() / 2) * dxi2(); }
};

inline Symbol4 make_symbol4(const PhaseGrid& pg) {
    const int m1 = pg.s_count(), m2 = pg.xi_count();
    return Symbol4{pg, Tensor4({2 * m1 - 1, 2 * m2 - 1, m1, m2})};
}

}  // namespace halfgrid

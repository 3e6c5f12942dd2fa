#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>

#include "halfgrid/parallel.hpp"
#include "halfgrid/spectral.hpp"

namespace halfgrid {

// ---------------------------------------------------------------------------
// Deterministic counter-based sampling: every path is a pure function of
// (seed, path index), so Monte Carlo runs are reproducible and order-free.
// ---------------------------------------------------------------------------

namespace detail {

inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// splitmix64 stream keyed by (seed, stream index).
struct PathRng {
    uint64_t state;

    PathRng(uint64_t seed, uint64_t stream)
        : state(detail::mix64(detail::mix64(seed) ^
                              (0xA0761D6478BD642FULL * (stream + 1)))) {}

    uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    /// Uniform in (0,1] (never zero, safe under log).
    double uniform_pos() { return ((next_u64() >> 11) + 1) * 0x1.0p-53; }
    /// Uniform in [0,1).
    double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

    /// One Box-Muller pair of independent standard real Gaussians.
    std::pair<double, double> gaussian_pair() {
        const double u1 = uniform_pos();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)};
    }
    /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
    cplx circular_gaussian() {
        auto [g1, g2] = gaussian_pair();
        return cplx(g1, g2) / std::sqrt(2.0);
    }
};

// ---------------------------------------------------------------------------
// Spectral densities and covariance kernels
// ---------------------------------------------------------------------------

/// Non-negative spectral density, either a closed-form evaluator or a
/// sampled table (linear interpolation, zero outside the table range).
/// An optional closed-form autocovariance h with k(x,y) = h(x-y) bypasses
/// the numeric inverse transform.
struct SpectralDensity {
    std::function<double(double)> density;
    std::function<double(double)> autocovariance;  // empty if not known

    static SpectralDensity from_function(std::function<double(double)> mu) {
        return SpectralDensity{std::move(mu), nullptr};
    }
    static SpectralDensity from_function(std::function<double(double)> mu,
                                         std::function<double(double)> h) {
        return SpectralDensity{std::move(mu), std::move(h)};
    }
    static SpectralDensity from_table(std::vector<double> xi, std::vector<double> val) {
        if (xi.size() != val.size() || xi.size() < 2)
            throw parameter_error("SpectralDensity::from_table: need >= 2 samples");
        for (size_t i = 0; i + 1 < xi.size(); ++i)
            if (!(xi[i] < xi[i + 1]))
                throw parameter_error("SpectralDensity::from_table: xi not increasing");
        for (double v : val)
            if (!(v >= 0.0)) throw parameter_error("SpectralDensity: negative sample");
        auto fn = [xi = std::move(xi), val = std::move(val)](double q) -> double {
            if (q < xi.front() || q > xi.back()) return 0.0;
            const auto it = std::upper_bound(xi.begin(), xi.end(), q);
            const size_t hi = std::min<size_t>(xi.size() - 1,
                                               static_cast<size_t>(it - xi.begin()));
            const size_t lo = hi == 0 ? 0 : hi - 1;
            if (hi == lo) return val[lo];
            const double t = (q - xi[lo]) / (xi[hi] - xi[lo]);
            return (1 - t) * val[lo] + t * val[hi];
        };
        return SpectralDensity{std::move(fn), nullptr};
    }
};

/// K = (p/dx) * Identity: the grid surrogate of p*delta(x-y) under
/// dx-quadrature, the unique discrete covariance with quadratic form p*|phi|^2.
inline Kernel white_noise_kernel(const Grid1D& grid, double p) {
    if (!(p > 0.0)) throw parameter_error("white_noise_kernel: power must be positive");
    return Kernel{grid, (p / grid.dx) * MatrixXcd::Identity(grid.n, grid.n)};
}

/// k(x,y) = min(x,y) on the non-negative quadrant, 0 elsewhere.
inline Kernel brownian_kernel(const Grid1D& grid) {
    MatrixXcd K(grid.n, grid.n);
    for (int a = 0; a < grid.n; ++a)
        for (int b = 0; b < grid.n; ++b) {
            const double xa = grid.point(a), xb = grid.point(b);
            K(a, b) = (xa >= 0.0 && xb >= 0.0) ? std::min(xa, xb) : 0.0;
        }
    return Kernel{grid, std::move(K)};
}

/**
 * Stationary kernel K[a,b] = h(x_a - x_b) with h = (2 pi)^{-1/2} F^{-1} mu.
 * Without a closed-form h, the inverse transform is evaluated by Simpson
 * quadrature over the grid band [-pi/dx, pi/dx] with 16x oversampling.
 */
inline Kernel stationary_kernel(const Grid1D& grid, const SpectralDensity& mu) {
    const int n = grid.n;
    std::vector<cplx> h(2 * n - 1);  // h[(n-1)+j] = h(j*dx), j = -(n-1)..n-1
    if (mu.autocovariance) {
        for (int j = -(n - 1); j <= n - 1; ++j)
            h[n - 1 + j] = mu.autocovariance(j * grid.dx);
    } else {
        const double B = pi / grid.dx;
        const int N = 32 * n;  // Simpson intervals (even)
        const double step = 2.0 * B / N;
        std::vector<double> mu_val(N + 1);
        for (int i = 0; i <= N; ++i) {
            const double xi = -B + i * step;
            const double v = mu.density(xi);
            if (!(v >= 0.0))
                throw parameter_error("stationary_kernel: negative density sample");
            mu_val[i] = v;
        }
        for (int j = -(n - 1); j <= n - 1; ++j) {
            const double y = j * grid.dx;
            cplx acc(0.0);
            for (int i = 0; i <= N; ++i) {
                const double xi = -B + i * step;
                const double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                acc += w * mu_val[i] * std::polar(1.0, y * xi);
            }
            h[n - 1 + j] = acc * (step / 3.0) / (2.0 * pi);
        }
    }
    MatrixXcd K(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) K(a, b) = h[n - 1 + (a - b)];
    return Kernel{grid, std::move(K)};
}

// ---------------------------------------------------------------------------
// Process models
// ---------------------------------------------------------------------------

struct ProcessModel {
    enum class Kind { WhiteNoise, Brownian, Stationary, Custom };

    Kind kind = Kind::Custom;
    Grid1D grid;
    Kernel kernel;                          // materialized covariance, zero mean
    double power = 0.0;                     // white noise only
    std::optional<SpectralDensity> density; // stationary only
};

inline ProcessModel white_noise_model(const Grid1D& g, double p) {
    return ProcessModel{ProcessModel::Kind::WhiteNoise, g, white_noise_kernel(g, p), p, {}};
}
inline ProcessModel brownian_model(const Grid1D& g) {
    return ProcessModel{ProcessModel::Kind::Brownian, g, brownian_kernel(g), 0.0, {}};
}
inline ProcessModel stationary_model(const Grid1D& g, SpectralDensity mu) {
    Kernel k = stationary_kernel(g, mu);
    return ProcessModel{ProcessModel::Kind::Stationary, g, std::move(k), 0.0, std::move(mu)};
}
inline ProcessModel custom_model(Kernel k) {
    if (!is_hermitian(k.values, 1e-9))
        throw model_error("custom_model: covariance kernel is not Hermitian");
    const Grid1D g = k.grid;
    return ProcessModel{ProcessModel::Kind::Custom, g, std::move(k), 0.0, {}};
}

/// Random modulated translate of a template: u(x; y, eta) = e^{i eta x} f(x-y)
/// with (y, eta) centered Gaussian of variances (a, b).
struct ShiftModel {
    Signal f;
    double a = 0.0, b = 0.0;
};

inline ShiftModel make_shift_model(Signal f, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw parameter_error("ShiftModel: widths must be positive");
    double norm = 0.0;
    for (const cplx& v : f.values) norm += std::norm(v);
    if (norm == 0.0) throw parameter_error("ShiftModel: template signal is zero");
    return ShiftModel{std::move(f), a, b};
}

// ---------------------------------------------------------------------------
// PSD factorization and path sampling
// ---------------------------------------------------------------------------

/// K = L L^* after clipping eigenvalues below -1e-10*lambda_max to zero.
struct PsdFactor {
    MatrixXcd L;
    int clipped_count = 0;
    double clipped_mass = 0.0;  // sum of |clipped negative eigenvalues|
    double lambda_max = 0.0;
};

inline PsdFactor factor_psd(const Kernel& K, double rel_tol = 1e-10) {
    if (!is_hermitian(K.values, 1e-9))
        throw model_error("factor_psd: covariance kernel is not Hermitian");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (K.values + K.values.adjoint()));
    const Eigen::VectorXd lam = es.eigenvalues();
    const double entry_scale = max_abs(K.values);
    const double floor = -rel_tol * std::max(entry_scale, 0.0);

    PsdFactor f;
    f.lambda_max = lam.size() ? lam.maxCoeff() : 0.0;
    Eigen::VectorXd clipped = lam;
    for (int i = 0; i < lam.size(); ++i) {
        if (lam[i] < floor) {
            std::ostringstream msg;
            msg << "factor_psd: kernel fails PSD tolerance: eigenvalue " << lam[i]
                << " below floor " << floor << " (max entry " << entry_scale << ")";
            throw model_error(msg.str());
        }
        if (lam[i] < 0.0) {
            ++f.clipped_count;
            f.clipped_mass += -lam[i];
            clipped[i] = 0.0;
        }
    }
    f.L = es.eigenvectors() * clipped.cwiseSqrt().asDiagonal();
    return f;
}

/// Draws path i as L z_i with z_i i.i.d. circular complex Gaussian; each
/// path is a deterministic function of (seed, i).
struct PathSampler {
    Grid1D grid;
    MatrixXcd L;
    uint64_t seed = 0;

    Signal path(uint64_t i) const {
        const int n = grid.n;
        PathRng rng(seed, i);
        VectorXcd z(n);
        for (int a = 0; a < n; ++a) z[a] = rng.circular_gaussian();
        VectorXcd u = L * z;
        return Signal{grid, std::vector<cplx>(u.data(), u.data() + n)};
    }
};

inline PathSampler make_path_sampler(const ProcessModel& model, uint64_t seed) {
    return PathSampler{model.grid, factor_psd(model.kernel).L, seed};
}

inline std::vector<Signal> sample_paths(const ProcessModel& model, int count, uint64_t seed) {
    if (count < 1) throw parameter_error("sample_paths: count must be >= 1");
    const PathSampler sampler = make_path_sampler(model, seed);
    std::vector<Signal> out(count);
    parallel_for(0, count, [&](int i) { out[i] = sampler.path(static_cast<uint64_t>(i)); });
    return out;
}

/// Linear interpolation of a signal with zero extension.
inline cplx interp_signal(const Signal& f, double x) {
    const double t = (x - f.grid.x0) / f.grid.dx;
    const int i0 = static_cast<int>(std::floor(t));
    const double w = t - i0;
    auto sample = [&](int i) -> cplx {
        return (i < 0 || i >= f.grid.n) ? cplx(0.0) : f.values[i];
    };
    return (1 - w) * sample(i0) + w * sample(i0 + 1);
}

/// Path i of the shift model; the (y, eta) pair uses the first Box-Muller
/// pair of the (seed, i) stream.
struct ShiftSampler {
    ShiftModel model;
    uint64_t seed = 0;

    Signal path(uint64_t i) const {
        PathRng rng(seed, i);
        auto [g1, g2] = rng.gaussian_pair();
        const double y = std::sqrt(model.a) * g1;
        const double eta = std::sqrt(model.b) * g2;
        const Grid1D& g = model.f.grid;
        std::vector<cplx> v(g.n);
        for (int a = 0; a < g.n; ++a) {
            const double x = g.point(a);
            v[a] = std::polar(1.0, eta * x) * interp_signal(model.f, x - y);
        }
        return Signal{g, std::move(v)};
    }
};

inline std::vector<Signal> sample_shift_process(const ShiftModel& model, int count,
                                                uint64_t seed) {
    if (count < 1) throw parameter_error("sample_shift_process: count must be >= 1");
    const ShiftSampler sampler{model, seed};
    std::vector<Signal> out(count);
    parallel_for(0, count, [&](int i) { out[i] = sampler.path(static_cast<uint64_t>(i)); });
    return out;
}

}  // namespace halfgrid

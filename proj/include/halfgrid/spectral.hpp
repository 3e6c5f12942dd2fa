#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "halfgrid/grid.hpp"

namespace halfgrid {

enum class Route { Auto, Direct, Fft };
enum class Direction { Forward, Inverse };

namespace detail {

inline bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

/// In-place radix-2 Cooley-Tukey, unnormalized: forward multiplies by
/// exp(-2*pi*i*a*k/n), inverse by exp(+2*pi*i*a*k/n) (no 1/n factor).
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / len;
        const cplx wl = std::polar(1.0, ang);
        for (int i = 0; i < n; i += len) {
            cplx w(1.0);
            for (int k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

/**
 * Exact unit-root table for one lattice size m: (q) -> exp(-i*pi*q/m).
 * Every phase used by the half-grid transforms is exp(-i*pi*integer/m), so
 * table lookup keeps them free of accumulated trig error.
 */
struct PhaseTable {
    int m = 0;
    std::vector<cplx> root;  // root[q] = exp(-i*pi*q/m), q in [0, 2m)

    explicit PhaseTable(int m_) : m(m_), root(2 * m_) {
        for (int q = 0; q < 2 * m; ++q) root[q] = std::polar(1.0, -pi * q / m);
    }
    cplx operator()(long long q) const {
        long long r = q % (2 * m);
        if (r < 0) r += 2 * m;
        return root[static_cast<size_t>(r)];
    }
    cplx conj_at(long long q) const { return std::conj((*this)(q)); }
};

inline int mod(long long a, int m) {
    long long r = a % m;
    if (r < 0) r += m;
    return static_cast<int>(r);
}

/// out[t] = sum_j c_j exp(-i*pi*j*(t-c)/m), t = 0..m-1, c = m/2.
inline void row_fwd_direct(const int* js, const cplx* cs, size_t cnt, int m,
                           const PhaseTable& tab, cplx* out) {
    const int c = m / 2;
    for (int t = 0; t < m; ++t) {
        cplx acc(0.0);
        for (size_t i = 0; i < cnt; ++i)
            acc += cs[i] * tab(static_cast<long long>(js[i]) * (t - c));
        out[t] = acc;
    }
}

/// Same contract as row_fwd_direct through one length-m FFT with pre/post
/// chirp factors; requires power-of-two m and a single offset parity r.
inline void row_fwd_fft(const int* js, const cplx* cs, size_t cnt, int m, int r,
                        const PhaseTable& tab, cplx* out) {
    const int c = m / 2;
    std::vector<cplx> b(m, cplx(0.0));
    for (size_t i = 0; i < cnt; ++i) {
        const long long tau = (static_cast<long long>(js[i]) - r) / 2;
        b[mod(tau, m)] += cs[i] * tab.conj_at(2 * tau * c);
    }
    fft_pow2(b, false);
    for (int t = 0; t < m; ++t) out[t] = b[t] * tab(static_cast<long long>(r) * (t - c));
}

/// Exact inverse on one parity class: recovers c_j at the requested offsets.
inline void row_inv_direct(const cplx* freq, const int* js, size_t cnt, int m, int r,
                           const PhaseTable& tab, cplx* out_coeffs) {
    const int c = m / 2;
    std::vector<cplx> ghat(m, cplx(0.0));
    for (int mu = 0; mu < m; ++mu) {
        cplx acc(0.0);
        for (int t = 0; t < m; ++t)
            acc += freq[t] * tab.conj_at(static_cast<long long>(r) * (t - c)) *
                   tab.conj_at(2LL * mu * t);
        ghat[mu] = acc / static_cast<double>(m);
    }
    for (size_t i = 0; i < cnt; ++i) {
        const long long tau = (static_cast<long long>(js[i]) - r) / 2;
        out_coeffs[i] = ghat[mod(tau, m)] * tab(2 * tau * c);
    }
}

}  // namespace detail

/// Center index of the m-point frequency lattice eta_t = (t - m/2)*pi/(m*h).
inline int axis_center(int m) { return m / 2; }

/// Anti-diagonal offsets of row S on an m-point axis: j = a - b over pairs
/// a + b = S with 0 <= a,b <= m-1, i.e. j = -g..g step 2, g = min(S, 2m-2-S).
inline std::vector<int> antidiag_offsets(int S, int m) {
    const int g = std::min(S, 2 * (m - 1) - S);
    std::vector<int> js;
    js.reserve(g + 1);
    for (int j = -g; j <= g; j += 2) js.push_back(j);
    return js;
}

namespace detail {

inline int offsets_parity(std::span<const int> offsets) {
    if (offsets.empty()) return 0;
    const int r = mod(offsets[0], 2);
    for (int j : offsets)
        if (mod(j, 2) != r) throw parameter_error("row_transform: mixed-parity offsets");
    return r;
}

}  // namespace detail

/**
 * Forward half-grid row transform on an m-point axis:
 *   out[t] = sum_j c_j exp(-i*j*h*eta_t) = sum_j c_j exp(-i*pi*j*(t - m/2)/m).
 * All offsets must share one parity; the spacing h cancels from the phases.
 */
inline std::vector<cplx> row_transform_forward(std::span<const int> offsets,
                                               std::span<const cplx> coeffs, int m,
                                               Route route = Route::Auto) {
    if (offsets.size() != coeffs.size())
        throw parameter_error("row_transform: offsets/coeffs length mismatch");
    for (int j : offsets)
        if (std::abs(j) > 2 * (m - 1))
            throw parameter_error("row_transform: offset out of range");
    const int r = detail::offsets_parity(offsets);
    const detail::PhaseTable tab(m);
    const bool want_fft = (route == Route::Fft) ||
                          (route == Route::Auto && detail::is_pow2(m) && offsets.size() > 8);
    if (want_fft && !detail::is_pow2(m))
        throw parameter_error("row_transform: fft route requires power-of-two size");

    std::vector<cplx> out(m);
    if (want_fft)
        detail::row_fwd_fft(offsets.data(), coeffs.data(), coeffs.size(), m, r, tab, out.data());
    else
        detail::row_fwd_direct(offsets.data(), coeffs.data(), coeffs.size(), m, tab, out.data());
    return out;
}

/**
 * Inverse of row_transform_forward: recovers c_j at the requested offsets
 * (one parity class, pairwise-distinct residues (j-r)/2 mod m, at most m of
 * them). Exact for any row produced by the forward transform from
 * coefficients supported on the requested offsets.
 */
inline std::vector<cplx> row_transform_inverse(std::span<const cplx> freq_row,
                                               std::span<const int> offsets, int m) {
    if (static_cast<int>(freq_row.size()) != m)
        throw parameter_error("row_transform_inverse: row length must equal m");
    if (offsets.size() > static_cast<size_t>(m))
        throw parameter_error("row_transform_inverse: more than m offsets");
    const int r = detail::offsets_parity(offsets);
    std::vector<char> seen(m, 0);
    for (int j : offsets) {
        const int res = detail::mod((static_cast<long long>(j) - r) / 2, m);
        if (seen[res]) throw parameter_error("row_transform_inverse: aliased offsets");
        seen[res] = 1;
    }
    const detail::PhaseTable tab(m);
    std::vector<cplx> coeffs(offsets.size());
    detail::row_inv_direct(freq_row.data(), offsets.data(), offsets.size(), m, r, tab,
                           coeffs.data());
    return coeffs;
}

/// Spec-facing wrapper on the phase grid's frequency lattice (m = n).
inline std::vector<cplx> row_transform(std::span<const int> offsets,
                                       std::span<const cplx> values, const PhaseGrid& pg,
                                       Direction dir, Route route = Route::Auto) {
    if (dir == Direction::Forward)
        return row_transform_forward(offsets, values, pg.base.n, route);
    return row_transform_inverse(values, offsets, pg.base.n);
}

/// Signal on the full-band centered frequency lattice xi_k = (k-n/2)*2*pi/(n*dx).
struct FreqSignal {
    Grid1D grid;    // frequency lattice
    Grid1D source;  // position lattice the transform came from
    std::vector<cplx> values;
};

inline Grid1D frequency_grid(const Grid1D& g) {
    const double dxi = 2.0 * pi / (g.n * g.dx);
    return Grid1D{g.n, dxi, -(g.n / 2) * dxi};
}

/// F[k] = (dx/sqrt(2 pi)) sum_a f[a] exp(-i x_a xi_k) on the full band.
inline FreqSignal dft(const Signal& f, Route route = Route::Auto) {
    const int n = f.grid.n;
    const Grid1D fg = frequency_grid(f.grid);
    const double scale = f.grid.dx * inv_sqrt_2pi;
    std::vector<cplx> out(n);

    const bool use_fft = (route == Route::Fft) || (route == Route::Auto && detail::is_pow2(n));
    if (use_fft && !detail::is_pow2(n))
        throw parameter_error("dft: fft route requires power-of-two n");
    if (use_fft) {
        std::vector<cplx> g(n);
        for (int a = 0; a < n; ++a) g[a] = (a % 2 ? -f.values[a] : f.values[a]);
        detail::fft_pow2(g, false);
        for (int k = 0; k < n; ++k)
            out[k] = scale * std::polar(1.0, -f.grid.x0 * fg.point(k)) * g[k];
    } else {
        const detail::PhaseTable tab(n);
        for (int k = 0; k < n; ++k) {
            cplx acc(0.0);
            for (int a = 0; a < n; ++a) acc += f.values[a] * tab(2LL * a * (k - n / 2));
            out[k] = scale * std::polar(1.0, -f.grid.x0 * fg.point(k)) * acc;
        }
    }
    return FreqSignal{fg, f.grid, std::move(out)};
}

/// Inverse of dft: f[a] = (dxi/sqrt(2 pi)) sum_k F[k] exp(+i x_a xi_k).
inline Signal idft(const FreqSignal& F, Route route = Route::Auto) {
    const int n = F.source.n;
    if (static_cast<int>(F.values.size()) != n) throw parameter_error("idft: length mismatch");
    const double scale = F.grid.dx * inv_sqrt_2pi;
    std::vector<cplx> out(n);

    const bool use_fft = (route == Route::Fft) || (route == Route::Auto && detail::is_pow2(n));
    if (use_fft && !detail::is_pow2(n))
        throw parameter_error("idft: fft route requires power-of-two n");
    if (use_fft) {
        std::vector<cplx> g(n);
        for (int k = 0; k < n; ++k)
            g[k] = F.values[k] * std::polar(1.0, F.source.x0 * F.grid.point(k));
        detail::fft_pow2(g, true);
        for (int a = 0; a < n; ++a) out[a] = scale * (a % 2 ? -g[a] : g[a]);
    } else {
        const detail::PhaseTable tab(n);
        for (int a = 0; a < n; ++a) {
            cplx acc(0.0);
            for (int k = 0; k < n; ++k)
                acc += F.values[k] * std::polar(1.0, F.source.x0 * F.grid.point(k)) *
                       tab.conj_at(2LL * a * (k - n / 2));
            out[a] = scale * acc;
        }
    }
    return Signal{F.source, std::move(out)};
}

/// Bilinear interpolation of a phase field with zero extension.
inline cplx bilinear_value(const PhaseField& F, double x, double xi) {
    const PhaseGrid& pg = F.pgrid;
    const double tx = (x - pg.base.x0) / (0.5 * pg.base.dx);
    const double tk = (xi - pg.xi0()) / pg.dxi();
    const int i0 = static_cast<int>(std::floor(tx));
    const int k0 = static_cast<int>(std::floor(tk));
    const double fx = tx - i0, fk = tk - k0;
    auto sample = [&](int i, int k) -> cplx {
        if (i < 0 || i >= pg.s_count() || k < 0 || k >= pg.xi_count()) return cplx(0.0);
        return F.values(i, k);
    };
    return (1 - fx) * (1 - fk) * sample(i0, k0) + fx * (1 - fk) * sample(i0 + 1, k0) +
           (1 - fx) * fk * sample(i0, k0 + 1) + fx * fk * sample(i0 + 1, k0 + 1);
}

/**
 * Phase-space rotation by -J (J(x,xi) = (xi,-x)): G(x, xi) = F(-xi, x),
 * resampled onto the input lattice by bilinear interpolation with zero
 * extension, so that W(dft f) matches rotate_neg_J(W(f)) for every signal.
 */
inline PhaseField rotate_neg_J(const PhaseField& F) {
    const PhaseGrid& pg = F.pgrid;
    MatrixXcd out(pg.s_count(), pg.xi_count());
    for (int s = 0; s < pg.s_count(); ++s)
        for (int k = 0; k < pg.xi_count(); ++k)
            out(s, k) = bilinear_value(F, -pg.xi(k), pg.x(s));
    return PhaseField{pg, std::move(out)};
}

}  // namespace halfgrid

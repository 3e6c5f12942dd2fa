#pragma once

#include "halfgrid/parallel.hpp"
#include "halfgrid/spectral.hpp"
#include "halfgrid/wigner.hpp"

namespace halfgrid {

/**
 * Weyl symbol of an operator kernel on the half-grid lattice:
 *   sigma[s,k] = 2 dx * sum_{j = s mod 2} K[(s+j)/2, (s-j)/2] exp(-i j dx xi_k),
 * the Riemann form of sigma = sqrt(2 pi) F_2(k o kappa) with y-step 2*dx
 * inside one anti-diagonal. Exact inverse of symbol_to_kernel on kernels.
 */
inline PhaseField kernel_to_symbol(const Kernel& K, Route route = Route::Auto) {
    const PhaseGrid pg = make_phase_grid(K.grid);
    const int n = K.grid.n;
    const double w = 2.0 * K.grid.dx;
    const detail::PhaseTable tab(n);
    const bool use_fft = (route == Route::Fft) ||
                         (route == Route::Auto && detail::is_pow2(n) && n > 32);
    if (route == Route::Fft && !detail::is_pow2(n))
        throw parameter_error("kernel_to_symbol: fft route requires power-of-two n");

    MatrixXcd out(pg.s_count(), pg.xi_count());
    std::vector<cplx> coeffs, row(n);
    for (int s = 0; s < pg.s_count(); ++s) {
        const std::vector<int> js = antidiag_offsets(s, n);
        coeffs.resize(js.size());
        for (size_t i = 0; i < js.size(); ++i)
            coeffs[i] = w * K.values((s + js[i]) / 2, (s - js[i]) / 2);
        if (use_fft)
            detail::row_fwd_fft(js.data(), coeffs.data(), js.size(), n, s % 2, tab, row.data());
        else
            detail::row_fwd_direct(js.data(), coeffs.data(), js.size(), n, tab, row.data());
        for (int k = 0; k < n; ++k) out(s, k) = row[k];
    }
    return PhaseField{pg, std::move(out)};
}

/// Per anti-diagonal inverse row transform of sigma[s,*] divided by 2*dx;
/// round trip symbol_to_kernel(kernel_to_symbol(K)) = K for every kernel.
inline Kernel symbol_to_kernel(const PhaseField& sigma) {
    const int n = sigma.pgrid.base.n;
    const double w = 2.0 * sigma.pgrid.base.dx;
    const detail::PhaseTable tab(n);
    MatrixXcd K = MatrixXcd::Zero(n, n);
    std::vector<cplx> freq(n), coeffs;
    for (int s = 0; s < sigma.pgrid.s_count(); ++s) {
        const std::vector<int> js = antidiag_offsets(s, n);
        for (int k = 0; k < n; ++k) freq[k] = sigma.values(s, k);
        coeffs.resize(js.size());
        detail::row_inv_direct(freq.data(), js.data(), js.size(), n, s % 2, tab, coeffs.data());
        for (size_t i = 0; i < js.size(); ++i)
            K((s + js[i]) / 2, (s - js[i]) / 2) = coeffs[i] / w;
    }
    return Kernel{sigma.pgrid.base, std::move(K)};
}

/// Operator view of a kernel under dx-quadrature: (Op f)[a] = dx sum_b K[a,b] f[b].
struct WeylOperator {
    Kernel kernel;

    Signal apply(const Signal& f) const {
        if (!(f.grid == kernel.grid))
            throw parameter_error("WeylOperator::apply: grid mismatch");
        Eigen::Map<const VectorXcd> fv(f.values.data(), f.grid.n);
        VectorXcd out = kernel.grid.dx * (kernel.values * fv);
        return Signal{f.grid, std::vector<cplx>(out.data(), out.data() + out.size())};
    }
};

inline WeylOperator quantize(const PhaseField& sigma) { return WeylOperator{symbol_to_kernel(sigma)}; }

/// (sigma^w f)[a] = dx sum_b symbol_to_kernel(sigma)[a,b] f[b].
inline Signal apply_weyl(const PhaseField& sigma, const Signal& f) {
    if (!(f.grid == sigma.pgrid.base)) throw parameter_error("apply_weyl: grid mismatch");
    return quantize(sigma).apply(f);
}

/// <sigma^w f, g> with dx-quadrature on signals.
inline cplx weyl_form(const PhaseField& sigma, const Signal& f, const Signal& g) {
    const Kernel K = symbol_to_kernel(sigma);
    Eigen::Map<const VectorXcd> fv(f.values.data(), f.grid.n);
    Eigen::Map<const VectorXcd> gv(g.values.data(), g.grid.n);
    const double dx = f.grid.dx;
    return dx * dx * (gv.adjoint() * (K.values * fv))(0);
}

/// <sigma, W> with the (dx/2)*dxi phase-space quadrature.
inline cplx phase_space_pairing(const PhaseField& sigma, const PhaseField& W) {
    if (!(sigma.pgrid == W.pgrid)) throw parameter_error("pairing: phase grid mismatch");
    const double w = 0.5 * sigma.pgrid.base.dx * sigma.pgrid.dxi();
    cplx acc(0.0);
    for (int s = 0; s < sigma.values.rows(); ++s)
        for (int k = 0; k < sigma.values.cols(); ++k)
            acc += sigma.values(s, k) * std::conj(W.values(s, k));
    return w * acc;
}

/// |<sigma^w f, g> - (2 pi)^{-1/2} <sigma, W(g,f)>|; zero to roundoff by
/// construction of the half-grid convention.
inline double pairing_defect(const PhaseField& sigma, const Signal& f, const Signal& g) {
    if (!(f.grid == sigma.pgrid.base) || !(g.grid == sigma.pgrid.base))
        throw parameter_error("pairing_defect: grid mismatch");
    const cplx lhs = weyl_form(sigma, f, g);
    const cplx rhs = inv_sqrt_2pi * phase_space_pairing(sigma, cross_wigner(g, f));
    return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// 4-axis transforms: the kernel_to_symbol construction applied independently
// to axis pair (1,3) (the two position-type axes) and axis pair (2,4) (the
// two frequency-type axes). kappa_2 is block-diagonal over the two phase
// coordinates, so the factorization is exact and the stages commute.
// ---------------------------------------------------------------------------

enum class PairOrder { Pair13First, Pair24First };

namespace detail {

// Forward pair transform over the (s, s') axes of T[s,k,s',k']:
// output axes (S1, t1, k, k') with S1 = s+s', t1 the conjugate frequency.
inline Tensor4 pair13_forward(const Tensor4& T, int m1) {
    const int n2 = T.shape[1], n4 = T.shape[3];
    Tensor4 U({2 * m1 - 1, m1, n2, n4});
    const PhaseTable tab(m1);
    parallel_for(0, 2 * m1 - 1, [&](int S) {
        const std::vector<int> js = antidiag_offsets(S, m1);
        std::vector<cplx> coeffs(js.size()), row(m1);
        for (int k = 0; k < n2; ++k)
            for (int kp = 0; kp < n4; ++kp) {
                for (size_t i = 0; i < js.size(); ++i)
                    coeffs[i] = T.at((S + js[i]) / 2, k, (S - js[i]) / 2, kp);
                row_fwd_direct(js.data(), coeffs.data(), js.size(), m1, tab, row.data());
                for (int t = 0; t < m1; ++t) U.at(S, t, k, kp) = row[t];
            }
    });
    return U;
}

inline void pair13_inverse_into(const Tensor4& U, int m1, Tensor4& T) {
    const int n2 = U.shape[2], n4 = U.shape[3];
    const PhaseTable tab(m1);
    parallel_for(0, 2 * m1 - 1, [&](int S) {
        const std::vector<int> js = antidiag_offsets(S, m1);
        std::vector<cplx> freq(m1), coeffs(js.size());
        for (int k = 0; k < n2; ++k)
            for (int kp = 0; kp < n4; ++kp) {
                for (int t = 0; t < m1; ++t) freq[t] = U.at(S, t, k, kp);
                row_inv_direct(freq.data(), js.data(), js.size(), m1, S % 2, tab,
                               coeffs.data());
                for (size_t i = 0; i < js.size(); ++i)
                    T.at((S + js[i]) / 2, k, (S - js[i]) / 2, kp) = coeffs[i];
            }
    });
}

// Forward pair transform over the last two axes of U[i0,i1,k,k']:
// output axes (i0, i1, S2, t2).
inline Tensor4 pair24_forward(const Tensor4& U, int m2) {
    const int n0 = U.shape[0], n1 = U.shape[1];
    Tensor4 S({n0, n1, 2 * m2 - 1, m2});
    const PhaseTable tab(m2);
    parallel_for(0, n0, [&](int i0) {
        std::vector<cplx> coeffs, row(m2);
        for (int i1 = 0; i1 < n1; ++i1)
            for (int S2 = 0; S2 < 2 * m2 - 1; ++S2) {
                const std::vector<int> js = antidiag_offsets(S2, m2);
                coeffs.resize(js.size());
                for (size_t i = 0; i < js.size(); ++i)
                    coeffs[i] = U.at(i0, i1, (S2 + js[i]) / 2, (S2 - js[i]) / 2);
                row_fwd_direct(js.data(), coeffs.data(), js.size(), m2, tab, row.data());
                for (int t = 0; t < m2; ++t) S.at(i0, i1, S2, t) = row[t];
            }
    });
    return S;
}

inline void pair24_inverse_into(const Tensor4& S, int m2, Tensor4& U) {
    const int n0 = S.shape[0], n1 = S.shape[1];
    const PhaseTable tab(m2);
    parallel_for(0, n0, [&](int i0) {
        std::vector<cplx> freq(m2), coeffs;
        for (int i1 = 0; i1 < n1; ++i1)
            for (int S2 = 0; S2 < 2 * m2 - 1; ++S2) {
                const std::vector<int> js = antidiag_offsets(S2, m2);
                coeffs.resize(js.size());
                for (int t = 0; t < m2; ++t) freq[t] = S.at(i0, i1, S2, t);
                row_inv_direct(freq.data(), js.data(), js.size(), m2, S2 % 2, tab,
                               coeffs.data());
                for (size_t i = 0; i < js.size(); ++i)
                    U.at(i0, i1, (S2 + js[i]) / 2, (S2 - js[i]) / 2) = coeffs[i];
            }
    });
}

// Axis permutations between the two stage orders.
// Kernel layout: (s, k, s', k'); symbol layout: (S1, S2, t1, t2).
inline Tensor4 permute_0213(const Tensor4& A) {
    Tensor4 B({A.shape[0], A.shape[2], A.shape[1], A.shape[3]});
    for (int i0 = 0; i0 < A.shape[0]; ++i0)
        for (int i1 = 0; i1 < A.shape[1]; ++i1)
            for (int i2 = 0; i2 < A.shape[2]; ++i2)
                for (int i3 = 0; i3 < A.shape[3]; ++i3)
                    B.at(i0, i2, i1, i3) = A.at(i0, i1, i2, i3);
    return B;
}

}  // namespace detail

/**
 * Weyl symbol of a phase-space covariance kernel. Axis pair (s,s') carries
 * quadrature weight 2*(dx/2), pair (k,k') weight 2*dxi; the result lives on
 * the Symbol4 lattice with axes (x1, x2, xi1, xi2).
 */
inline Symbol4 kernel4_to_symbol4(const CovTensor4& T, PairOrder order = PairOrder::Pair13First) {
    const PhaseGrid& pg = T.pgrid;
    const int m1 = pg.s_count(), m2 = pg.xi_count();
    if (T.t.shape != std::array<int, 4>{m1, m2, m1, m2})
        throw parameter_error("kernel4_to_symbol4: tensor shape mismatch");
    const double w1 = pg.base.dx;         // 2 * (dx/2)
    const double w2 = 2.0 * pg.dxi();     // 2 * dxi

    Symbol4 out = make_symbol4(pg);
    if (order == PairOrder::Pair13First) {
        Tensor4 U = detail::pair13_forward(T.t, m1);      // (S1, t1, k, k')
        Tensor4 S = detail::pair24_forward(U, m2);        // (S1, t1, S2, t2)
        // reorder to (S1, S2, t1, t2)
        out.t = detail::permute_0213(S);
    } else {
        // transform (k,k') first: view T as (s, s', k, k') via permutation
        Tensor4 Tp = detail::permute_0213(T.t);           // (s, s', k, k')
        Tensor4 U = detail::pair24_forward(Tp, m2);       // (s, s', S2, t2)
        Tensor4 Up = detail::permute_0213(U);             // (s, S2, s', t2)
        Tensor4 V = detail::pair13_forward(Up, m1);       // (S1, t1, S2, t2)
        out.t = detail::permute_0213(V);                  // (S1, S2, t1, t2)
    }
    for (cplx& z : out.t.v) z *= w1 * w2;
    return out;
}

/// Exact inverse of kernel4_to_symbol4 (from the kernel side).
inline CovTensor4 symbol4_to_kernel4(const Symbol4& S, PairOrder order = PairOrder::Pair13First) {
    const PhaseGrid& pg = S.pgrid;
    const int m1 = pg.s_count(), m2 = pg.xi_count();
    if (S.t.shape != std::array<int, 4>{2 * m1 - 1, 2 * m2 - 1, m1, m2})
        throw parameter_error("symbol4_to_kernel4: tensor shape mismatch");
    const double w1 = pg.base.dx;
    const double w2 = 2.0 * pg.dxi();

    Tensor4 scaled = S.t;
    for (cplx& z : scaled.v) z /= (w1 * w2);

    CovTensor4 out = make_cov_tensor4(pg);
    if (order == PairOrder::Pair13First) {
        Tensor4 Sp = detail::permute_0213(scaled);        // (S1, t1, S2, t2)
        Tensor4 U({2 * m1 - 1, m1, m2, m2});
        detail::pair24_inverse_into(Sp, m2, U);           // (S1, t1, k, k')
        detail::pair13_inverse_into(U, m1, out.t);        // (s, k, s', k')
    } else {
        Tensor4 Sp = detail::permute_0213(scaled);        // (S1, t1, S2, t2)
        Tensor4 V({m1, 2 * m2 - 1, m1, m2});              // (s, S2, s', t2)
        detail::pair13_inverse_into(Sp, m1, V);
        Tensor4 Vp = detail::permute_0213(V);             // (s, s', S2, t2)
        Tensor4 K({m1, m1, m2, m2});
        detail::pair24_inverse_into(Vp, m2, K);           // (s, s', k, k')
        out.t = detail::permute_0213(K);                  // (s, k, s', k')
    }
    return out;
}

/// Flatten a phase-space covariance tensor to a matrix over phase points
/// p = s * n + k (row-major over the lattice).
inline MatrixXcd flatten_phase_operator(const CovTensor4& T) {
    const int S = T.pgrid.s_count(), K = T.pgrid.xi_count();
    const int P = S * K;
    MatrixXcd M(P, P);
    for (int s = 0; s < S; ++s)
        for (int k = 0; k < K; ++k)
            for (int sp = 0; sp < S; ++sp)
                for (int kp = 0; kp < K; ++kp)
                    M(s * K + k, sp * K + kp) = T.t.at(s, k, sp, kp);
    return M;
}

/// Minimum eigenvalue of the Hermitian part; input must be Hermitian within
/// 1e-9 of its largest entry. A value >= -tol certifies discrete PSD-ness.
inline double psd_defect(const MatrixXcd& M) {
    const double scale = max_abs(M);
    if (scale == 0.0) return 0.0;
    if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw contract_error("psd_defect: input is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (M + M.adjoint()),
                                                Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline double psd_defect(const Kernel& K) { return psd_defect(K.values); }
inline double psd_defect(const CovTensor4& T) { return psd_defect(flatten_phase_operator(T)); }

}  // namespace halfgrid

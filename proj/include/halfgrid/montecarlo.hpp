#pragma once

#include <type_traits>

#include "halfgrid/analysis.hpp"

namespace halfgrid {

/// Neumaier compensated sum; merging two sums equals accumulating the union
/// up to the stated 1e-12 tolerance regardless of split.
struct CompensatedSum {
    double s = 0.0, c = 0.0;

    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    void merge(const CompensatedSum& o) {
        add(o.s);
        add(o.c);
    }
    double value() const { return s + c; }
};

/**
 * Running first and second moments of Wigner fields over a declared
 * phase-point subset, with compensated accumulation. Merging accumulators
 * is associative within the compensated-arithmetic tolerance.
 */
struct MomentAccumulator {
    PhaseGrid pgrid;
    uint64_t seed = 0;
    long count = 0;
    std::vector<CompensatedSum> sum_w;   // per phase point
    std::vector<CompensatedSum> sum_w2;  // per phase point, squares
    std::vector<std::pair<int, int>> subset;
    std::vector<double> center;                 // centering values on the subset
    std::vector<CompensatedSum> sum_pp;         // subset x subset products, row-major

    MomentAccumulator(const PhaseGrid& pg, std::vector<std::pair<int, int>> subset_pts,
                      std::vector<double> center_vals, uint64_t seed_)
        : pgrid(pg),
          seed(seed_),
          sum_w(static_cast<size_t>(pg.s_count()) * pg.xi_count()),
          sum_w2(static_cast<size_t>(pg.s_count()) * pg.xi_count()),
          subset(std::move(subset_pts)),
          center(std::move(center_vals)),
          sum_pp(subset.size() * subset.size()) {
        for (const auto& [s, k] : subset)
            if (s < 0 || s >= pg.s_count() || k < 0 || k >= pg.xi_count())
                throw parameter_error("MomentAccumulator: subset point out of range");
        if (center.size() != subset.size())
            throw parameter_error("MomentAccumulator: centering values mismatch");
    }

    void add_field(const PhaseField& W) {
        const int K = pgrid.xi_count();
        ++count;
        for (int s = 0; s < pgrid.s_count(); ++s)
            for (int k = 0; k < K; ++k) {
                const double v = W.values(s, k).real();
                sum_w[static_cast<size_t>(s) * K + k].add(v);
                sum_w2[static_cast<size_t>(s) * K + k].add(v * v);
            }
        for (size_t p = 0; p < subset.size(); ++p) {
            const double wp = W.values(subset[p].first, subset[p].second).real() - center[p];
            for (size_t q = 0; q < subset.size(); ++q) {
                const double wq = W.values(subset[q].first, subset[q].second).real() - center[q];
                sum_pp[p * subset.size() + q].add(wp * wq);
            }
        }
    }

    void merge(const MomentAccumulator& o) {
        count += o.count;
        for (size_t i = 0; i < sum_w.size(); ++i) {
            sum_w[i].merge(o.sum_w[i]);
            sum_w2[i].merge(o.sum_w2[i]);
        }
        for (size_t i = 0; i < sum_pp.size(); ++i) sum_pp[i].merge(o.sum_pp[i]);
    }
};

/// Centered 4x4 (s, k) block, the default covariance subset.
inline std::vector<std::pair<int, int>> default_subset(const PhaseGrid& pg, int block = 4) {
    const int bs = std::min(block, pg.s_count());
    const int bk = std::min(block, pg.xi_count());
    const int s0 = (pg.s_count() - bs) / 2;
    const int k0 = (pg.xi_count() - bk) / 2;
    std::vector<std::pair<int, int>> pts;
    for (int s = s0; s < s0 + bs; ++s)
        for (int k = k0; k < k0 + bk; ++k) pts.emplace_back(s, k);
    return pts;
}

namespace detail {

/// Deterministic chunked accumulation: chunks are processed in parallel and
/// merged in index order, so the result is identical for every thread count.
template <class Sampler>
MomentAccumulator accumulate_paths(const Sampler& sampler, const PhaseGrid& pg, long count,
                                   uint64_t seed, std::vector<std::pair<int, int>> subset,
                                   std::vector<double> center) {
    constexpr long kChunk = 256;
    const long chunks = (count + kChunk - 1) / kChunk;
    std::vector<std::unique_ptr<MomentAccumulator>> parts(chunks);
    parallel_for(0, static_cast<int>(chunks), [&](int ci) {
        auto acc = std::make_unique<MomentAccumulator>(pg, subset, center, seed);
        const long lo = ci * kChunk, hi = std::min(count, lo + kChunk);
        for (long i = lo; i < hi; ++i)
            acc->add_field(wigner(sampler.path(static_cast<uint64_t>(i))));
        parts[ci] = std::move(acc);
    });
    MomentAccumulator total(pg, std::move(subset), std::move(center), seed);
    for (const auto& part : parts) total.merge(*part);
    return total;
}

}  // namespace detail

struct SpectrumEstimate {
    PhaseField mean;
    PhaseField stderr_field;
    long samples = 0;
};

/// Mean of wigner(u_i) over count paths with per-point standard errors;
/// unbiased for the discrete E W(u).
template <class ModelT>
SpectrumEstimate estimate_wigner_spectrum(const ModelT& model, long count, uint64_t seed) {
    if (count < 2) throw parameter_error("estimate_wigner_spectrum: need count >= 2");
    PhaseGrid pg;
    MomentAccumulator acc = [&] {
        if constexpr (std::is_same_v<ModelT, ProcessModel>) {
            pg = make_phase_grid(model.grid);
            return detail::accumulate_paths(make_path_sampler(model, seed), pg, count, seed, {}, {});
        } else {
            static_assert(std::is_same_v<ModelT, ShiftModel>);
            pg = make_phase_grid(model.f.grid);
            return detail::accumulate_paths(ShiftSampler{model, seed}, pg, count, seed, {}, {});
        }
    }();

    const int K = pg.xi_count();
    MatrixXcd mean(pg.s_count(), K), se(pg.s_count(), K);
    for (int s = 0; s < pg.s_count(); ++s)
        for (int k = 0; k < K; ++k) {
            const double sw = acc.sum_w[static_cast<size_t>(s) * K + k].value();
            const double sw2 = acc.sum_w2[static_cast<size_t>(s) * K + k].value();
            const double m = sw / count;
            const double var = std::max(0.0, (sw2 - count * m * m) / (count - 1));
            mean(s, k) = m;
            se(s, k) = std::sqrt(var / count);
        }
    return SpectrumEstimate{PhaseField{pg, std::move(mean)}, PhaseField{pg, std::move(se)},
                            count};
}

struct CovarianceEstimate {
    std::vector<std::pair<int, int>> subset;
    MatrixXcd cov;
    bool exact_centering = true;
    long samples = 0;
};

/**
 * Empirical Cov(W0[p], W0[q]) over the declared subset. Centering uses the
 * exact discrete mean (2 pi)^{-1/2} sigma_u of the model kernel, which is
 * available in closed form for every materialized model; the estimate is
 * then an unbiased mean of M rank-one forms (divide by M, not M-1).
 */
inline CovarianceEstimate estimate_wigner_covariance(const ProcessModel& model, long count,
                                                     uint64_t seed,
                                                     std::vector<std::pair<int, int>> subset) {
    if (count < 2) throw parameter_error("estimate_wigner_covariance: need count >= 2");
    if (subset.empty()) throw parameter_error("estimate_wigner_covariance: empty subset");
    const PhaseGrid pg = make_phase_grid(model.grid);
    const PhaseField ew = expected_wigner(model.kernel);
    std::vector<double> center(subset.size());
    for (size_t p = 0; p < subset.size(); ++p) {
        const auto& [s, k] = subset[p];
        if (s < 0 || s >= pg.s_count() || k < 0 || k >= pg.xi_count())
            throw parameter_error("estimate_wigner_covariance: subset point out of range");
        center[p] = ew.values(s, k).real();
    }
    MomentAccumulator acc = detail::accumulate_paths(make_path_sampler(model, seed), pg, count,
                                                     seed, subset, center);
    const size_t m = subset.size();
    MatrixXcd cov(m, m);
    for (size_t p = 0; p < m; ++p)
        for (size_t q = 0; q < m; ++q) cov(p, q) = acc.sum_pp[p * m + q].value() / count;
    return CovarianceEstimate{std::move(subset), std::move(cov), true, count};
}

/// Exact covariance restricted to a subset, the Monte Carlo reference.
inline MatrixXcd exact_covariance_subset(const CovTensor4& T,
                                         std::span<const std::pair<int, int>> subset) {
    MatrixXcd out(subset.size(), subset.size());
    for (size_t p = 0; p < subset.size(); ++p)
        for (size_t q = 0; q < subset.size(); ++q)
            out(p, q) = T.t.at(subset[p].first, subset[p].second, subset[q].first,
                               subset[q].second);
    return out;
}

struct ConvergenceRow {
    long samples = 0;
    double spectrum_rel_err = 0.0;
    double covariance_rel_err = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    bool errors_decrease = true;
};

inline double rel_frobenius(const MatrixXcd& a, const MatrixXcd& ref) {
    const double den = ref.norm();
    const double num = (a - ref).norm();
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

/// Errors of spectrum and covariance estimates against the exact references
/// for each sample count in m_list.
inline ConvergenceReport convergence_report(const ProcessModel& model,
                                            std::span<const long> m_list, uint64_t seed) {
    const PhaseGrid pg = make_phase_grid(model.grid);
    const PhaseField ew = expected_wigner(model.kernel);
    const CovTensor4 T = exact_wigner_covariance(model.kernel);
    const auto subset = default_subset(pg);
    const MatrixXcd cov_ref = exact_covariance_subset(T, subset);

    ConvergenceReport rep;
    for (long M : m_list) {
        const SpectrumEstimate se = estimate_wigner_spectrum(model, M, seed);
        const CovarianceEstimate ce = estimate_wigner_covariance(model, M, seed, subset);
        ConvergenceRow row;
        row.samples = M;
        row.spectrum_rel_err = rel_frobenius(se.mean.values, ew.values);
        row.covariance_rel_err = rel_frobenius(ce.cov, cov_ref);
        rep.rows.push_back(row);
    }
    for (size_t i = 1; i < rep.rows.size(); ++i) {
        if (rep.rows[i].spectrum_rel_err > rep.rows[i - 1].spectrum_rel_err ||
            rep.rows[i].covariance_rel_err > rep.rows[i - 1].covariance_rel_err)
            rep.errors_decrease = false;
    }
    return rep;
}

}  // namespace halfgrid

// gsp: command-line driver for the half-grid Wigner/Weyl calculus.
//
// Subcommands: kernel, wigner, weyl (quantize|dequantize|apply), spectrum,
// covariance, verify. Numeric outputs are CSV with 17 significant digits;
// every output directory gets exactly one manifest.json. Exit codes:
// 0 success, 1 verification failure, 2 usage error, 3 malformed input.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "halfgrid/halfgrid.hpp"
#include "halfgrid/io.hpp"

namespace fs = std::filesystem;
using namespace halfgrid;

namespace {

struct ProcessArgs {
    std::string process;
    double power = 0.0;
    bool has_power = false;
    std::string density_csv;
    std::string kernel_csv;
};

struct GridArgs {
    int n = 0;
    double dx = 0.0;
    double x0 = 0.0;
};

void add_process_flags(CLI::App* cmd, ProcessArgs& p) {
    cmd->add_option("--process", p.process, "white-noise|brownian|stationary|custom")
        ->required();
    cmd->add_option("--power", p.power, "white-noise power p > 0")
        ->each([&p](const std::string&) { p.has_power = true; });
    cmd->add_option("--density", p.density_csv, "spectral density table CSV (xi,value)");
    cmd->add_option("--kernel", p.kernel_csv, "covariance kernel CSV (custom process)");
}

void add_grid_flags(CLI::App* cmd, GridArgs& g) {
    cmd->add_option("--n", g.n, "grid point count (even)");
    cmd->add_option("--dx", g.dx, "grid spacing");
    cmd->add_option("--x0", g.x0, "grid left endpoint");
}

SpectralDensity read_density_table(const std::string& path) {
    const auto rows = io::read_csv_rows(path, 2);
    std::vector<double> xi, val;
    for (const auto& r : rows) {
        xi.push_back(r[0]);
        val.push_back(r[1]);
    }
    return SpectralDensity::from_table(std::move(xi), std::move(val));
}

ProcessModel build_model(const ProcessArgs& p, const GridArgs& g) {
    if (p.process == "custom") {
        if (p.kernel_csv.empty())
            throw parameter_error("--process custom requires --kernel <csv>");
        return custom_model(io::read_kernel(p.kernel_csv));
    }
    if (g.n == 0) throw parameter_error("--n, --dx, --x0 are required for this process");
    const Grid1D grid = make_grid(g.n, g.dx, g.x0);
    if (p.process == "white-noise") {
        if (!p.has_power) throw parameter_error("--process white-noise requires --power");
        return white_noise_model(grid, p.power);
    }
    if (p.process == "brownian") return brownian_model(grid);
    if (p.process == "stationary") {
        if (p.density_csv.empty())
            throw parameter_error("--process stationary requires --density <csv>");
        return stationary_model(grid, read_density_table(p.density_csv));
    }
    throw parameter_error("unknown process '" + p.process + "'");
}

io::ordered_json model_descriptor(const ProcessArgs& p) {
    io::ordered_json j;
    j["kind"] = p.process;
    if (p.has_power) j["power"] = p.power;
    if (!p.density_csv.empty()) j["density"] = p.density_csv;
    if (!p.kernel_csv.empty()) j["kernel"] = p.kernel_csv;
    return j;
}

std::string join_command_line(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        out += argv[i];
    }
    return out;
}

struct SubsetSpec {
    std::string text = "center4";

    std::vector<std::pair<int, int>> resolve(const PhaseGrid& pg) const {
        if (text == "center4") return default_subset(pg);
        // block:s0:k0:rows:cols
        if (text.rfind("block:", 0) == 0) {
            int s0, k0, rows, cols;
            if (std::sscanf(text.c_str(), "block:%d:%d:%d:%d", &s0, &k0, &rows, &cols) != 4)
                throw parameter_error("bad --subset spec '" + text + "'");
            if (s0 < 0 || k0 < 0 || rows < 1 || cols < 1 || s0 + rows > pg.s_count() ||
                k0 + cols > pg.xi_count())
                throw parameter_error("--subset block out of range");
            std::vector<std::pair<int, int>> pts;
            for (int s = s0; s < s0 + rows; ++s)
                for (int k = k0; k < k0 + cols; ++k) pts.emplace_back(s, k);
            return pts;
        }
        throw parameter_error("bad --subset spec '" + text + "' (center4 or block:s0:k0:r:c)");
    }
};

// ---------------------------------------------------------------------------
// verify suite
// ---------------------------------------------------------------------------

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool larger_is_fail = true;  // pass iff value <= tolerance (or >= when false)
    bool pass = false;
};

struct VerifyContext {
    std::vector<Check> checks;

    void leq(const std::string& name, double value, double tol) {
        checks.push_back({name, value, tol, true, value <= tol});
    }
    void geq(const std::string& name, double value, double tol) {
        checks.push_back({name, value, tol, false, value >= tol});
    }
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

MatrixXcd random_field_values(const PhaseGrid& pg, PathRng& rng) {
    MatrixXcd m(pg.s_count(), pg.xi_count());
    for (int s = 0; s < m.rows(); ++s)
        for (int k = 0; k < m.cols(); ++k) {
            auto [g1, g2] = rng.gaussian_pair();
            m(s, k) = cplx(g1, g2);
        }
    return m;
}

Signal random_signal_on(const Grid1D& g, PathRng& rng) {
    std::vector<cplx> v(g.n);
    for (auto& z : v) z = rng.circular_gaussian();
    return Signal{g, std::move(v)};
}

void run_identities_suite(VerifyContext& ctx, const Grid1D& grid, uint64_t seed) {
    const PhaseGrid pg = make_phase_grid(grid);
    PathRng rng(seed, 0xA11CE);

    double worst_pairing = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const PhaseField sigma{pg, random_field_values(pg, rng)};
        const Signal f = random_signal_on(grid, rng);
        const Signal g2 = random_signal_on(grid, rng);
        double fn = 0, gn = 0;
        for (auto& z : f.values) fn += std::norm(z);
        for (auto& z : g2.values) gn += std::norm(z);
        const double scale = sigma.values.norm() * std::sqrt(fn * gn) + 1e-300;
        worst_pairing = std::max(worst_pairing, pairing_defect(sigma, f, g2) / scale);
    }
    ctx.leq("pairing-defect-normalized", worst_pairing, 1e-11);

    MatrixXcd K(grid.n, grid.n);
    for (int a = 0; a < grid.n; ++a)
        for (int b = 0; b < grid.n; ++b) K(a, b) = rng.circular_gaussian();
    const Kernel kern{grid, K};
    const Kernel back = symbol_to_kernel(kernel_to_symbol(kern));
    ctx.leq("kernel-symbol-round-trip", (back.values - K).norm() / K.norm(), 1e-12);

    CovTensor4 T = make_cov_tensor4(pg);
    for (auto& z : T.t.v) z = rng.circular_gaussian();
    const CovTensor4 tback = symbol4_to_kernel4(kernel4_to_symbol4(T));
    double num = 0, den = 0;
    for (size_t i = 0; i < T.t.v.size(); ++i) {
        num += std::norm(tback.t.v[i] - T.t.v[i]);
        den += std::norm(T.t.v[i]);
    }
    ctx.leq("kernel4-symbol4-round-trip", std::sqrt(num / den), 1e-12);

    double worst_marg = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        const Signal f = random_signal_on(grid, rng);
        const auto marg = time_marginal(wigner(f));
        for (int a = 0; a < grid.n; ++a)
            worst_marg = std::max(
                worst_marg, std::abs(marg[a] - sqrt_2pi * std::norm(f.values[a])));
    }
    ctx.leq("wigner-marginal", worst_marg, 1e-11);

    const Signal f = random_signal_on(grid, rng);
    const FreqSignal F = dft(f);
    double ef = 0, eF = 0;
    for (auto& z : f.values) ef += std::norm(z);
    for (auto& z : F.values) eF += std::norm(z);
    ctx.leq("parseval", std::abs(eF * F.grid.dx - ef * grid.dx) / (ef * grid.dx), 1e-12);

    std::vector<int> js;
    for (int j = -(grid.n - 2); j <= grid.n - 2; j += 2) js.push_back(j);
    std::vector<cplx> cs(js.size());
    for (auto& z : cs) z = rng.circular_gaussian();
    const auto row = row_transform_forward(js, cs, grid.n);
    const auto invd = row_transform_inverse(row, js, grid.n);
    double worst_rt = 0;
    for (size_t i = 0; i < cs.size(); ++i)
        worst_rt = std::max(worst_rt, std::abs(invd[i] - cs[i]));
    ctx.leq("row-transform-round-trip", worst_rt, 1e-12);
}

void run_theorem_suite(VerifyContext& ctx, const ProcessModel& model,
                       const std::string& name) {
    const TheoremReport rep = theorem_check(model);
    double tol = 0.1;
    if (model.kind == ProcessModel::Kind::WhiteNoise) tol = 1e-2;
    ctx.leq("theorem-rel-error-interior[" + name + "]", rep.rel_error_interior, tol);
    if (model.kind == ProcessModel::Kind::Stationary) {
        ctx.leq("theorem-axis1-variation[" + name + "]", rep.axis_variation[0], 1e-2);
        ctx.leq("theorem-axis4-variation[" + name + "]", rep.axis_variation[3], 1e-2);
    }
}

void run_nonneg_suite(VerifyContext& ctx, uint64_t seed) {
    const Grid1D g = make_grid(48, 0.35, -8.4);
    const Signal gauss = sample_signal(g, [](double x) { return std::exp(-0.5 * x * x); });
    const double nrm = std::sqrt(std::sqrt(pi) / 2.0);
    const Signal herm =
        sample_signal(g, [&](double x) { return x * std::exp(-0.5 * x * x) / nrm; });
    const Signal twog = sample_signal(g, [](double x) {
        return std::exp(-0.5 * (x - 2) * (x - 2)) + std::exp(-0.5 * (x + 2) * (x + 2));
    });

    auto field_min_ratio = [](const PhaseField& F) {
        double mn = 0, mx = max_abs(F.values);
        for (int s = 0; s < F.values.rows(); ++s)
            for (int k = 0; k < F.values.cols(); ++k)
                mn = std::min(mn, F.values(s, k).real());
        return mx == 0 ? 0.0 : mn / mx;
    };

    ctx.geq("hudson-gaussian-min", field_min_ratio(wigner(gauss)), -1e-9);
    ctx.leq("hudson-hermite1-witness", field_min_ratio(wigner(herm)), -0.01);

    int idx = 0;
    for (const Signal* f : {&gauss, &herm, &twog}) {
        const PhaseField S = shift_spectrum(make_shift_model(*f, 0.5, 0.5));
        ctx.geq("shift-ab-0.25-min[" + std::to_string(idx++) + "]", field_min_ratio(S),
                -1e-6);
    }
    const PhaseField low = shift_spectrum(make_shift_model(herm, std::sqrt(0.05), std::sqrt(0.05)));
    ctx.leq("shift-ab-0.05-negativity-witness", field_min_ratio(low), -0.01);

    // section-8 proposition: b built from symbols of random PSD kernels
    const Grid1D g8 = make_grid(8, 0.5, -2.0);
    const PhaseGrid pg8 = make_phase_grid(g8);
    PathRng rng(seed, 0xB0B);
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        MatrixXcd m(8, 8);
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) m(a, b) = rng.circular_gaussian();
        const Kernel K{g8, MatrixXcd(m * m.adjoint() / 8.0)};
        const SymbolEvaluator a = interpolated_evaluator(kernel_to_symbol(K));
        const CovTensor4 Tb = symbol4_to_kernel4(build_b_symbol(a, pg8));
        const MatrixXcd M = flatten_phase_operator(Tb);
        const MatrixXcd H = 0.5 * (M + M.adjoint());
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H, Eigen::EigenvaluesOnly);
        worst = std::min(worst, es.eigenvalues().minCoeff() / es.eigenvalues().maxCoeff());
    }
    ctx.geq("b-symbol-psd-defect-ratio", worst, -1e-6);
}

int run_verify(const std::string& suite, const ProcessArgs& pargs, const GridArgs& gargs,
               uint64_t seed, const std::string& report_path) {
    VerifyContext ctx;
    GridArgs g = gargs;
    if (g.n == 0) {
        g.n = 16;
        g.dx = 0.5;
        g.x0 = -4.0;
    }
    const Grid1D grid = make_grid(g.n, g.dx, g.x0);

    if (suite == "identities" || suite == "all") run_identities_suite(ctx, grid, seed);
    if (suite == "theorem" || suite == "all") {
        if (!pargs.process.empty()) {
            run_theorem_suite(ctx, build_model(pargs, g), pargs.process);
        } else {
            run_theorem_suite(ctx, brownian_model(make_grid(g.n, 0.25, -2.0)), "brownian");
            const SpectralDensity mu = SpectralDensity::from_function(
                [](double xi) { return sqrt_2pi * std::exp(-0.5 * xi * xi); });
            run_theorem_suite(ctx, stationary_model(grid, mu), "stationary");
        }
    }
    if (suite == "nonneg" || suite == "all") run_nonneg_suite(ctx, seed);
    if (ctx.checks.empty()) throw parameter_error("unknown suite '" + suite + "'");

    for (const auto& c : ctx.checks) {
        std::printf("[%s] %-42s value=%.6g tol=%s%.6g\n", c.pass ? " PASS " : " FAIL ",
                    c.name.c_str(), c.value, c.larger_is_fail ? "<=" : ">=", c.tolerance);
    }
    if (!report_path.empty()) {
        io::ordered_json j;
        j["suite"] = suite;
        j["checks"] = io::ordered_json::array();
        for (const auto& c : ctx.checks)
            j["checks"].push_back({{"name", c.name},
                                   {"value", c.value},
                                   {"tolerance", c.tolerance},
                                   {"comparison", c.larger_is_fail ? "leq" : "geq"},
                                   {"pass", c.pass}});
        j["all_pass"] = ctx.all_pass();
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw input_error("cannot write report " + report_path);
        out << j.dump(2) << "\n";
    }
    std::printf("%s\n", ctx.all_pass() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT");
    return ctx.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"half-grid Wigner/Weyl calculus for Gaussian symmetric processes"};
    app.require_subcommand(1);
    const std::string command_line = join_command_line(argc, argv);

    // ---- kernel ----
    auto* cmd_kernel = app.add_subcommand("kernel", "materialize a covariance kernel");
    ProcessArgs kernel_p;
    GridArgs kernel_g;
    std::string kernel_out;
    add_process_flags(cmd_kernel, kernel_p);
    add_grid_flags(cmd_kernel, kernel_g);
    cmd_kernel->add_option("--out", kernel_out, "output directory")->required();

    // ---- wigner ----
    auto* cmd_wigner = app.add_subcommand("wigner", "Wigner / cross-Wigner distribution");
    std::string wig_signal, wig_signal2, wig_out;
    cmd_wigner->add_option("--signal", wig_signal, "signal CSV")->required();
    cmd_wigner->add_option("--signal2", wig_signal2, "second signal CSV (cross-Wigner)");
    cmd_wigner->add_option("--out", wig_out, "output directory")->required();

    // ---- weyl ----
    auto* cmd_weyl = app.add_subcommand("weyl", "Weyl quantization operations");
    cmd_weyl->require_subcommand(1);
    std::string weyl_symbol, weyl_kernel, weyl_signal, weyl_out;
    auto* weyl_q = cmd_weyl->add_subcommand("quantize", "symbol -> kernel");
    weyl_q->add_option("--symbol", weyl_symbol)->required();
    weyl_q->add_option("--out", weyl_out)->required();
    auto* weyl_d = cmd_weyl->add_subcommand("dequantize", "kernel -> symbol");
    weyl_d->add_option("--kernel", weyl_kernel)->required();
    weyl_d->add_option("--out", weyl_out)->required();
    auto* weyl_a = cmd_weyl->add_subcommand("apply", "apply sigma^w to a signal");
    weyl_a->add_option("--symbol", weyl_symbol)->required();
    weyl_a->add_option("--signal", weyl_signal)->required();
    weyl_a->add_option("--out", weyl_out)->required();

    // ---- spectrum ----
    auto* cmd_spectrum = app.add_subcommand("spectrum", "Wigner spectrum (exact or MC)");
    ProcessArgs spec_p;
    GridArgs spec_g;
    std::string spec_out;
    bool spec_exact = false, spec_mc = false;
    long spec_samples = 0;
    uint64_t spec_seed = 1;
    add_process_flags(cmd_spectrum, spec_p);
    add_grid_flags(cmd_spectrum, spec_g);
    cmd_spectrum->add_flag("--exact", spec_exact, "exact discrete spectrum");
    cmd_spectrum->add_flag("--mc", spec_mc, "Monte Carlo estimate");
    cmd_spectrum->add_option("--samples", spec_samples, "MC sample count");
    cmd_spectrum->add_option("--seed", spec_seed, "MC seed");
    cmd_spectrum->add_option("--out", spec_out, "output directory")->required();

    // ---- covariance ----
    auto* cmd_cov = app.add_subcommand("covariance", "covariance of the zero-mean Wigner field");
    ProcessArgs cov_p;
    GridArgs cov_g;
    std::string cov_out;
    bool cov_exact = false, cov_mc = false;
    long cov_samples = 0;
    uint64_t cov_seed = 1;
    SubsetSpec cov_subset;
    add_process_flags(cmd_cov, cov_p);
    add_grid_flags(cmd_cov, cov_g);
    cmd_cov->add_flag("--exact", cov_exact, "exact Wick-propagated symbol tensor");
    cmd_cov->add_flag("--mc", cov_mc, "Monte Carlo subset estimate");
    cmd_cov->add_option("--samples", cov_samples, "MC sample count");
    cmd_cov->add_option("--seed", cov_seed, "MC seed");
    cmd_cov->add_option("--subset", cov_subset.text, "center4 or block:s0:k0:rows:cols");
    cmd_cov->add_option("--out", cov_out, "output directory")->required();

    // ---- verify ----
    auto* cmd_verify = app.add_subcommand("verify", "run verification suites");
    std::string verify_suite = "all", verify_report;
    ProcessArgs verify_p;
    GridArgs verify_g;
    uint64_t verify_seed = 1;
    cmd_verify->add_option("--suite", verify_suite, "identities|theorem|nonneg|all");
    add_grid_flags(cmd_verify, verify_g);
    cmd_verify->add_option("--process", verify_p.process, "model for the theorem suite");
    cmd_verify->add_option("--power", verify_p.power)
        ->each([&verify_p](const std::string&) { verify_p.has_power = true; });
    cmd_verify->add_option("--density", verify_p.density_csv);
    cmd_verify->add_option("--kernel", verify_p.kernel_csv);
    cmd_verify->add_option("--seed", verify_seed);
    cmd_verify->add_option("--report", verify_report, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_kernel->parsed()) {
            const ProcessModel model = build_model(kernel_p, kernel_g);
            fs::create_directories(kernel_out);
            io::write_kernel(fs::path(kernel_out) / "kernel.csv", model.kernel);
            io::RunManifest m;
            m.grid = model.grid;
            m.model = model_descriptor(kernel_p);
            m.command_line = command_line;
            io::write_manifest(kernel_out, m);
        } else if (cmd_wigner->parsed()) {
            const Signal f = io::read_signal(wig_signal);
            PhaseField W = [&] {
                if (wig_signal2.empty()) return wigner(f);
                const Signal g2 = io::read_signal(wig_signal2);
                if (!(g2.grid == f.grid))
                    throw input_error("signal grids do not match");
                return cross_wigner(g2, f);
            }();
            fs::create_directories(wig_out);
            io::write_phase_field(fs::path(wig_out) / "field.csv", W);
            io::RunManifest m;
            m.grid = f.grid;
            m.model = {{"kind", wig_signal2.empty() ? "wigner" : "cross-wigner"}};
            m.command_line = command_line;
            io::write_manifest(wig_out, m);
        } else if (cmd_weyl->parsed()) {
            fs::create_directories(weyl_out);
            io::RunManifest m;
            m.command_line = command_line;
            if (weyl_q->parsed()) {
                const PhaseField sigma = io::read_phase_field(weyl_symbol);
                const Kernel K = symbol_to_kernel(sigma);
                io::write_kernel(fs::path(weyl_out) / "kernel.csv", K);
                m.grid = K.grid;
                m.model = {{"kind", "weyl-quantize"}};
            } else if (weyl_d->parsed()) {
                const Kernel K = io::read_kernel(weyl_kernel);
                io::write_phase_field(fs::path(weyl_out) / "symbol.csv", kernel_to_symbol(K));
                m.grid = K.grid;
                m.model = {{"kind", "weyl-dequantize"}};
            } else {
                const PhaseField sigma = io::read_phase_field(weyl_symbol);
                const Signal f = io::read_signal(weyl_signal);
                if (!(f.grid == sigma.pgrid.base))
                    throw input_error("signal grid does not match symbol grid");
                io::write_signal(fs::path(weyl_out) / "signal.csv", apply_weyl(sigma, f));
                m.grid = f.grid;
                m.model = {{"kind", "weyl-apply"}};
            }
            io::write_manifest(weyl_out, m);
        } else if (cmd_spectrum->parsed()) {
            if (spec_exact == spec_mc)
                throw parameter_error("spectrum: choose exactly one of --exact / --mc");
            const ProcessModel model = build_model(spec_p, spec_g);
            fs::create_directories(spec_out);
            io::RunManifest m;
            m.grid = model.grid;
            m.model = model_descriptor(spec_p);
            m.command_line = command_line;
            if (spec_exact) {
                io::write_phase_field(fs::path(spec_out) / "spectrum.csv",
                                      expected_wigner(model.kernel));
            } else {
                if (spec_samples < 2) throw parameter_error("--mc requires --samples >= 2");
                const SpectrumEstimate est =
                    estimate_wigner_spectrum(model, spec_samples, spec_seed);
                io::write_phase_field(fs::path(spec_out) / "spectrum.csv", est.mean);
                io::write_phase_field(fs::path(spec_out) / "stderr.csv", est.stderr_field);
                m.seed = spec_seed;
                m.samples = spec_samples;
            }
            io::write_manifest(spec_out, m);
        } else if (cmd_cov->parsed()) {
            if (cov_exact == cov_mc)
                throw parameter_error("covariance: choose exactly one of --exact / --mc");
            const ProcessModel model = build_model(cov_p, cov_g);
            const PhaseGrid pg = make_phase_grid(model.grid);
            fs::create_directories(cov_out);
            io::RunManifest m;
            m.grid = model.grid;
            m.model = model_descriptor(cov_p);
            m.command_line = command_line;
            if (cov_exact) {
                const Symbol4 S = kernel4_to_symbol4(exact_wigner_covariance(model.kernel));
                io::write_tensor4(fs::path(cov_out) / "sigma_w.csv", S.t);
                m.model["tensor_axes"] = {
                    {"a1", "x1 midpoint axis, spacing dx/4"},
                    {"a2", "x2 midpoint axis, spacing dxi/2"},
                    {"a3", "xi1 axis, spacing 2*pi/((2n-1)*dx)"},
                    {"a4", "xi2 axis, spacing dx"}};
            } else {
                if (cov_samples < 2) throw parameter_error("--mc requires --samples >= 2");
                const auto subset = cov_subset.resolve(pg);
                const CovarianceEstimate est =
                    estimate_wigner_covariance(model, cov_samples, cov_seed, subset);
                std::vector<std::string> lines;
                for (size_t p = 0; p < subset.size(); ++p)
                    for (size_t q = 0; q < subset.size(); ++q)
                        lines.push_back(std::to_string(subset[p].first) + "," +
                                        std::to_string(subset[p].second) + "," +
                                        std::to_string(subset[q].first) + "," +
                                        std::to_string(subset[q].second) + "," +
                                        io::fmt17(est.cov(p, q).real()) + "," +
                                        io::fmt17(est.cov(p, q).imag()));
                io::write_lines(fs::path(cov_out) / "cov.csv", "s1,k1,s2,k2,re,im", lines);
                m.seed = cov_seed;
                m.samples = cov_samples;
                m.model["subset"] = cov_subset.text;
                m.model["centering"] = est.exact_centering ? "exact" : "empirical";
            }
            io::write_manifest(cov_out, m);
        } else if (cmd_verify->parsed()) {
            return run_verify(verify_suite, verify_p, verify_g, verify_seed, verify_report);
        }
    } catch (const parameter_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const model_error& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const contract_error& e) {
        std::cerr << "contract error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

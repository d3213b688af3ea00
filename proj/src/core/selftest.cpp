#include "core/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <vector>

#include "core/accuracy_bounds.hpp"
#include "core/alcc_core.hpp"
#include "core/errors.hpp"
#include "core/lcc_baseline.hpp"
#include "core/linalg.hpp"
#include "core/polyfun.hpp"
#include "core/privacy_bounds.hpp"
#include "core/rng.hpp"
#include "core/simulator.hpp"
#include "core/transforms.hpp"

namespace alcc {
namespace {

void expect(bool cond, const char* what) {
    if (!cond) throw std::runtime_error(what);
}

bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool close_rel(double a, double b, double tol) {
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= tol * std::max(scale, 1e-300);
}

struct Battery {
    SelftestResult res;

    void check(const char* name, const std::function<void()>& body) {
        try {
            body();
            ++res.passed;
            res.report += "PASS ";
            res.report += name;
            res.report += "\n";
        } catch (const std::exception& e) {
            ++res.failed;
            res.report += "FAIL ";
            res.report += name;
            res.report += " (";
            res.report += e.what();
            res.report += ")\n";
        }
    }
};

AlccParams small_params() {
    AlccParams p;
    p.k = 2;
    p.t = 1;
    p.s = 0;
    p.degree = 1;
    p.beta = 1.5;
    p.sigma_n = 0.0;
    p.theta = 3.0;
    p.r = 4.0;
    p.m = 2;
    p.n = 3;
    p.seed = 7;
    return p;
}

RMatrix ramp_matrix(std::size_t rows, std::size_t cols, double base) {
    RMatrix x(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            x(i, j) = base + 0.25 * static_cast<double>(i * cols + j);
    return x;
}

} // namespace

SelftestResult run_selftest() {
    Battery b;

    b.check("dft of an impulse is flat", [] {
        std::vector<cplx> v = {cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)};
        auto out = dft(v);
        expect(out.size() == 4, "length changed");
        for (const auto& z : out)
            expect(std::abs(z - cplx(1.0, 0.0)) <= 1e-12, "entry differs from 1");
    });

    b.check("dft of a constant concentrates at slot zero", [] {
        std::vector<cplx> v(8, cplx(2.5, 0.0));
        auto out = dft(v);
        expect(std::abs(out[0] - cplx(20.0, 0.0)) <= 1e-12, "dc slot wrong");
        for (std::size_t l = 1; l < out.size(); ++l)
            expect(std::abs(out[l]) <= 1e-12, "nonzero leakage outside slot zero");
    });

    b.check("vandermonde solve at fourth roots recovers coefficients", [] {
        auto nodes = roots_of_unity(4);
        std::vector<cplx> c = {cplx(1.0, 0.0), cplx(-2.0, 0.0), cplx(0.5, 0.0), cplx(3.0, 0.0)};
        CMatrix rhs(4, 1);
        for (std::size_t i = 0; i < 4; ++i) {
            cplx acc(0.0, 0.0), pw(1.0, 0.0);
            for (std::size_t l = 0; l < 4; ++l) {
                acc += c[l] * pw;
                pw *= nodes[i];
            }
            rhs(i, 0) = acc;
        }
        CMatrix sol = solve_vandermonde(nodes, rhs);
        for (std::size_t l = 0; l < 4; ++l)
            expect(std::abs(sol(l, 0) - c[l]) <= 1e-12, "coefficient mismatch");
    });

    b.check("vandermonde with a repeated node reports a singular system", [] {
        std::vector<cplx> nodes = {cplx(1.0, 0.0), cplx(1.0, 0.0)};
        CMatrix rhs(2, 1);
        rhs(0, 0) = cplx(1.0, 0.0);
        rhs(1, 0) = cplx(2.0, 0.0);
        try {
            solve_vandermonde(nodes, rhs);
        } catch (const Error& e) {
            expect(e.code() == errc::singular_system, "wrong error code");
            return;
        }
        expect(false, "no error raised");
    });

    b.check("condition number of a single node is one", [] {
        std::vector<cplx> nodes = {cplx(1.0, 0.0)};
        expect(close_abs(condition_number(nodes), 1.0, 1e-12), "not 1.0");
    });

    b.check("zero noise level draws the zero matrix", [] {
        std::mt19937_64 rng(42);
        ComplexGaussianSpec spec;
        spec.sigma = 0.0;
        spec.theta = 3.0;
        CMatrix z = sample_truncated_complex_gaussian(spec, 3, 4, rng);
        for (std::size_t i = 0; i < z.rows(); ++i)
            for (std::size_t j = 0; j < z.cols(); ++j)
                expect(z(i, j) == cplx(0.0, 0.0), "nonzero entry");
    });

    b.check("identical seeds draw bit-identical noise", [] {
        ComplexGaussianSpec spec;
        spec.sigma = 2.0;
        spec.theta = 3.0;
        std::mt19937_64 a(99), c(99);
        CMatrix x = sample_truncated_complex_gaussian(spec, 4, 4, a);
        CMatrix y = sample_truncated_complex_gaussian(spec, 4, 4, c);
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t j = 0; j < x.cols(); ++j)
                expect(x(i, j) == y(i, j), "draw differs");
    });

    b.check("lagrange basis hits one at its own support point", [] {
        AlccParams p = small_params();
        p.k = 3;
        p.t = 2;
        auto betas = p.beta_points();
        for (std::size_t j = 0; j < betas.size(); ++j)
            expect(std::abs(lagrange_basis(p, j, betas[j]) - cplx(1.0, 0.0)) <= 1e-12,
                   "basis value differs from 1");
    });

    b.check("single data block with no noise copies through every share", [] {
        AlccParams p = small_params();
        p.k = 1;
        p.t = 0;
        p.s = 2;
        RMatrix x = ramp_matrix(p.m, p.n, -1.0);
        ShareSet sh = encode(p, {x});
        expect(sh.shares.size() == p.workers(), "share count");
        for (const auto& [idx, mat] : sh.shares) {
            (void)idx;
            for (std::size_t i = 0; i < x.rows(); ++i)
                for (std::size_t j = 0; j < x.cols(); ++j)
                    expect(mat(i, j) == cplx(x(i, j), 0.0), "share differs from the block");
        }
    });

    b.check("zero-noise identity roundtrip recovers the batch", [] {
        AlccParams p = small_params();
        MatrixBatch batch = {ramp_matrix(p.m, p.n, -2.0), ramp_matrix(p.m, p.n, 0.5)};
        ShareSet sh = encode(p, batch);
        EvalSet ev;
        ev.rows = p.m;
        ev.cols = p.n;
        ev.poly_degree = 1;
        for (const auto& [idx, mat] : sh.shares) ev.results.emplace_back(idx, mat);
        DecodeResult dec = decode(p, ev);
        for (std::size_t jb = 0; jb < p.k; ++jb)
            for (std::size_t i = 0; i < p.m; ++i)
                for (std::size_t j = 0; j < p.n; ++j)
                    expect(close_abs(dec.blocks[jb](i, j), batch[jb](i, j), 1e-9),
                           "recovered entry off");
    });

    b.check("degree-zero interpolation matrix is the scalar one", [] {
        AlccParams p = small_params();
        p.k = 1;
        p.t = 0;
        p.s = 0;
        CMatrix d = decoding_matrix(p, {0});
        expect(d.rows() == 1 && d.cols() == 1, "shape");
        expect(std::abs(d(0, 0) - cplx(1.0, 0.0)) <= 1e-15, "value");
    });

    b.check("gram preset squares a known matrix", [] {
        PolyFn f = PolyFn::preset("gram");
        CMatrix x(2, 2);
        x(0, 0) = cplx(1.0, 0.0);
        x(0, 1) = cplx(2.0, 0.0);
        x(1, 0) = cplx(3.0, 0.0);
        x(1, 1) = cplx(4.0, 0.0);
        CMatrix g = f.eval(x);
        double want[2][2] = {{10.0, 14.0}, {14.0, 20.0}};
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                expect(close_abs(g(i, j).real(), want[i][j], 1e-12) &&
                           std::abs(g(i, j).imag()) <= 1e-12,
                       "product entry off");
    });

    b.check("identity preset has degree one and unit growth constants", [] {
        PolyFn f = PolyFn::preset("identity");
        auto bd = f.degree_and_bounds(5, 7);
        expect(bd.degree == 1, "degree");
        expect(bd.c == 1.0, "growth constant");
        expect(bd.s_a == 1.0, "coefficient sum");
    });

    b.check("no noise slots means zero leakage bound", [] {
        AlccParams p = small_params();
        p.t = 0;
        p.s = 2;
        p.sigma_n = 0.0;
        PrivacyReport rep = mis_bound(p);
        expect(rep.eta_c_bound == 0.0, "nonzero leakage with no colluders tolerated");
        expect(rep.eta_s_bound == 0.0, "nonzero ds bound");
    });

    b.check("ds bound follows the square-root law", [] {
        expect(ds_bound_from(0.0) == 0.0, "zero case");
        expect(close_abs(ds_bound_from(2.0), 2.0, 1e-15), "eta_c=2 case");
        expect(close_abs(ds_bound_from(8.0), 4.0, 1e-15), "eta_c=8 case");
    });

    b.check("mean share distance limits at both extreme radii", [] {
        AlccParams p = small_params();
        p.k = 4;
        p.t = 4;
        p.r = 2.0;
        p.beta = 1e12;
        double kr_over = static_cast<double>(p.k) * p.r / static_cast<double>(p.k + p.t);
        expect(close_rel(d_mean_bound(p), kr_over, 1e-9), "large-radius limit");
        p.beta = 1.0;
        expect(close_rel(d_mean_bound(p), static_cast<double>(p.k) * p.r, 1e-12),
               "unit-radius value");
    });

    b.check("truncation correction vanishes for a generous threshold", [] {
        AlccParams p = small_params();
        p.t = 1;
        p.sigma_n = 1e9;
        p.theta = 40.0;
        double eta_s = 1.25;
        expect(close_rel(truncated_ds_bound(p, eta_s), eta_s, 1e-12), "correction did not vanish");
    });

    b.check("interpolation growth factor at unit radius", [] {
        expect(close_abs(beta_bar(1.0, 4), 3.0, 1e-12), "closed form at beta=1");
    });

    b.check("straggler conditioning cap matches the odd-size power", [] {
        double cap = kappa_straggler_bound(16, 0);
        expect(close_rel(cap, 24137569.0, 1e-12), "17^6 expected");
    });

    b.check("quantizer fixes zero and minus one step", [] {
        bool flag = false;
        field::u64 p = 97;
        expect(quantize_value(0.0, 0.5, p, flag) == 0, "zero maps to zero");
        expect(quantize_value(-0.5, 0.5, p, flag) == p - 1, "minus one step maps to p-1");
        expect(!flag, "overflow flagged for tiny values");
    });

    b.check("fixed-point shares of a single block equal its quantization", [] {
        LccParams p;
        p.k = 1;
        p.t = 0;
        p.s = 2;
        p.degree = 1;
        p.p = 97;
        p.bits = 16;
        p.delta = 0.5;
        p.mode = LccMode::modular;
        p.m = 2;
        p.n = 3;
        p.seed = 5;
        RMatrix x = ramp_matrix(2, 3, -1.0);
        bool flag = false;
        FMatrix q = quantize_matrix(x, p.delta, p.p, flag);
        LccShareSet sh = lcc_encode(p, {x});
        expect(!sh.input_overflow, "overflow flagged");
        for (const auto& [idx, mat] : sh.shares) {
            (void)idx;
            for (std::size_t a = 0; a < q.size(); ++a)
                expect(mat.data()[a] == q.data()[a], "share digit differs");
        }
    });

    b.check("simulator zero-noise identity run is numerically exact", [] {
        ExperimentConfig cfg;
        cfg.protocol = "alcc";
        cfg.function = "identity";
        cfg.k = 2;
        cfg.t = 1;
        cfg.s = 0;
        cfg.m_total = 8;
        cfg.n = 3;
        cfg.beta = 1.5;
        cfg.sigma_n = 0.0;
        cfg.trials = 1;
        cfg.seed = 11;
        ExperimentResult res = run_experiment(cfg);
        expect(res.e_rel_mean <= 1e-9, "relative error too large");
    });

    char line[64];
    std::snprintf(line, sizeof line, "%zu passed, %zu failed\n", b.res.passed, b.res.failed);
    b.res.report += line;
    return b.res;
}

} // namespace alcc

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ltlab/brownian.hpp"
#include "ltlab/chaos.hpp"
#include "ltlab/experiment.hpp"
#include "ltlab/gaussian.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/riesz.hpp"
#include "ltlab/rng.hpp"
#include "ltlab/simplex.hpp"
#include "ltlab/variance.hpp"

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    std::string detail;
    bool ok = true;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void finish() {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", id, secs,
                    detail.empty() ? "" : ": ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }
};

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

const ltl::QuadratureConfig q{};

void criterion_1() {
    using namespace ltl;
    Criterion c{1, ""};
    // derivative formula against a finite-difference ladder on a (t, y) grid
    double worst = 0.0;
    for (int n = 1; n <= 10; ++n)
        for (double t : {0.2, 0.7, 1.3})
            for (double y : {-2.2, -0.9, 0.0, 0.6, 1.8, 3.0}) {
                double step = 2e-5 * std::sqrt(t);
                double fd = (heat_kernel_deriv(n - 1, t, y + step) -
                             heat_kernel_deriv(n - 1, t, y - step)) /
                            (2.0 * step);
                double exact = heat_kernel_deriv(n, t, y);
                double scale = std::max(std::abs(exact),
                                        factorial(n) * std::pow(t, -0.5 * n) * 1e-3);
                worst = std::max(worst, std::abs(fd - exact) / scale);
            }
    c.expect(worst < 1e-6, "derivative ladder worst rel " + std::to_string(worst));
    for (int m = 0; m <= 10; ++m)
        c.expect(hermite(2 * m, 0.0) == hermite_even_at_zero(m),
                 "even value at zero, m=" + std::to_string(m));
    c.finish();
}

void criterion_2() {
    using namespace ltl;
    Criterion c{2, ""};
    struct Case {
        int n;
        double t, mean, var;
    };
    const Case cases[5] = {{0, 1.0, 0.0, 1.0},
                           {2, 0.5, 0.3, 0.7},
                           {1, 0.7, -0.4, 0.2},
                           {4, 0.3, 0.0, 1.0},
                           {3, 0.5, 0.5, 0.5}};
    int idx = 0;
    for (const Case& k : cases) {
        auto gen = substream(909, static_cast<std::uint64_t>(idx++));
        std::normal_distribution<double> nd(k.mean, std::sqrt(k.var));
        Accumulator acc;
        for (int i = 0; i < 1000000; ++i) acc.add(heat_kernel_deriv(k.n, k.t, nd(gen)));
        double exact = expected_heat_deriv(k.n, k.t, k.mean, k.var);
        c.expect(close_rel(acc.mean(), exact, 0.01),
                 "case n=" + std::to_string(k.n) + " mc=" + std::to_string(acc.mean()) +
                     " exact=" + std::to_string(exact));
    }
    c.finish();
}

void criterion_3() {
    using namespace ltl;
    Criterion c{3, ""};
    // (i) squared norm varies < 0.5% across h for each beta (spatial route;
    // the fourier route is h-free by construction and anchors the value)
    for (double beta : {0.6, 0.75, 0.9}) {
        std::vector<double> spatial;
        double fourier = 0.0;
        for (double h : {1e-1, 1e-2, 1e-3}) {
            auto n = g_h_l2_norm({beta, h, std::nullopt}, q);
            spatial.push_back(n.spatial);
            fourier = n.fourier;
        }
        double lo = *std::min_element(spatial.begin(), spatial.end());
        double hi = *std::max_element(spatial.begin(), spatial.end());
        c.expect((hi - lo) / hi < 0.005, "norm spread at beta=" + std::to_string(beta));
        c.expect(close_rel(spatial[0], fourier, 0.005),
                 "route gap at beta=" + std::to_string(beta));
    }
    // (iii) closed form against the fourier oracle at 20 points
    {
        RieszSpec spec{0.75, 0.05, std::nullopt};
        for (int i = 0; i < 20; ++i) {
            double x = 0.015 + 0.16 * i;
            double cf = g_h_eval(spec, x, q).value;
            double ft = g_h_fourier_transform(spec, x, q);
            if (!close_rel(cf, ft, 1e-3))
                c.expect(false, "point x=" + std::to_string(x));
        }
    }
    // (ii) pairing bound shape: value*t^{beta/2}/h^{beta-1/2} bounded across the sweep
    {
        double cap = 0.0, floor_v = 1e300;
        for (double h : {1e-1, 1e-2, 1e-3})
            for (double t : {0.25, 1.0, 4.0}) {
                double v = g_h_heat_pairing({0.75, h, std::nullopt}, t, q);
                double shaped = v * std::pow(t, 0.375) / std::pow(h, 0.25);
                cap = std::max(cap, shaped);
                floor_v = std::min(floor_v, shaped);
            }
        c.expect(cap / floor_v < 1.6, "pairing shape band " + std::to_string(cap / floor_v));
    }
    c.finish();
}

void criterion_4() {
    using namespace ltl;
    Criterion c{4, ""};
    const std::vector<double> hs{1e-2, 1e-3, 1e-4, 1e-5};
    for (int m : {1, 2}) {
        for (double s : {0.5, 1.0}) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (double h : hs) {
                double x = std::log(1.0 / h), y = a_of_h(m, h, s, q);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            double np = static_cast<double>(hs.size());
            double A = (np * sxy - sx * sy) / (np * sxx - sx * sx);
            double target = 0.25 * s * std::pow(hermite_even_at_zero(m - 1), 2);
            c.expect(close_rel(A, target, 0.10),
                     "A m=" + std::to_string(m) + " s=" + std::to_string(s));
            // normalized pairing limit reproduces the closed-form coefficient
            double sigma_est = 256.0 * factorial(2 * m - 2) / M_PI * A / s;
            c.expect(close_rel(sigma_est, sigma_sq_1d(m).sigma_sq, 0.10),
                     "sigma m=" + std::to_string(m));
        }
    }
    c.finish();
}

void criterion_5() {
    using namespace ltl;
    Criterion c{5, ""};
    for (int m = 1; m <= 10; ++m)
        c.expect(sigma_sq_1d(m + 1).sigma_sq / sigma_sq_1d(m).sigma_sq ==
                     (2.0 * m - 1.0) / (2.0 * m),
                 "ratio identity m=" + std::to_string(m));
    double S25 = 0, S100 = 0;
    for (int m = 1; m <= 100; ++m) {
        double v = sigma_sq_1d(m).sigma_sq;
        if (m <= 25) S25 += v;
        S100 += v;
    }
    c.expect(S100 > 1.4 * S25, "1-d partial sums");

    // 2-d partial sums keep growing through m = 12
    QuadratureConfig qc = q;
    qc.rel_tol = 1e-4;
    std::vector<double> sig;
    for (int m = 1; m <= 12; ++m) sig.push_back(sigma_sq_2d(m, qc).sigma_sq);
    double S6 = 0, S12 = 0;
    for (int m = 1; m <= 12; ++m) {
        if (m <= 6) S6 += sig[m - 1];
        S12 += sig[m - 1];
    }
    bool positive = true, decaying_slowly = true;
    for (int m = 1; m <= 12; ++m) positive = positive && sig[m - 1] > 0.0;
    // log-log decay slope across m in [4, 12] stays above the summability line
    double slope;
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, np = 0;
        for (int m = 4; m <= 12; ++m) {
            double x = std::log(m), y = std::log(sig[m - 1]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            np += 1;
        }
        slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
        decaying_slowly = slope > -1.0;
    }
    c.expect(positive, "2-d coefficients positive");
    c.expect(S12 > 1.25 * S6, "2-d partial sum growth");
    c.expect(decaying_slowly, "2-d decay slope " + std::to_string(slope));
    c.finish();
}

void criterion_6() {
    using namespace ltl;
    Criterion c{6, ""};
    QuadratureConfig qf = q;
    qf.rel_tol = 1e-7;
    auto gen = substream(606, 0);
    std::uniform_real_distribution<double> U(0.0, 2.0 * M_PI);
    for (int m : {1, 2}) {
        double base = L_2m_phi(m, {1.0, 0.0}, std::nullopt, qf);
        for (int k = 0; k < 8; ++k) {
            UnitVector2 e = UnitVector2::from_angle(U(gen));
            double v = L_2m_phi(m, e, std::nullopt, qf);
            // grid tolerance 1e-3 relative, agreement within 3x
            if (!close_rel(v, base, 3e-3))
                c.expect(false, "m=" + std::to_string(m) + " vector " + std::to_string(k));
        }
    }
    c.finish();
}

void criterion_7() {
    using namespace ltl;
    Criterion c{7, ""};
    VerdictConfig vc;
    vc.decades = 12;
    vc.n_samples = 2000000;
    const double deltas[6] = {0.15, 0.2, 0.24, 0.26, 0.3, 0.5};
    const bool want_converge[6] = {true, true, true, false, false, false};
    const char* names[3] = {"sing1", "sing2", "sing3"};
    int iid = 0;
    for (auto id : {SingularIntegral::sing1, SingularIntegral::sing2, SingularIntegral::sing3}) {
        for (int j = 0; j < 6; ++j) {
            Verdict v = convergence_verdict(id, deltas[j], vc);
            bool got_converge = v.status == VerdictStatus::converges;
            bool conclusive = v.status != VerdictStatus::inconclusive;
            if (!(conclusive && got_converge == want_converge[j]))
                c.expect(false, std::string(names[iid]) + " delta=" + std::to_string(deltas[j]) +
                                    " model=" + v.model);
        }
        ++iid;
    }
    // enumeration completeness at alpha = 1.2, eps = 1e-2
    auto all = enumerate_block_families();
    c.expect(all.size() == 2520, "accepted permutation count " + std::to_string(all.size()));
    double total = 0.0, var = 0.0;
    std::uint64_t s = 0;
    for (const auto& [sigma, fam] : all) {
        MeanSE r = block_integral(1.2, fam, 1e-2, 8000, 4242 + s++);
        total += r.mean;
        var += r.std_error * r.std_error;
    }
    MeanSE direct = direct_domain_integral(1.2, 1e-2, 8000000, 33);
    double se = std::sqrt(var + direct.std_error * direct.std_error);
    c.expect(std::abs(total - direct.mean) <= 3.0 * se,
             "block sum " + std::to_string(total) + " vs direct " + std::to_string(direct.mean) +
                 " (3se=" + std::to_string(3.0 * se) + ")");
    c.finish();
}

void criterion_8() {
    using namespace ltl;
    Criterion c{8, ""};
    const double hs[4] = {0.2, 0.1, 0.05, 0.02};
    std::vector<double> ratios, bands;
    for (double h : hs) {
        auto est = contraction_ratio(2, 2, h, 1.0, 3000000, 808);
        ratios.push_back(est.ratio);
        bands.push_back(est.norm_sq / std::pow(h, 8));
    }
    for (std::size_t i = 0; i + 1 < ratios.size(); ++i)
        c.expect(ratios[i] > ratios[i + 1], "monotone step " + std::to_string(i));
    double bmax = *std::max_element(bands.begin(), bands.end());
    double bmin = *std::min_element(bands.begin(), bands.end());
    c.expect(bmax / bmin < 2.0, "band ratio " + std::to_string(bmax / bmin));
    c.finish();
}

void criterion_9() {
    using namespace ltl;
    Criterion c{9, ""};
    const int n_paths = 10000, n_steps = 1 << 14;
    std::vector<double> loczero(n_paths), alpha(n_paths), conservation(n_paths);
    for_each_block(n_paths, true, [&](int p) {
        Path path = sample_path(1, n_steps, 1.0, 70000 + static_cast<std::uint64_t>(p));
        LocalTimeField f = local_time_field(path, std::sqrt(path.dt));
        loczero[p] = f.value_at(0.0);
        conservation[p] = f.total_mass();
        alpha[p] = self_intersection_lt(path, 4.0 * path.dt).value;
    });
    double worst_mass = 0.0;
    Accumulator L0, A;
    for (int p = 0; p < n_paths; ++p) {
        worst_mass = std::max(worst_mass, std::abs(conservation[p] - 1.0));
        L0.add(loczero[p]);
        A.add(alpha[p]);
    }
    c.expect(worst_mass < 1e-9, "occupation identity");
    c.expect(close_rel(L0.mean(), 2.0 / std::sqrt(2.0 * M_PI), 0.05),
             "local time at zero " + std::to_string(L0.mean()));
    c.expect(close_rel(A.mean(), (4.0 / 3.0) / std::sqrt(2.0 * M_PI), 0.05),
             "self-intersection " + std::to_string(A.mean()));
    c.finish();
}

void criterion_10() {
    using namespace ltl;
    Criterion c{10, ""};
    ExperimentConfig cfg;
    cfg.experiment = "riesz-scaling";
    cfg.parameters["gamma"] = "0.8";
    cfg.parameters["paths"] = "2000";
    cfg.parameters["steps"] = "16384";
    cfg.parameters["seed"] = "101";
    cfg.parameters["slope_tolerance"] = "0.3";
    cfg.output_path = "acceptance_riesz_scaling";
    ScalingReport rep = run_experiment(cfg);
    c.expect(rep.pass, "slope " + std::to_string(rep.slope) + " ci=[" +
                           std::to_string(rep.slope_ci_lo) + "," +
                           std::to_string(rep.slope_ci_hi) + "] target 3.8 +/- 0.3");

    ExperimentConfig mix;
    mix.experiment = "mixture-diagnostic";
    mix.parameters["gamma"] = "0.8";
    mix.parameters["paths"] = "2000";
    mix.parameters["steps"] = "4096";
    mix.parameters["h"] = "0.1";
    mix.parameters["seed"] = "55";
    MixtureDiagnostic d = mixture_diagnostic(mix);
    c.expect(d.regression_t > 3.0, "mixture regression t " + std::to_string(d.regression_t));
    c.finish();
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}

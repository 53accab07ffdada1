#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
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

void print_csv_row(std::initializer_list<double> cells) {
    bool first = true;
    for (double c : cells) {
        if (!first) std::printf(",");
        std::printf("%.12g", c);
        first = false;
    }
    std::printf("\n");
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / std::max(1, n - 1);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local-time-lab: kernel evaluation, path simulation and scaling experiments"};
    app.require_subcommand(1);

    // ---- kernel-eval ----
    auto* ke = app.add_subcommand("kernel-eval", "evaluate one kernel family on a grid (CSV)");
    std::string family = "g_h";
    double ke_beta = 0.75, ke_h = 0.1, ke_t = 1.0, ke_s = 0.0, ke_h2 = 0.0;
    int ke_m = 1, ke_r = 2, ke_n = 21;
    double ke_xmin = -2.0, ke_xmax = 2.0;
    std::int64_t ke_mc = 200000;
    std::uint64_t ke_seed = 1;
    std::vector<int> ke_index;
    ke->add_option("--family", family, "f_h|g_h|K|phi1d|phi2d|contraction")->required();
    ke->add_option("--beta", ke_beta);
    ke->add_option("--h", ke_h);
    ke->add_option("--h2", ke_h2, "second component of h (phi2d)");
    ke->add_option("--t", ke_t);
    ke->add_option("--s", ke_s);
    ke->add_option("--m", ke_m);
    ke->add_option("--r", ke_r);
    ke->add_option("--xmin", ke_xmin);
    ke->add_option("--xmax", ke_xmax);
    ke->add_option("--points", ke_n);
    ke->add_option("--samples", ke_mc);
    ke->add_option("--seed", ke_seed);
    ke->add_option("--index", ke_index, "2-d coordinate multi-index, e.g. --index 1 2");

    // ---- variance-table ----
    auto* vt = app.add_subcommand("variance-table", "variance coefficients per (m, h)");
    int vt_dim = 1;
    std::string vt_mlist = "1,2", vt_hlist = "1e-2,1e-3,1e-4,1e-5", vt_out = "variance-out";
    double vt_s = 1.0;
    vt->add_option("--dim", vt_dim)->check(CLI::IsMember({1, 2}));
    vt->add_option("--m-list", vt_mlist);
    vt->add_option("--h-list", vt_hlist);
    vt->add_option("--s", vt_s);
    vt->add_option("--output", vt_out);

    // ---- appendix-check ----
    auto* ac = app.add_subcommand("appendix-check", "singular-integral convergence verdict");
    std::string ac_integral = "sing3";
    double ac_delta = 0.25;
    int ac_decades = 12;
    std::int64_t ac_samples = 1500000;
    std::uint64_t ac_seed = 20240607;
    ac->add_option("--integral", ac_integral, "sing1|sing2|sing3")->required();
    ac->add_option("--delta", ac_delta)->required();
    ac->add_option("--decades", ac_decades);
    ac->add_option("--samples", ac_samples);
    ac->add_option("--seed", ac_seed);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "per-path functionals (CSV rows + summary)");
    std::string sim_fn = "H";
    std::int64_t sim_paths = 100;
    int sim_steps = 1 << 12;
    double sim_h = 0.1, sim_gamma = 0.8;
    std::uint64_t sim_seed = 1;
    sim->add_option("--functional", sim_fn, "H|riesz|alpha")->required();
    sim->add_option("--paths", sim_paths);
    sim->add_option("--steps", sim_steps);
    sim->add_option("--h", sim_h);
    sim->add_option("--gamma", sim_gamma);
    sim->add_option("--seed", sim_seed);

    // ---- run ----
    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    std::string run_config;
    run->add_option("--config", run_config)->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    ltl::QuadratureConfig q;
    try {
        if (*ke) {
            std::printf("x,value,err_estimate\n");
            auto xs = linspace(ke_xmin, ke_xmax, ke_n);
            if (family == "f_h") {
                ltl::RieszSpec spec{ke_beta, ke_h, std::nullopt};
                for (double x : xs) {
                    if (x == 0.0) continue;
                    print_csv_row({x, ltl::f_h_fourier(spec, x), 0.0});
                }
            } else if (family == "g_h") {
                ltl::RieszSpec spec{ke_beta, ke_h, std::nullopt};
                for (double x : xs) {
                    auto v = ltl::g_h_eval(spec, x, q);
                    print_csv_row({x, v.value, q.rel_tol * std::abs(v.value)});
                }
            } else if (family == "K") {
                for (double x : xs)
                    print_csv_row({x, ltl::riesz_K(ke_beta, ke_t, x, q),
                                   q.rel_tol});
            } else if (family == "phi1d") {
                for (double x : xs) {
                    if (!(x > 0.0)) continue;
                    print_csv_row({x, ltl::phi_1d(ke_m, ke_h, 0.0, x, q), q.rel_tol});
                }
            } else if (family == "phi2d") {
                ltl::IndexVector idx;
                idx.i = ke_index.empty() ? std::vector<int>{1, 1} : ke_index;
                for (double x : xs) {
                    if (!(x > ke_s)) continue;
                    print_csv_row({x, ltl::phi_2d(idx, ke_h, ke_h2, x, ke_s, q), q.rel_tol});
                }
            } else if (family == "contraction") {
                for (double x : xs) {
                    if (!(x > 0.0) || x >= 1.0) continue;
                    auto c = ltl::contraction_ratio(ke_m, ke_r, x, ke_t, ke_mc, ke_seed);
                    print_csv_row({x, c.ratio, c.ratio_std_error});
                }
            } else {
                std::fprintf(stderr, "unknown family %s\n", family.c_str());
                return 2;
            }
            return 0;
        }
        if (*vt) {
            ltl::ExperimentConfig cfg;
            cfg.experiment = vt_dim == 1 ? "variance-table-1d" : "variance-table-2d";
            cfg.parameters["m_list"] = vt_mlist;
            cfg.parameters["h_list"] = vt_hlist;
            cfg.parameters["s"] = std::to_string(vt_s);
            cfg.output_path = vt_out;
            ltl::run_experiment(cfg);
            std::printf("wrote %s/data.csv\n", vt_out.c_str());
            return 0;
        }
        if (*ac) {
            ltl::SingularIntegral id = ac_integral == "sing1" ? ltl::SingularIntegral::sing1
                                       : ac_integral == "sing2" ? ltl::SingularIntegral::sing2
                                                                : ltl::SingularIntegral::sing3;
            ltl::VerdictConfig vc;
            vc.decades = ac_decades;
            vc.n_samples = ac_samples;
            vc.seed = ac_seed;
            ltl::Verdict v = ltl::convergence_verdict(id, ac_delta, vc);
            std::printf("eps,value,std_error\n");
            for (std::size_t i = 0; i < v.evidence.size(); ++i)
                print_csv_row({v.evidence[i].first, v.evidence[i].second, v.evidence_se[i]});
            std::printf("# model: %s\n", v.model.c_str());
            std::printf("# growth_coefficient: %.6g (se %.2g)\n", v.fitted_growth,
                        v.fitted_growth_se);
            std::printf("# diff_decay_rate: %.6g (se %.2g)\n", v.diff_decay_rate,
                        v.diff_decay_rate_se);
            std::printf("# status: %s\n",
                        v.status == ltl::VerdictStatus::converges   ? "converges"
                        : v.status == ltl::VerdictStatus::diverges  ? "diverges"
                                                                    : "inconclusive");
            return 0;
        }
        if (*sim) {
            const double dt = 1.0 / sim_steps;
            std::printf("path,seed,value\n");
            ltl::Accumulator acc;
            for (std::int64_t p = 0; p < sim_paths; ++p) {
                ltl::Path path = ltl::sample_path(1, sim_steps, 1.0, sim_seed + p);
                double v = 0.0;
                if (sim_fn == "H")
                    v = ltl::l2_modulus_H(path, sim_h, std::sqrt(dt)).value;
                else if (sim_fn == "riesz")
                    v = ltl::riesz_hamiltonian(path, sim_h, sim_gamma, std::sqrt(dt)).value;
                else if (sim_fn == "alpha")
                    v = ltl::self_intersection_lt(path, 4.0 * dt).value;
                else {
                    std::fprintf(stderr, "unknown functional %s\n", sim_fn.c_str());
                    return 2;
                }
                acc.add(v);
                std::printf("%lld,%llu,%.12g\n", static_cast<long long>(p),
                            static_cast<unsigned long long>(sim_seed + p), v);
            }
            auto r = acc.result();
            std::printf("summary,mean=%.12g,se=%.12g,variance=%.12g\n", r.mean, r.std_error,
                        acc.variance());
            return 0;
        }
        if (*run) {
            auto t0 = std::chrono::steady_clock::now();
            ltl::ExperimentConfig cfg = ltl::ExperimentConfig::from_file(run_config);
            ltl::ScalingReport rep = ltl::run_experiment(cfg);
            auto t1 = std::chrono::steady_clock::now();
            double wall = std::chrono::duration<double>(t1 - t0).count();
            if (!rep.points.empty())
                std::printf("slope=%.6g ci=[%.6g, %.6g] target=%.6g verdict=%s\n", rep.slope,
                            rep.slope_ci_lo, rep.slope_ci_hi, rep.target_slope,
                            rep.pass ? "pass" : "fail");
            std::printf("wall_time_s=%.3f output=%s\n", wall, cfg.output_path.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

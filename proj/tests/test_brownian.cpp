#include <cmath>
#include <vector>

#include "doctest.h"
#include "ltlab/brownian.hpp"
#include "ltlab/gaussian.hpp"
#include "ltlab/rng.hpp"

using namespace ltl;

namespace {

Path ramp_path(int n_steps) {
    // deterministic path values[k] = k dt on [0, 1]
    Path p;
    p.dim = 1;
    p.dt = 1.0 / n_steps;
    p.seed = 0;
    p.values.resize(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) p.values[k] = k * p.dt;
    return p;
}

Path truncate(const Path& p, int steps) {
    Path out = p;
    out.values.assign(p.values.begin(), p.values.begin() + steps + 1);
    return out;
}

}  // namespace

TEST_CASE("path sampling") {
    Path p = sample_path(1, 1024, 1.0, 42);
    CHECK(p.values[0] == 0.0);
    CHECK(p.n_steps() == 1024);
    CHECK(p.horizon() == doctest::Approx(1.0));

    Path p2 = sample_path(1, 1024, 1.0, 42);
    CHECK(p.values == p2.values);  // bit-identical given the seed

    Path q2 = sample_path(2, 64, 0.5, 7);
    CHECK(q2.dim == 2);
    CHECK(q2.at(0, 0) == 0.0);
    CHECK(q2.at(0, 1) == 0.0);

    CHECK_THROWS_AS(sample_path(3, 10, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_path(1, 0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_path(1, 10, 1.5, 1), std::invalid_argument);

    // terminal moments over many seeds
    Accumulator acc;
    for (int s = 0; s < 20000; ++s) {
        Path pp = sample_path(1, 16, 1.0, 1000 + s);
        acc.add(pp.values.back());
    }
    CHECK(std::abs(acc.mean()) < 4.0 * std::sqrt(1.0 / 20000));
    CHECK(acc.variance() == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("occupation histogram") {
    Path ramp = ramp_path(4096);
    LocalTimeField f = local_time_field(ramp, 1.0 / 64);
    // identity ramp spends time bw per bin inside [0,1]
    for (double x : {0.2, 0.5, 0.8}) CHECK(f.value_at(x) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(f.value_at(-0.5) == 0.0);
    CHECK(f.value_at(1.5) == 0.0);
    CHECK(f.total_mass() == doctest::Approx(1.0).epsilon(1e-12));  // conservation

    Path bm = sample_path(1, 4096, 1.0, 3);
    LocalTimeField g = local_time_field(bm, std::sqrt(bm.dt));
    CHECK(g.total_mass() == doctest::Approx(1.0).epsilon(1e-10));

    Path d2 = sample_path(2, 16, 1.0, 3);
    CHECK_THROWS_AS(local_time_field(d2, 0.1), std::invalid_argument);

    // occupation density at the origin across paths
    Accumulator acc;
    for (int s = 0; s < 2000; ++s) {
        Path pp = sample_path(1, 4096, 1.0, 5000 + s);
        acc.add(local_time_field(pp, std::sqrt(pp.dt)).value_at(0.0));
    }
    CHECK(acc.mean() == doctest::Approx(2.0 / std::sqrt(2.0 * M_PI)).epsilon(0.08));
}

TEST_CASE("occupation identity for a quadratic observable") {
    // int Lhat(x) f(x) dx equals int f(B_s) ds up to bin-width order, per path
    auto f = [](double x) { return 1.0 + 0.5 * x + 2.0 * x * x; };
    for (int seed : {1, 2, 3}) {
        Path p = sample_path(1, 2048, 1.0, seed);
        const double bw = std::sqrt(p.dt);
        LocalTimeField fld = local_time_field(p, bw);
        double lhs = 0.0;
        for (std::size_t j = 0; j < fld.mass.size(); ++j) {
            double x = fld.grid_min + (j + 0.5) * bw;
            lhs += fld.mass[j] * f(x) * bw;
        }
        // exact segment integrals of the quadratic under linear interpolation
        double rhs = 0.0;
        for (int k = 0; k < p.n_steps(); ++k) {
            double a = p.at(k), b = p.at(k + 1);
            rhs += p.dt * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b)) / 6.0;
        }
        CHECK(std::abs(lhs - rhs) < 4.0 * bw);
    }
}

TEST_CASE("shift-difference functional") {
    Path p = sample_path(1, 4096, 1.0, 11);
    const double bw = std::sqrt(p.dt);
    CHECK(l2_modulus_H(p, 0.0, bw).value == 0.0);
    double plus = l2_modulus_H(p, 0.25, bw).value;
    double minus = l2_modulus_H(p, -0.25, bw).value;
    CHECK(plus >= 0.0);
    CHECK(plus == minus);  // exact under the grid snapping
    CHECK_THROWS_AS(l2_modulus_H(p, 0.1 * bw, bw), std::invalid_argument);

    // two-estimator agreement with the mollified route, and decay in h
    Accumulator h1, h2, m1, m2;
    for (int s = 0; s < 300; ++s) {
        Path pp = sample_path(1, 2048, 1.0, 400 + s);
        h1.add(l2_modulus_H(pp, 0.2, std::sqrt(pp.dt)).value);
        h2.add(l2_modulus_H(pp, 0.1, std::sqrt(pp.dt)).value);
        m1.add(mollified_modulus(pp, 0.2, 4.0 * pp.dt).value);
        m2.add(mollified_modulus(pp, 0.1, 4.0 * pp.dt).value);
    }
    CHECK(h1.mean() == doctest::Approx(m1.mean()).epsilon(0.05));
    CHECK(h2.mean() == doctest::Approx(m2.mean()).epsilon(0.05));
    CHECK(h2.mean() < h1.mean());
}

TEST_CASE("riesz window functional") {
    Path p = sample_path(1, 512, 1.0, 21);
    const double clip = std::sqrt(p.dt);
    CHECK(riesz_hamiltonian(p, 0.0, 0.8, clip).value == 0.0);
    CHECK(riesz_hamiltonian(p, 0.2, 0.8, clip).value ==
          riesz_hamiltonian(p, -0.2, 0.8, clip).value);
    CHECK_THROWS_AS(riesz_hamiltonian(p, 0.1, 0.5, clip), std::invalid_argument);
    CHECK_THROWS_AS(riesz_hamiltonian(p, 0.1, 0.8, 0.0), std::invalid_argument);

    // histogram fast path against the direct double sum
    for (int s = 0; s < 10; ++s) {
        Path pp = sample_path(1, 512, 1.0, 600 + s);
        for (double h : {0.4, 0.1}) {
            double fast = riesz_hamiltonian(pp, h, 0.8, std::sqrt(pp.dt)).value;
            double ref = riesz_hamiltonian_direct(pp, h, 0.8, std::sqrt(pp.dt)).value;
            CHECK(fast == doctest::Approx(ref).epsilon(0.02));
        }
    }
}

TEST_CASE("self-intersection estimator") {
    Path d2 = sample_path(2, 16, 1.0, 3);
    CHECK_THROWS_AS(self_intersection_lt(d2, 1e-3), std::invalid_argument);

    Path p = sample_path(1, 1024, 1.0, 31);
    const double eps = 4.0 * p.dt;

    // windowed histogram against the direct double sum
    for (int s = 0; s < 6; ++s) {
        Path pp = sample_path(1, 512, 1.0, 700 + s);
        double fast = self_intersection_lt(pp, 4.0 * pp.dt).value;
        double ref = self_intersection_lt_direct(pp, 4.0 * pp.dt).value;
        CHECK(fast == doctest::Approx(ref).epsilon(0.01));
    }

    // non-decreasing in the horizon
    double prev = 0.0;
    for (int steps : {256, 512, 1024}) {
        double v = self_intersection_lt(truncate(p, steps), eps).value;
        CHECK(v >= prev);
        prev = v;
    }

    // mollifier sweep stabilizes once eps <= 4 dt
    Accumulator a1, a2;
    for (int s = 0; s < 200; ++s) {
        Path pp = sample_path(1, 2048, 1.0, 800 + s);
        a1.add(self_intersection_lt(pp, 4.0 * pp.dt).value);
        a2.add(self_intersection_lt(pp, 2.0 * pp.dt).value);
    }
    CHECK(std::abs(a2.mean() - a1.mean()) / a1.mean() < 0.02);
}

TEST_CASE("oscillatory time integral") {
    Path p = sample_path(1, 2048, 1.0, 41);
    auto v0 = oscillatory_time_integral(p, 0.5, 0.0);
    CHECK(v0.real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v0.imag() == 0.0);
    for (double xi : {1.0, 10.0}) {
        auto v = oscillatory_time_integral(p, 0.8, xi);
        CHECK(std::abs(v) <= 0.8 + 1e-12);
    }
    CHECK_THROWS_AS(oscillatory_time_integral(p, 1.5, 1.0), std::invalid_argument);

    // refinement order: coarse grids from the same underlying motion
    const double xi = 4.0;
    Accumulator orders;
    for (int s = 0; s < 12; ++s) {
        Path fine = sample_path(1, 4096, 1.0, 900 + s);
        auto sub = [&](int stride) {
            Path c;
            c.dim = 1;
            c.dt = fine.dt * stride;
            c.seed = fine.seed;
            for (int k = 0; k <= fine.n_steps(); k += stride) c.values.push_back(fine.at(k));
            return c;
        };
        Path c2 = sub(2), c4 = sub(4);
        double d2 = std::abs(oscillatory_time_integral(c2, 1.0, xi) -
                             oscillatory_time_integral(fine, 1.0, xi));
        double d4 = std::abs(oscillatory_time_integral(c4, 1.0, xi) -
                             oscillatory_time_integral(fine, 1.0, xi));
        if (d2 > 1e-12 && d4 > 1e-12) orders.add(std::log2(d4 / d2));
    }
    CHECK(orders.mean() > 0.4);
}

TEST_CASE("moment bounds of the occupation field") {
    // second moment of Lhat_t(x + B_t) bounded over a grid; window modulus
    // second moment shrinks with the window
    const int n_paths = 1500, n_steps = 1024;
    std::vector<double> xs{-1.0, -0.5, 0.0, 0.5, 1.0};
    std::vector<int> t_idx{n_steps / 4, n_steps / 2, n_steps};
    std::vector<Accumulator> accs(xs.size() * t_idx.size());
    Accumulator mod_big, mod_small;
    for (int s = 0; s < n_paths; ++s) {
        Path p = sample_path(1, n_steps, 1.0, 3000 + s);
        auto fields = local_time_fields_at(p, std::sqrt(p.dt), t_idx);
        for (std::size_t ti = 0; ti < t_idx.size(); ++ti) {
            double bt = p.at(t_idx[ti]);
            for (std::size_t xi = 0; xi < xs.size(); ++xi) {
                double L = fields[ti].value_at(xs[xi] + bt);
                accs[ti * xs.size() + xi].add(L * L);
            }
        }
        // sup over |x-y| < sqrt(h) of |L(x) - L(y)|, squared
        const LocalTimeField& f = fields.back();
        auto sup_mod = [&](double h) {
            int w = std::max(1, static_cast<int>(std::sqrt(h) / f.bin_width));
            double best = 0.0;
            for (std::size_t j = 0; j < f.mass.size(); ++j)
                for (int d = 1; d <= w && j + d < f.mass.size(); ++d)
                    best = std::max(best, std::abs(f.mass[j + d] - f.mass[j]));
            return best * best;
        };
        mod_big.add(sup_mod(0.2));
        mod_small.add(sup_mod(0.02));
    }
    for (auto& a : accs) CHECK(a.mean() <= 10.0);
    CHECK(mod_small.mean() < mod_big.mean());
}

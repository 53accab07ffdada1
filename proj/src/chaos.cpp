#include "ltlab/chaos.hpp"

#include <algorithm>
#include <cmath>

#include "ltlab/gaussian.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/rng.hpp"

namespace ltl {

void ChaosSpec::validate() const {
    if (m < 1) throw std::invalid_argument("ChaosSpec: m must be >= 1");
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("ChaosSpec: t must lie in (0, 1]");
    if (dim != 1 && dim != 2) throw std::invalid_argument("ChaosSpec: dim must be 1 or 2");
    if (h == 0.0) throw std::invalid_argument("ChaosSpec: h must be non-zero");
}

void IndexVector::validate() const {
    if (i.empty() || i.size() % 2 != 0)
        throw std::invalid_argument("IndexVector: length must be even and positive");
    for (int v : i)
        if (v != 1 && v != 2) throw std::invalid_argument("IndexVector: entries must be 1 or 2");
}

int IndexVector::count_ones() const {
    return static_cast<int>(std::count(i.begin(), i.end(), 1));
}

double phi_1d(int m, double h, double t1, double t2, const QuadratureConfig& q) {
    if (m < 1) throw std::invalid_argument("phi_1d: m must be >= 1");
    if (h <= 0) throw std::invalid_argument("phi_1d: h must be positive");
    if (!(t1 < t2)) throw std::invalid_argument("phi_1d: need t1 < t2");
    const double tau = t2 - t1;
    const int k = 2 * m - 2;
    auto f = [k, tau, h](double y) { return heat_kernel_deriv(k, tau, y) * (h - y); };
    return integrate(f, 0.0, h, q).value;
}

double phi_1d_closed(int m, double h, double tau) {
    if (tau <= 0) throw std::invalid_argument("phi_1d_closed: need tau > 0");
    if (m == 1) {
        // int_0^h p(y)(h-y) dy = h (N(h/sqrt(tau)) - 1/2) - tau (p(0) - p(h))
        const double p0 = heat_kernel(tau, 0.0), ph = heat_kernel(tau, h);
        return h * (normal_cdf(h / std::sqrt(tau)) - 0.5) - tau * (p0 - ph);
    }
    // integration by parts twice; the odd derivative vanishes at zero
    const int k = 2 * m - 4;
    return heat_kernel_deriv(k, tau, h) - heat_kernel_deriv(k, tau, 0.0);
}

namespace {

void check_times(const ChaosSpec& spec, std::span<const double> times) {
    if (static_cast<int>(times.size()) != 2 * spec.m)
        throw std::invalid_argument("kernel: expected 2m time arguments");
    for (double u : times)
        if (u < 0.0 || u > spec.t)
            throw std::invalid_argument("kernel: time arguments must lie in [0, t]");
}

}  // namespace

double kernel_f_h(const ChaosSpec& spec, std::span<const double> times,
                  const QuadratureConfig& q) {
    spec.validate();
    check_times(spec, times);
    auto [lo, hi] = std::minmax_element(times.begin(), times.end());
    if (*lo == *hi)
        throw std::invalid_argument("kernel_f_h: coincident min and max (degenerate gap)");
    return phi_1d(spec.m, spec.h, *lo, *hi, q);
}

double kernel_g_h_t(const ChaosSpec& spec, std::span<const double> times,
                    const QuadratureConfig& q) {
    spec.validate();
    check_times(spec, times);
    auto [lo, hi] = std::minmax_element(times.begin(), times.end());
    if (*lo >= spec.t || *hi <= 0.0)
        throw std::invalid_argument("kernel_g_h_t: degenerate window (zero gap)");
    double v = phi_1d(spec.m, spec.h, 0.0, spec.t, q);
    v -= phi_1d(spec.m, spec.h, *lo, spec.t, q);
    v -= phi_1d(spec.m, spec.h, 0.0, *hi, q);
    return v;
}

MinMaxKernel make_f_kernel(int m, double h) {
    MinMaxKernel k;
    k.m = m;
    k.h = h;
    k.gap_only = true;
    k.eval = [m, h](double a, double b) { return phi_1d_closed(m, h, b - a); };
    return k;
}

MinMaxKernel make_g_kernel(int m, double h, double horizon) {
    MinMaxKernel k;
    k.m = m;
    k.h = h;
    k.gap_only = false;
    k.eval = [m, h, horizon](double a, double b) {
        double v = phi_1d_closed(m, h, horizon);
        if (a < horizon) v -= phi_1d_closed(m, h, horizon - a);
        if (b > 0.0) v -= phi_1d_closed(m, h, b);
        return v;
    };
    return k;
}

MinMaxKernel make_sum_kernel(int m, double h, double horizon) {
    MinMaxKernel f = make_f_kernel(m, h), g = make_g_kernel(m, h, horizon);
    MinMaxKernel k;
    k.m = m;
    k.h = h;
    k.gap_only = false;
    k.eval = [f, g](double a, double b) { return f.eval(a, b) + g.eval(a, b); };
    return k;
}

double minmax_inner_product(const MinMaxKernel& k1, const MinMaxKernel& k2, int m, double s,
                            double t, const QuadratureConfig& q) {
    if (!(s > 0.0 && s <= t && t <= 1.0))
        throw std::invalid_argument("minmax_inner_product: need 0 < s <= t <= 1");
    const double w = factorial(2 * m) / factorial(2 * m - 2);
    const int pw = 2 * m - 2;
    if (k1.gap_only && k2.gap_only) {
        // both kernels depend only on the gap: one-dimensional weighted form
        auto f = [&](double tau) {
            return (s - tau) * k1.eval(0.0, tau) * k2.eval(0.0, tau) * std::pow(tau, pw);
        };
        // smooth but multi-scale near 0 (gap kernels peak below tau ~ h^2)
        double lo = std::min(1e-12, 1e-4 * k1.h * k1.h);
        return w * (integrate_octaves(f, lo, s, q).value);
    }
    // nested adaptive cubature over {0 < t1 < t2 < s}
    auto outer = [&](double tau) {
        auto inner = [&](double t1) { return k1.eval(t1, t1 + tau) * k2.eval(t1, t1 + tau); };
        return std::pow(tau, pw) * integrate(inner, 0.0, s - tau, q).value;
    };
    QuadratureConfig qo = q;
    qo.rel_tol = std::max(q.rel_tol, 1e-8);
    double lo = 1e-10;
    return w * integrate_octaves(outer, lo, s, qo).value;
}

namespace {

struct BlockStats {
    double sum = 0.0;
    double sumsq = 0.0;
    std::int64_t n = 0;
};

}  // namespace

ContractionEstimate contraction_ratio(int m, int r, double h, double t, std::int64_t n_mc,
                                      std::uint64_t seed, bool parallel) {
    const int n = 2 * m;
    if (n < 2) throw std::invalid_argument("contraction_ratio: need m >= 1");
    if (r < 1 || r > n - 1) throw std::invalid_argument("contraction_ratio: r out of range");
    if (n_mc <= 0) throw std::invalid_argument("contraction_ratio: need n_mc > 0");
    if (!(h > 0.0) || !(t > 0.0)) throw std::invalid_argument("contraction_ratio: h, t > 0");

    const std::int64_t block_size = 16384;
    const int n_blocks = static_cast<int>((n_mc + block_size - 1) / block_size);
    std::vector<BlockStats> stats(n_blocks);

    const bool reduced = (r >= 2 && r <= n - 2);
    const double simplex_vol = 0.5 * t * t;
    const double pr_n = reduced ? std::pow(double(n - r) * (n - r - 1) * r * (r - 1), 2) : 0.0;

    for_each_block(n_blocks, parallel, [&](int b) {
        auto gen = substream(seed, static_cast<std::uint64_t>(b));
        std::uniform_real_distribution<double> U(0.0, t);
        BlockStats st;
        const std::int64_t lo = b * block_size;
        const std::int64_t hi = std::min(n_mc, lo + block_size);
        for (std::int64_t i = lo; i < hi; ++i) {
            double sample;
            if (reduced) {
                // four sorted pairs (block extremes), weights from the reduced
                // representation of the contraction over ordered coordinates
                double a[4], z[4];
                for (int k = 0; k < 4; ++k) {
                    double u = U(gen), v = U(gen);
                    a[k] = std::min(u, v);
                    z[k] = std::max(u, v);
                }
                double prod = 1.0;
                for (int i1 = 0; i1 < 2; ++i1)
                    for (int j1 = 2; j1 < 4; ++j1) {
                        double span = std::max(z[i1], z[j1]) - std::min(a[i1], a[j1]);
                        prod *= phi_1d_closed(m, h, span);
                    }
                double wgt = std::pow((z[0] - a[0]) * (z[1] - a[1]), r - 2) *
                             std::pow((z[2] - a[2]) * (z[3] - a[3]), n - r - 2);
                sample = pr_n * std::pow(simplex_vol, 4) * prod * wgt;
            } else {
                // r in {1, n-1}: plain min/max sampling of the two argument blocks
                double amin[2], amax[2], bmin[2], bmax[2];
                for (int k = 0; k < 2; ++k) {
                    double mn = t, mx = 0.0;
                    for (int j = 0; j < r; ++j) {
                        double u = U(gen);
                        mn = std::min(mn, u);
                        mx = std::max(mx, u);
                    }
                    amin[k] = mn;
                    amax[k] = mx;
                }
                for (int k = 0; k < 2; ++k) {
                    double mn = t, mx = 0.0;
                    for (int j = 0; j < n - r; ++j) {
                        double u = U(gen);
                        mn = std::min(mn, u);
                        mx = std::max(mx, u);
                    }
                    bmin[k] = mn;
                    bmax[k] = mx;
                }
                double prod = 1.0;
                for (int i1 = 0; i1 < 2; ++i1)
                    for (int j1 = 0; j1 < 2; ++j1) {
                        double span =
                            std::max(amax[i1], bmax[j1]) - std::min(amin[i1], bmin[j1]);
                        prod *= phi_1d_closed(m, h, span);
                    }
                sample = std::pow(t, 2 * n) * prod;
            }
            st.sum += sample;
            st.sumsq += sample * sample;
            ++st.n;
        }
        stats[b] = st;
    });

    double sum = 0.0, sumsq = 0.0;
    std::int64_t cnt = 0;
    for (const auto& st : stats) {
        sum += st.sum;
        sumsq += st.sumsq;
        cnt += st.n;
    }
    const double mean = sum / static_cast<double>(cnt);
    const double var = std::max(0.0, sumsq / cnt - mean * mean);
    const double se = std::sqrt(var / static_cast<double>(cnt));
    const double denom = std::pow(h, 8) * std::pow(std::log(1.0 / h), 2);
    return {mean / denom, se / denom, mean, se};
}

double phi_2d(const IndexVector& idx, double h1, double h2, double t, double s,
              const QuadratureConfig& q) {
    idx.validate();
    if (!(s < t)) throw std::invalid_argument("phi_2d: need s < t");
    if (h1 == 0.0 && h2 == 0.0) throw std::invalid_argument("phi_2d: need h != 0");
    const double tau = t - s;
    const int n = static_cast<int>(idx.i.size());
    const int n1 = idx.count_ones();
    const int n2 = n - n1;
    const double hnorm = std::hypot(h1, h2);
    const double htheta = std::atan2(h2, h1);

    auto angular = [&](double rho) {
        // trapezoid over the period; trig factor degree n plus the cosine term
        int N = 64;
        const int need = static_cast<int>(8.0 * rho * hnorm) + 4 * n;
        while (N < need && N < (1 << 16)) N *= 2;
        double sum = 0.0;
        for (int k = 0; k < N; ++k) {
            double th = (2.0 * M_PI * k) / N;
            double c = std::cos(th), si = std::sin(th);
            double trig = 1.0;
            for (int j = 0; j < n1; ++j) trig *= c;
            for (int j = 0; j < n2; ++j) trig *= si;
            double dot = rho * hnorm * std::cos(th - htheta);
            sum += trig * (1.0 - std::cos(dot));
        }
        return sum * (2.0 * M_PI / N);
    };
    auto radial = [&](double rho) {
        return std::pow(rho, n - 3) * std::exp(-0.5 * tau * rho * rho) * angular(rho);
    };
    const double R = std::sqrt(2.0 * (std::max(1.0, n - 3.0) + 40.0) / tau);
    double head = integrate(radial, 0.0, std::min(1.0, R), q).value;
    double body = (R > 1.0) ? integrate_octaves(radial, 1.0, R, q).value : 0.0;
    return head + body;
}

}  // namespace ltl

#include "ltlab/variance.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "ltlab/chaos.hpp"
#include "ltlab/gaussian.hpp"

namespace ltl {

void UnitVector2::validate() const {
    if (std::abs(std::hypot(x, y) - 1.0) > 1e-12)
        throw std::invalid_argument("UnitVector2: norm must be 1 within 1e-12");
}

UnitVector2 UnitVector2::from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

namespace {

// natural cubic spline on an increasing grid
class Spline {
  public:
    Spline() = default;
    Spline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        m_.assign(n, 0.0);
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
            a[i] = hl / 6.0;
            b[i] = (hl + hr) / 3.0;
            c[i] = hr / 6.0;
            d[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
        }
        for (std::size_t i = 1; i < n; ++i) {
            double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        if (n >= 2) {
            m_[n - 1] = 0.0;
            for (std::size_t i = n - 1; i-- > 0;) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
            m_[0] = 0.0;
        }
    }
    double operator()(double xq) const {
        std::size_t lo = 0, hi = x_.size() - 1;
        if (xq <= x_.front()) hi = 1;
        else if (xq >= x_.back()) lo = x_.size() - 2;
        else {
            while (hi - lo > 1) {
                std::size_t mid = (lo + hi) / 2;
                (x_[mid] <= xq ? lo : hi) = mid;
            }
        }
        double h = x_[lo + 1] - x_[lo];
        double A = (x_[lo + 1] - xq) / h, B = (xq - x_[lo]) / h;
        return A * y_[lo] + B * y_[lo + 1] +
               ((A * A * A - A) * m_[lo] + (B * B * B - B) * m_[lo + 1]) * h * h / 6.0;
    }

  private:
    std::vector<double> x_, y_, m_;
};

// cumulative integrals A(u) = int_0^u w, B(u) = int_0^u z w with
// w(z) = e^{-z^2/2} H_{2m-2}(z); cached per m. Below u = 1 the cancellation
// in A - B/u defeats spline accuracy, so the window integral is evaluated
// directly there.
struct InnerTable {
    int m = 1;
    Spline A, B;
    double a_inf = 0.0, b_inf = 0.0;
    double zmax = 14.0;
    double G(double u) const {
        if (u <= 0.0) return 0.0;
        if (u < 1.0) {
            const int mm = m;
            return gauss_legendre(
                [mm, u](double z) {
                    return std::exp(-0.5 * z * z) * hermite(2 * mm - 2, z) * (1.0 - z / u);
                },
                0.0, u, 16);
        }
        if (u >= zmax) return a_inf - b_inf / u;
        return A(u) - B(u) / u;
    }
};

const InnerTable& inner_table(int m) {
    static std::map<int, InnerTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    InnerTable tb;
    tb.m = m;
    const int n_pts = 28001;
    std::vector<double> z(n_pts), A(n_pts), B(n_pts);
    const double dz = tb.zmax / (n_pts - 1);
    A[0] = B[0] = 0.0;
    z[0] = 0.0;
    auto w = [m](double zz) { return std::exp(-0.5 * zz * zz) * hermite(2 * m - 2, zz); };
    double wp = w(0.0);
    for (int i = 1; i < n_pts; ++i) {
        z[i] = i * dz;
        double zm = z[i] - 0.5 * dz;
        double wm = w(zm), wc = w(z[i]);
        // Simpson panel
        A[i] = A[i - 1] + dz / 6.0 * (wp + 4.0 * wm + wc);
        B[i] = B[i - 1] + dz / 6.0 * (z[i - 1] * wp + 4.0 * zm * wm + z[i] * wc);
        wp = wc;
    }
    tb.a_inf = A.back();
    tb.b_inf = B.back();
    tb.A = Spline(z, A);
    tb.B = Spline(std::move(z), std::move(B));
    auto [jt, ok] = cache.emplace(m, std::move(tb));
    (void)ok;
    return jt->second;
}

}  // namespace

double a_of_h(int m, double h, double s, const QuadratureConfig& q) {
    if (m < 1) throw std::invalid_argument("a_of_h: m must be >= 1");
    if (!(h > 0.0) || !(s > 0.0) || !(h < std::sqrt(s)))
        throw std::invalid_argument("a_of_h: need 0 < h < sqrt(s)");
    const InnerTable& tb = inner_table(m);
    const double lo = h / std::sqrt(s);
    auto f = [&](double u) {
        double g = tb.G(u);
        return (s - h * h / (u * u)) * g * g / (u * u * u);
    };
    // ~1/u across many octaves near the lower limit, then u^-3 tail
    const double U = 4000.0;
    double core = integrate_octaves(f, lo, U, q).value;
    double ginf = tb.G(U);
    double tail = s * ginf * ginf / (2.0 * U * U);
    return core + tail;
}

VarianceLimit sigma_sq_1d(int m) {
    if (m < 1) throw std::invalid_argument("sigma_sq_1d: m must be >= 1");
    double v = 64.0 / M_PI;  // m = 1
    for (int k = 1; k < m; ++k) v *= (2.0 * k - 1.0) / (2.0 * k);
    return {m, v, "h^4 ln(1/h)", 0.0};
}

double varphi_2d(double x, double y, const QuadratureConfig& q) {
    x = std::abs(x);
    y = std::abs(y);
    if (x == 0.0 || y == 0.0) return 0.0;
    auto f = [x, y](double u) {
        return (1.0 - std::cos(u * x)) * (1.0 - std::cos(u * y)) / (u * u * u);
    };
    const double wmax = std::max(x, y);
    const double U = std::max(64.0 * wmax, 64.0) / wmax;  // fixed oscillation count
    double head = integrate(f, 0.0, 2.0 / wmax, q).value;
    double body = integrate_octaves(f, 2.0 / wmax, U, q).value;
    // (1-cos a u)(1-cos b u) = 1 - cos au - cos bu + (cos(a-b)u + cos(a+b)u)/2
    double tail = power_cos_tail(-3.0, 0.0, U).value - power_cos_tail(-3.0, x, U).value -
                  power_cos_tail(-3.0, y, U).value +
                  0.5 * power_cos_tail(-3.0, x - y, U).value +
                  0.5 * power_cos_tail(-3.0, x + y, U).value;
    return head + body + tail;
}

namespace {

struct ProfileKey {
    double rel_tol;
    bool operator<(const ProfileKey& o) const { return rel_tol < o.rel_tol; }
};

// varphi(x, y) = max^2 * profile(min/max) by the scaling varphi(λx, λy) = λ^2 varphi
const Spline& varphi_profile(const QuadratureConfig& q) {
    static std::map<ProfileKey, Spline> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({q.rel_tol});
    if (it != cache.end()) return it->second;
    const int N = 257;
    std::vector<double> qs(N), vs(N);
    for (int i = 0; i < N; ++i) {
        // Chebyshev-like grading toward 0 where the q^2 log q cusp lives
        double u = static_cast<double>(i) / (N - 1);
        double qq = u * u;
        qs[i] = qq;
        vs[i] = (i == 0) ? 0.0 : varphi_2d(1.0, qq, q);
    }
    auto [jt, ok] = cache.emplace(ProfileKey{q.rel_tol}, Spline(std::move(qs), std::move(vs)));
    (void)ok;
    return jt->second;
}

double varphi_scaled(const Spline& profile, double x, double y) {
    x = std::abs(x);
    y = std::abs(y);
    double M = std::max(x, y);
    if (M == 0.0) return 0.0;
    double r = std::min(x, y) / M;
    return M * M * profile(r);
}

// int_0^cut u^-3 (1-cos ux)(1-cos uy) du, smooth for moderate cut*max(x,y)
double varphi_head_correction(double x, double y, double cut) {
    x = std::abs(x);
    y = std::abs(y);
    if (x == 0.0 || y == 0.0) return 0.0;
    auto f = [x, y](double u) {
        double ax = u * x, ay = u * y;
        double cx = (ax < 1e-4) ? 0.5 * ax * ax * (1 - ax * ax / 12.0) : 1.0 - std::cos(ax);
        double cy = (ay < 1e-4) ? 0.5 * ay * ay * (1 - ay * ay / 12.0) : 1.0 - std::cos(ay);
        return cx * cy / (u * u * u);
    };
    int nseg = 1 + static_cast<int>(cut * std::max(x, y) / 3.0);
    nseg = std::min(nseg, 64);
    double v = 0.0;
    for (int k = 0; k < nseg; ++k)
        v += gauss_legendre(f, cut * k / nseg, cut * (k + 1) / nseg, 24);
    return v;
}

}  // namespace

double L_2m_phi(int m, const UnitVector2& e, std::optional<double> phi_cutoff,
                const QuadratureConfig& q) {
    if (m < 1) throw std::invalid_argument("L_2m_phi: m must be >= 1");
    e.validate();
    if (phi_cutoff && *phi_cutoff <= 0.0)
        throw std::invalid_argument("L_2m_phi: cutoff must be positive");
    const Spline& profile = varphi_profile(q);
    const double theta_e = std::atan2(e.y, e.x);
    const int n = 2 * m;

    // grid density follows the requested tolerance; the |cos| cusp of varphi
    // converges ~ N^-3 under the trapezoid
    const bool fine = q.rel_tol <= 1e-6 && !phi_cutoff;
    int Nth = fine ? std::max(128, 6 * n) : std::max(64, 4 * n);
    if (phi_cutoff) Nth = std::max(48, Nth / 2);  // cutoff variant is quadrature-heavy
    std::vector<double> cosal(Nth), th(Nth);
    for (int k = 0; k < Nth; ++k) {
        th[k] = 2.0 * M_PI * k / Nth;
        cosal[k] = std::cos(th[k] - theta_e);
    }
    // trig factor depends only on the angular lag
    std::vector<double> cospow(Nth);
    for (int dk = 0; dk < Nth; ++dk) {
        double c = std::cos(2.0 * M_PI * dk / Nth);
        double cp = 1.0;
        for (int j = 0; j < n; ++j) cp *= c;
        cospow[dk] = cp;
    }
    // radial composite Gauss panels, graded near 0
    const double R = std::sqrt(std::max(1.0, 2.0 * n - 3.0)) + 9.0;
    const int ngl = fine ? 16 : 12;
    const double grading = fine ? 1.35 : 1.5;
    std::vector<double> edges{0.0};
    for (double eup = 0.08; eup < R; eup *= grading) edges.push_back(eup);
    edges.push_back(R);
    std::vector<double> gx, gw, rs, ws;
    gauss_legendre_nodes(ngl, gx, gw);
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        double a = edges[s], b = edges[s + 1];
        for (int i = 0; i < ngl; ++i) {
            rs.push_back(0.5 * (b - a) * gx[i] + 0.5 * (a + b));
            ws.push_back(0.5 * (b - a) * gw[i]);
        }
    }
    const int Nr = static_cast<int>(rs.size());
    std::vector<double> fr(Nr);
    for (int i = 0; i < Nr; ++i)
        fr[i] = std::pow(rs[i], n - 3) * std::exp(-0.5 * rs[i] * rs[i]) * ws[i];

    // flattened nodes: x = |rho cos(alpha)|, weight, angular index
    const std::size_t NN = static_cast<std::size_t>(Nr) * Nth;
    std::vector<double> xv(NN), wv(NN);
    std::vector<int> kv(NN);
    for (int i = 0; i < Nr; ++i)
        for (int k = 0; k < Nth; ++k) {
            xv[i * Nth + k] = std::abs(rs[i] * cosal[k]);
            wv[i * Nth + k] = fr[i];
            kv[i * Nth + k] = k;
        }
    const double dth = 2.0 * M_PI / Nth;
    auto phi_at = [&](double xa, double xb) {
        double ph = varphi_scaled(profile, xa, xb);
        if (phi_cutoff) ph -= varphi_head_correction(xa, xb, *phi_cutoff);
        return ph;
    };
    double total = 0.0;
    for (std::size_t a = 0; a < NN; ++a) {
        const double xa = xv[a], wa = wv[a];
        const int ka = kv[a];
        double row = wv[a] * cospow[0] * phi_at(xa, xa) * 0.5;
        for (std::size_t b = a + 1; b < NN; ++b) {
            int dk = ka - kv[b];
            if (dk < 0) dk += Nth;
            const double cp = cospow[dk];
            if (std::abs(cp) < 1e-14) continue;
            row += wv[b] * cp * phi_at(xa, xv[b]);
        }
        total += 2.0 * wa * row;
    }
    return total * dth * dth;
}

VarianceLimit sigma_sq_2d(int m, const QuadratureConfig& q) {
    if (m < 1) throw std::invalid_argument("sigma_sq_2d: m must be >= 1");
    double L = L_2m_phi(m, {1.0, 0.0}, std::nullopt, q);
    VarianceLimit v{m, 2.0 * L / factorial(2 * m - 2), "|h|^2", 0.0};
    v.quad_error = std::abs(v.sigma_sq) * 1e-4;  // grid-convergence estimate
    return v;
}

double increment_variance_bound(int m, double h, double s, double t,
                                const QuadratureConfig& q) {
    if (!(s >= 0.0 && s <= t && t <= 1.0))
        throw std::invalid_argument("increment_variance_bound: need 0 <= s <= t <= 1");
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("increment_variance_bound: h in (0,1)");
    if (s == t) return 0.0;
    MinMaxKernel kt = make_sum_kernel(m, h, t);
    const double c = 256.0 / factorial(2 * m);
    double v;
    if (s == 0.0) {
        v = minmax_inner_product(kt, kt, m, t, t, q);
    } else {
        MinMaxKernel ks = make_sum_kernel(m, h, s);
        double att = minmax_inner_product(kt, kt, m, t, t, q);
        double ats = minmax_inner_product(kt, ks, m, s, t, q);
        double ass = minmax_inner_product(ks, ks, m, s, s, q);
        v = att - 2.0 * ats + ass;
    }
    return c * v / (std::pow(h, 4) * std::log(1.0 / h));
}

}  // namespace ltl

#include "ltlab/brownian.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "ltlab/gaussian.hpp"
#include "ltlab/rng.hpp"

namespace ltl {

namespace {

// FFTW plans are cached per size; execution uses the new-array interface so
// per-thread buffers stay independent.
class AutocorrFFT {
  public:
    static std::vector<double> run(const std::vector<double>& counts) {
        std::size_t n = counts.size();
        std::size_t m = 1;
        while (m < 2 * n) m *= 2;
        Plans& p = plans(m);
        std::vector<double> in(m, 0.0);
        std::copy(counts.begin(), counts.end(), in.begin());
        std::vector<std::complex<double>> freq(m / 2 + 1);
        fftw_execute_dft_r2c(p.fwd, in.data(), reinterpret_cast<fftw_complex*>(freq.data()));
        for (auto& z : freq) z = z * std::conj(z);
        std::vector<double> out(m, 0.0);
        fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(freq.data()), out.data());
        std::vector<double> ac(n);
        for (std::size_t k = 0; k < n; ++k) ac[k] = out[k] / static_cast<double>(m);
        return ac;
    }

  private:
    struct Plans {
        fftw_plan fwd = nullptr, inv = nullptr;
    };
    static Plans& plans(std::size_t m) {
        static std::map<std::size_t, Plans> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
        Plans p;
        std::vector<double> in(m, 0.0), out(m, 0.0);
        std::vector<std::complex<double>> freq(m / 2 + 1);
        // FFTW_ESTIMATE keeps planning deterministic run to run
        p.fwd = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.data(),
                                     reinterpret_cast<fftw_complex*>(freq.data()), FFTW_ESTIMATE);
        p.inv = fftw_plan_dft_c2r_1d(static_cast<int>(m),
                                     reinterpret_cast<fftw_complex*>(freq.data()), out.data(),
                                     FFTW_ESTIMATE);
        auto [jt, ok] = cache.emplace(m, p);
        (void)ok;
        return jt->second;
    }
};

std::vector<double> bin_counts(const Path& path, double bin_width, double& lo_out) {
    auto [mn, mx] = std::minmax_element(path.values.begin(), path.values.end());
    // edges at half-integer multiples of the bin width: 0 is a bin center
    const long lo_idx = std::lround(std::floor(*mn / bin_width)) - 1;
    const long hi_idx = std::lround(std::ceil(*mx / bin_width)) + 1;
    lo_out = (static_cast<double>(lo_idx) - 0.5) * bin_width;
    std::vector<double> counts(static_cast<std::size_t>(hi_idx - lo_idx + 1), 0.0);
    for (double v : path.values) {
        auto j = static_cast<std::size_t>(std::lround(std::floor((v - lo_out) / bin_width)));
        counts[j] += 1.0;
    }
    return counts;
}

double riesz_bracket(double z, double h, double beta, double clip) {
    auto f = [beta, clip](double u) { return std::pow(std::max(std::abs(u), clip), -beta); };
    return 2.0 * f(z) - f(z + h) - f(z - h);
}

}  // namespace

int LocalTimeField::bin_of(double x) const {
    return static_cast<int>(std::floor((x - grid_min) / bin_width));
}

double LocalTimeField::value_at(double x) const {
    int j = bin_of(x);
    if (j < 0 || j >= static_cast<int>(mass.size())) return 0.0;
    return mass[static_cast<std::size_t>(j)];
}

double LocalTimeField::total_mass() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s * bin_width;
}

Path sample_path(int dim, int n_steps, double T, std::uint64_t seed) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("sample_path: dim must be 1 or 2");
    if (n_steps < 1) throw std::invalid_argument("sample_path: n_steps must be >= 1");
    if (!(T > 0.0 && T <= 1.0)) throw std::invalid_argument("sample_path: T must lie in (0, 1]");
    Path p;
    p.dim = dim;
    p.dt = T / n_steps;
    p.seed = seed;
    p.values.assign(static_cast<std::size_t>(n_steps + 1) * dim, 0.0);
    auto gen = substream(seed, 0);
    std::normal_distribution<double> nd(0.0, std::sqrt(p.dt));
    for (int k = 1; k <= n_steps; ++k)
        for (int c = 0; c < dim; ++c)
            p.values[static_cast<std::size_t>(k) * dim + c] =
                p.values[static_cast<std::size_t>(k - 1) * dim + c] + nd(gen);
    return p;
}

LocalTimeField local_time_field(const Path& path, double bin_width) {
    std::vector<int> idx{path.n_steps()};
    return local_time_fields_at(path, bin_width, idx).front();
}

std::vector<LocalTimeField> local_time_fields_at(const Path& path, double bin_width,
                                                 const std::vector<int>& step_indices) {
    if (path.dim != 1)
        throw std::invalid_argument("local_time_field: defined for 1-d paths only");
    if (!(bin_width > 0.0)) throw std::invalid_argument("local_time_field: bin_width > 0");
    for (int s : step_indices)
        if (s < 1 || s > path.n_steps())
            throw std::invalid_argument("local_time_field: step index out of range");

    auto [mn, mx] = std::minmax_element(path.values.begin(), path.values.end());
    const long lo_idx = std::lround(std::floor(*mn / bin_width)) - 1;
    const long hi_idx = std::lround(std::ceil(*mx / bin_width)) + 1;
    const double grid_min = (static_cast<double>(lo_idx) - 0.5) * bin_width;
    const std::size_t n_bins = static_cast<std::size_t>(hi_idx - lo_idx + 1);

    std::vector<double> occupation(n_bins, 0.0);
    std::vector<LocalTimeField> out;
    std::size_t next = 0;
    std::vector<int> order(step_indices);
    std::sort(order.begin(), order.end());

    auto flush = [&](int upto_step) {
        LocalTimeField f;
        f.grid_min = grid_min;
        f.grid_max = grid_min + static_cast<double>(n_bins) * bin_width;
        f.bin_width = bin_width;
        f.horizon = upto_step * path.dt;
        f.mass.resize(n_bins);
        for (std::size_t j = 0; j < n_bins; ++j) f.mass[j] = occupation[j] / bin_width;
        out.push_back(std::move(f));
    };

    for (int k = 0; k < path.n_steps(); ++k) {
        double a = path.at(k), b = path.at(k + 1);
        double lo = std::min(a, b), hi = std::max(a, b);
        if (hi - lo < 1e-300) {
            auto j = static_cast<std::size_t>(std::floor((a - grid_min) / bin_width));
            occupation[j] += path.dt;
        } else {
            // linear motion: time in each bin proportional to overlap length
            const double inv_span = path.dt / (hi - lo);
            int j0 = static_cast<int>(std::floor((lo - grid_min) / bin_width));
            int j1 = static_cast<int>(std::floor((hi - grid_min) / bin_width));
            if (j0 == j1) {
                occupation[static_cast<std::size_t>(j0)] += path.dt;
            } else {
                for (int j = j0; j <= j1; ++j) {
                    double bl = grid_min + j * bin_width;
                    double br = bl + bin_width;
                    double overlap = std::min(hi, br) - std::max(lo, bl);
                    occupation[static_cast<std::size_t>(j)] += overlap * inv_span;
                }
            }
        }
        while (next < order.size() && order[next] == k + 1) {
            flush(k + 1);
            ++next;
        }
    }
    return out;
}

PathFunctionalResult l2_modulus_H(const Path& path, double h, double bin_width) {
    if (path.dim != 1) throw std::invalid_argument("l2_modulus_H: 1-d paths only");
    if (!(bin_width > 0.0)) throw std::invalid_argument("l2_modulus_H: bin_width > 0");
    PathFunctionalResult r;
    r.path_seed = path.seed;
    if (h == 0.0) {
        r.discretization = {path.dt, bin_width, 0.0};
        r.value = 0.0;
        return r;
    }
    const double ah = std::abs(h);
    if (ah < bin_width)
        throw std::invalid_argument("l2_modulus_H: |h| must be at least one bin");
    const int shift = static_cast<int>(std::lround(ah / bin_width));
    const double bw = ah / shift;  // snapped so the shift is exact on the grid
    LocalTimeField f = local_time_field(path, bw);
    const int n = static_cast<int>(f.mass.size());
    double acc = 0.0;
    for (int j = -shift; j < n; ++j) {
        double a = (j >= 0 && j < n) ? f.mass[j] : 0.0;
        int jb = j + shift;
        double b = (jb >= 0 && jb < n) ? f.mass[jb] : 0.0;
        double d = b - a;
        acc += d * d;
    }
    r.value = acc * bw;
    r.discretization = {path.dt, bw, 0.0};
    return r;
}

PathFunctionalResult riesz_hamiltonian(const Path& path, double h, double gamma, double clip,
                                       double c_gamma) {
    if (path.dim != 1) throw std::invalid_argument("riesz_hamiltonian: 1-d paths only");
    if (!(gamma > 0.75 && gamma < 1.0))
        throw std::invalid_argument("riesz_hamiltonian: gamma must lie in (3/4, 1)");
    if (!(clip > 0.0)) throw std::invalid_argument("riesz_hamiltonian: clip must be positive");
    const double beta = 2.0 * gamma - 1.0;
    PathFunctionalResult r;
    r.path_seed = path.seed;
    if (h == 0.0) {
        r.value = 0.0;
        r.discretization = {path.dt, 0.0, 0.0};
        return r;
    }
    const double ah = std::abs(h);
    const double bw = ah / 32.0;
    double lo = 0.0;
    std::vector<double> counts = bin_counts(path, bw, lo);
    std::vector<double> ac = AutocorrFFT::run(counts);
    const std::size_t n = counts.size();
    double acc = ac[0] * riesz_bracket(0.0, ah, beta, clip);
    for (std::size_t d = 1; d < n; ++d)
        acc += 2.0 * ac[d] * riesz_bracket(static_cast<double>(d) * bw, ah, beta, clip);
    r.value = c_gamma * acc * path.dt * path.dt;
    r.discretization = {path.dt, bw, 0.0};
    return r;
}

PathFunctionalResult riesz_hamiltonian_direct(const Path& path, double h, double gamma,
                                              double clip, double c_gamma) {
    if (path.dim != 1) throw std::invalid_argument("riesz_hamiltonian: 1-d paths only");
    if (!(gamma > 0.75 && gamma < 1.0))
        throw std::invalid_argument("riesz_hamiltonian: gamma must lie in (3/4, 1)");
    const double beta = 2.0 * gamma - 1.0;
    const int n = path.n_steps() + 1;
    const double ah = std::abs(h);
    double acc = 0.0;
    for (int u = 0; u < n; ++u) {
        acc += riesz_bracket(0.0, ah, beta, clip);
        for (int v = u + 1; v < n; ++v)
            acc += 2.0 * riesz_bracket(path.at(v) - path.at(u), ah, beta, clip);
    }
    PathFunctionalResult r;
    r.path_seed = path.seed;
    r.value = (h == 0.0 ? 0.0 : c_gamma * acc * path.dt * path.dt);
    r.discretization = {path.dt, 0.0, 0.0};
    return r;
}

PathFunctionalResult self_intersection_lt(const Path& path, double eps) {
    if (path.dim != 1)
        throw std::invalid_argument("self_intersection_lt: divergent for 2-d paths");
    if (!(eps > 0.0)) throw std::invalid_argument("self_intersection_lt: eps must be positive");
    const double bw = 0.5 * std::sqrt(path.dt);
    double lo = 0.0;
    std::vector<double> counts = bin_counts(path, bw, lo);
    const std::size_t n = counts.size();
    // Gaussian kernel has compact effective support: windowed correlation
    const auto reach = static_cast<std::size_t>(std::ceil(7.0 * std::sqrt(eps) / bw)) + 1;
    double total = 0.0;
    const double p0 = heat_kernel(eps, 0.0);
    std::vector<double> kernel(reach + 1);
    for (std::size_t d = 0; d <= reach; ++d) kernel[d] = heat_kernel(eps, static_cast<double>(d) * bw);
    for (std::size_t j = 0; j < n; ++j) {
        if (counts[j] == 0.0) continue;
        double row = counts[j] * kernel[0];
        for (std::size_t d = 1; d <= reach && j + d < n; ++d)
            row += 2.0 * (j + d < n ? counts[j + d] : 0.0) * kernel[d];
        total += counts[j] * row;
    }
    // ordered pairs u < v: remove the diagonal and halve
    const double npts = static_cast<double>(path.n_steps() + 1);
    double value = 0.5 * (total - npts * p0) * path.dt * path.dt;
    PathFunctionalResult r;
    r.value = value;
    r.path_seed = path.seed;
    r.discretization = {path.dt, bw, eps};
    return r;
}

PathFunctionalResult self_intersection_lt_direct(const Path& path, double eps) {
    if (path.dim != 1)
        throw std::invalid_argument("self_intersection_lt: divergent for 2-d paths");
    const int n = path.n_steps() + 1;
    double acc = 0.0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) acc += heat_kernel(eps, path.at(v) - path.at(u));
    PathFunctionalResult r;
    r.value = acc * path.dt * path.dt;
    r.path_seed = path.seed;
    r.discretization = {path.dt, 0.0, eps};
    return r;
}

std::complex<double> oscillatory_time_integral(const Path& path, double r, double xi) {
    if (path.dim != 1) throw std::invalid_argument("oscillatory_time_integral: 1-d paths only");
    if (!(r > 0.0 && r <= path.horizon() + 1e-12))
        throw std::invalid_argument("oscillatory_time_integral: r out of range");
    const int kr = std::min(path.n_steps(), static_cast<int>(std::llround(r / path.dt)));
    const double br = path.at(kr);
    std::complex<double> acc{0.0, 0.0};
    for (int u = 0; u < kr; ++u) {
        double phase = xi * (br - path.at(u));
        acc += std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc * path.dt;
}

PathFunctionalResult mollified_modulus(const Path& path, double h, double eps) {
    if (path.dim != 1) throw std::invalid_argument("mollified_modulus: 1-d paths only");
    if (!(eps > 0.0)) throw std::invalid_argument("mollified_modulus: eps must be positive");
    const double ah = std::abs(h);
    const double bw = std::min(0.5 * std::sqrt(path.dt), ah / 16.0);
    double lo = 0.0;
    std::vector<double> counts = bin_counts(path, bw, lo);
    std::vector<double> ac = AutocorrFFT::run(counts);
    const std::size_t n = counts.size();
    auto bracket = [&](double z) {
        return heat_kernel(eps, z + ah) + heat_kernel(eps, z - ah) - 2.0 * heat_kernel(eps, z);
    };
    double acc = ac[0] * bracket(0.0);
    for (std::size_t d = 1; d < n; ++d) {
        double z = static_cast<double>(d) * bw;
        if (z > ah + 8.0 * std::sqrt(eps)) break;
        acc += 2.0 * ac[d] * bracket(z);
    }
    PathFunctionalResult r;
    r.value = -acc * path.dt * path.dt;  // sign chosen so the value is >= 0 like the modulus
    r.path_seed = path.seed;
    r.discretization = {path.dt, bw, eps};
    return r;
}

}  // namespace ltl

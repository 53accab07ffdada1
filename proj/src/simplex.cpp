#include "ltlab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ltlab/parallel.hpp"

namespace ltl {

void BlockFamily::validate() const {
    int min_endpoints_at_1 = 0, max_endpoints_at_8 = 0;
    for (int i = 0; i < 4; ++i) {
        auto [m, n] = blocks[i];
        if (!(1 <= m && m < n && n <= 8))
            throw std::invalid_argument("BlockFamily: block bounds must satisfy 1 <= m < n <= 8");
        if (card(i) < 4) throw std::invalid_argument("BlockFamily: each block needs >= 4 points");
        if (m == 1) ++min_endpoints_at_1;
        if (n == 8) ++max_endpoints_at_8;
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (union_card(i, j) < 6)
                throw std::invalid_argument("BlockFamily: pairwise unions need >= 6 points");
    if (min_endpoints_at_1 != 2 || max_endpoints_at_8 != 2)
        throw std::invalid_argument(
            "BlockFamily: points 1 and 8 must each be an endpoint of exactly two blocks");
}

int BlockFamily::union_card(int i, int j) const {
    auto [a1, b1] = blocks[i];
    auto [a2, b2] = blocks[j];
    if (std::max(a1, a2) <= std::min(b1, b2) + 1)
        return std::max(b1, b2) - std::min(a1, a2) + 1;
    return (b1 - a1 + 1) + (b2 - a2 + 1);
}

BlockFamily extremal_blocks(ExtremalFamily which) {
    switch (which) {
        case ExtremalFamily::B0:
            return {{{{1, 4}, {1, 6}, {5, 8}, {3, 8}}}};
        case ExtremalFamily::B1:
            return {{{{1, 8}, {1, 4}, {5, 8}, {2, 5}}}};
        case ExtremalFamily::B2:
            return {{{{1, 8}, {1, 4}, {5, 8}, {3, 6}}}};
        case ExtremalFamily::B3:
            return {{{{1, 8}, {1, 8}, {2, 5}, {4, 7}}}};
        case ExtremalFamily::B4:
            return {{{{1, 8}, {1, 8}, {2, 7}, {3, 6}}}};
    }
    throw std::logic_error("extremal_blocks: bad enum");
}

std::optional<BlockFamily> blocks_from_permutation(const std::array<int, 8>& sigma) {
    std::array<int, 9> rank{};  // rank[label] = position in the sorted order
    std::array<bool, 9> seen{};
    for (int pos = 0; pos < 8; ++pos) {
        int label = sigma[pos];
        if (label < 1 || label > 8 || seen[label])
            throw std::invalid_argument("blocks_from_permutation: not a permutation of 1..8");
        seen[label] = true;
        rank[label] = pos + 1;
    }
    for (int i = 1; i <= 4; ++i)
        if (rank[i] > rank[i + 4]) return std::nullopt;  // ordering leaves the domain
    auto iv = [&](int lo1, int lo2, int hi1, int hi2) {
        return std::pair<int, int>{std::min(rank[lo1], rank[lo2]),
                                   std::max(rank[hi1], rank[hi2])};
    };
    BlockFamily fam;
    fam.blocks[0] = iv(3, 1, 7, 5);
    fam.blocks[1] = iv(4, 1, 8, 5);
    fam.blocks[2] = iv(3, 2, 7, 6);
    fam.blocks[3] = iv(4, 2, 8, 6);
    return fam;
}

std::vector<std::pair<std::array<int, 8>, BlockFamily>> enumerate_block_families() {
    std::vector<std::pair<std::array<int, 8>, BlockFamily>> out;
    std::array<int, 8> sigma{1, 2, 3, 4, 5, 6, 7, 8};
    do {
        if (auto fam = blocks_from_permutation(sigma)) out.emplace_back(sigma, *fam);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

ExtremalFamily extremal_bound(const BlockFamily& fam) {
    fam.validate();
    int fulls = 0;
    for (int i = 0; i < 4; ++i)
        if (fam.is_full(i)) ++fulls;
    if (fulls == 0) return ExtremalFamily::B0;
    if (fulls == 1) {
        // the one block touching neither extreme starts at 2, 3 or 4
        for (int i = 0; i < 4; ++i) {
            auto [m, n] = fam.blocks[i];
            if (m > 1 && n < 8) return (m == 3) ? ExtremalFamily::B2 : ExtremalFamily::B1;
        }
        throw std::logic_error("extremal_bound: missing middle block");
    }
    if (fulls == 2) {
        // middles cover {2..7}; either one spans it entirely or they split it
        std::vector<std::pair<int, int>> mids;
        for (int i = 0; i < 4; ++i)
            if (!fam.is_full(i)) mids.push_back(fam.blocks[i]);
        for (int k = 0; k < 2; ++k) {
            if (mids[k].first == 2 && mids[k].second == 7) {
                int c = mids[1 - k].first;
                return (c == 3) ? ExtremalFamily::B4 : ExtremalFamily::B3;
            }
        }
        return ExtremalFamily::B3;
    }
    throw std::invalid_argument("extremal_bound: more than two full blocks is impossible");
}

namespace {

struct BlockStats {
    double sum = 0.0, sumsq = 0.0;
    std::int64_t n = 0;
};

MeanSE finalize(const std::vector<BlockStats>& stats) {
    double sum = 0.0, sumsq = 0.0;
    std::int64_t n = 0;
    for (const auto& s : stats) {
        sum += s.sum;
        sumsq += s.sumsq;
        n += s.n;
    }
    MeanSE r;
    r.n = static_cast<std::uint64_t>(n);
    r.mean = sum / static_cast<double>(n);
    double var = std::max(0.0, sumsq / static_cast<double>(n) - r.mean * r.mean);
    r.std_error = std::sqrt(var / static_cast<double>(n));
    return r;
}

constexpr double kFact8 = 40320.0;

}  // namespace

MeanSE block_integral(double alpha, const BlockFamily& fam, double eps, std::int64_t n_mc,
                      std::uint64_t seed, bool parallel) {
    fam.validate();
    if (!(alpha >= 0.0)) throw std::invalid_argument("block_integral: alpha must be >= 0");
    if (!(eps > 0.0)) throw std::invalid_argument("block_integral: eps must be positive");
    if (n_mc <= 0) throw std::invalid_argument("block_integral: n_mc must be positive");

    const std::int64_t block_size = 32768;
    const int n_blocks = static_cast<int>((n_mc + block_size - 1) / block_size);
    std::vector<BlockStats> stats(n_blocks);
    for_each_block(n_blocks, parallel, [&](int b) {
        auto gen = substream(seed, static_cast<std::uint64_t>(b));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        BlockStats st;
        const std::int64_t lo = static_cast<std::int64_t>(b) * block_size;
        const std::int64_t hi = std::min(n_mc, lo + block_size);
        double x[8];
        for (std::int64_t i = lo; i < hi; ++i) {
            for (double& v : x) v = U(gen);
            std::sort(std::begin(x), std::end(x));
            double prod = 1.0;
            for (const auto& [mi, ni] : fam.blocks)
                prod *= std::pow(std::max(x[ni - 1] - x[mi - 1], eps), -alpha);
            st.sum += prod;
            st.sumsq += prod * prod;
            ++st.n;
        }
        stats[b] = st;
    });
    MeanSE r = finalize(stats);
    r.mean /= kFact8;
    r.std_error /= kFact8;
    return r;
}

MeanSE direct_domain_integral(double alpha, double eps, std::int64_t n_mc, std::uint64_t seed,
                              bool parallel) {
    if (!(eps > 0.0) || n_mc <= 0) throw std::invalid_argument("direct_domain_integral: bad args");
    const std::int64_t block_size = 32768;
    const int n_blocks = static_cast<int>((n_mc + block_size - 1) / block_size);
    std::vector<BlockStats> stats(n_blocks);
    for_each_block(n_blocks, parallel, [&](int b) {
        auto gen = substream(seed ^ 0x9e3779b97f4a7c15ull, static_cast<std::uint64_t>(b));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        BlockStats st;
        const std::int64_t lo = static_cast<std::int64_t>(b) * block_size;
        const std::int64_t hi = std::min(n_mc, lo + block_size);
        double x[8];
        for (std::int64_t i = lo; i < hi; ++i) {
            // each unordered pair {x_i, x_{i+4}} maps onto the domain copy
            // with x_i < x_{i+4}: sort pairs instead of rejecting
            for (double& v : x) v = U(gen);
            for (int k = 0; k < 4; ++k)
                if (x[k] > x[k + 4]) std::swap(x[k], x[k + 4]);
            auto len = [&](int a1, int a2, int b1, int b2) {
                return std::max(x[b1 - 1], x[b2 - 1]) - std::min(x[a1 - 1], x[a2 - 1]);
            };
            double prod = std::pow(std::max(len(3, 1, 7, 5), eps), -alpha) *
                          std::pow(std::max(len(4, 1, 8, 5), eps), -alpha) *
                          std::pow(std::max(len(3, 2, 7, 6), eps), -alpha) *
                          std::pow(std::max(len(4, 2, 8, 6), eps), -alpha);
            st.sum += prod;
            st.sumsq += prod * prod;
            ++st.n;
        }
        stats[b] = st;
    });
    MeanSE r = finalize(stats);
    // the pair-sorted sample covers 1/16 of the cube
    r.mean /= 16.0;
    r.std_error /= 16.0;
    return r;
}

namespace {

struct IntegralShape {
    int dim;        // total coordinates
    int n_pairs;    // leading sorted pairs among them
    double coeff;   // exponent multiplier on delta
};

IntegralShape shape_of(SingularIntegral id) {
    switch (id) {
        case SingularIntegral::sing1: return {4, 0, 3.0};
        case SingularIntegral::sing2: return {6, 2, 5.0};
        case SingularIntegral::sing3: return {8, 4, 7.0};
    }
    throw std::logic_error("shape_of: bad enum");
}

// the four pre-clamp gap lengths of the symmetrized integrand
void gaps_of(SingularIntegral id, const double* x, double* g) {
    auto mm = [](double a, double b) { return std::pair<double, double>{std::min(a, b), std::max(a, b)}; };
    switch (id) {
        case SingularIntegral::sing1: {
            int k = 0;
            for (int i = 0; i < 2; ++i)
                for (int j = 2; j < 4; ++j) g[k++] = std::abs(x[i] - x[j]);
            return;
        }
        case SingularIntegral::sing2: {
            auto p1 = mm(x[2], x[3]), p2 = mm(x[4], x[5]);
            int k = 0;
            for (int i = 0; i < 2; ++i) {
                g[k++] = std::max(x[i], p1.second) - std::min(x[i], p1.first);
                g[k++] = std::max(x[i], p2.second) - std::min(x[i], p2.first);
            }
            return;
        }
        case SingularIntegral::sing3: {
            auto s1 = mm(x[0], x[1]), s2 = mm(x[2], x[3]);
            auto t1 = mm(x[4], x[5]), t2 = mm(x[6], x[7]);
            const std::pair<double, double> ss[2] = {s1, s2}, tt[2] = {t1, t2};
            int k = 0;
            for (const auto& s : ss)
                for (const auto& t : tt)
                    g[k++] = std::max(s.second, t.second) - std::min(s.first, t.first);
            return;
        }
    }
}

struct MixtureSampler {
    int dim;
    int n_strata;
    double w_uniform;
    double w_stratum;
    std::vector<double> r_hi, r_lo;  // stratum scale bounds, geometric
    static constexpr double kCWidth = 2.0;  // c ~ U(-1/2, 3/2)
    double log_ratio;

    MixtureSampler(int d, double eps_min) : dim(d) {
        n_strata = static_cast<int>(std::ceil(std::log2(1.0 / eps_min))) + 2;
        w_uniform = 0.5;
        w_stratum = 0.5 / n_strata;
        log_ratio = std::log(2.0);
        r_hi.resize(n_strata);
        r_lo.resize(n_strata);
        for (int k = 0; k < n_strata; ++k) {
            r_hi[k] = std::pow(2.0, -k);
            r_lo[k] = 0.5 * r_hi[k];
        }
    }

    // mixture density at a point inside the unit cube with spread s
    double density(double spread) const {
        double q = w_uniform;
        for (int k = 0; k < n_strata; ++k) {
            if (spread >= r_hi[k]) continue;
            double a = std::max(spread, r_lo[k]);
            double b = r_hi[k];
            // int_a^b r^{-d-1} (r - s) dr / (W * ln2)
            double t1 = (std::pow(a, 1.0 - dim) - std::pow(b, 1.0 - dim)) / (dim - 1.0);
            double t2 = spread / dim * (std::pow(a, -double(dim)) - std::pow(b, -double(dim)));
            q += w_stratum * (t1 - t2) / (kCWidth * log_ratio);
        }
        return q;
    }
};

}  // namespace

SingularScan singular_scan(SingularIntegral id, double delta, const VerdictConfig& cfg) {
    if (!(delta > 0.0)) throw std::invalid_argument("singular_scan: delta must be positive");
    if (cfg.decades < 2 || cfg.decades > 30 || cfg.n_samples <= 0)
        throw std::invalid_argument("singular_scan: decades must be in [2,30], samples positive");
    const IntegralShape sh = shape_of(id);
    const double alpha = sh.coeff * delta;
    const int n_eps = cfg.decades;
    std::vector<double> eps(n_eps);
    for (int j = 0; j < n_eps; ++j) eps[j] = std::pow(10.0, -(j + 1));
    const double sym = std::pow(0.5, sh.n_pairs);
    const MixtureSampler mix(sh.dim, eps.back());

    // per-component deterministic allocation; all eps values share each sample
    const int n_components = 1 + mix.n_strata;
    std::vector<std::int64_t> comp_count(n_components);
    comp_count[0] = static_cast<std::int64_t>(std::llround(mix.w_uniform * cfg.n_samples));
    for (int k = 1; k < n_components; ++k)
        comp_count[k] = static_cast<std::int64_t>(std::llround(mix.w_stratum * cfg.n_samples));
    const std::int64_t n_total = std::accumulate(comp_count.begin(), comp_count.end(),
                                                 static_cast<std::int64_t>(0));

    struct CompStats {
        std::vector<double> sum, sumsq;      // per eps
        std::vector<double> dsum, dsumsq;    // per consecutive pair
        std::int64_t n = 0;
    };
    std::vector<CompStats> stats(n_components);

    for_each_block(n_components, cfg.parallel, [&](int comp) {
        auto gen = substream(cfg.seed, static_cast<std::uint64_t>(comp) | (std::uint64_t(1) << 40));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        CompStats st;
        st.sum.assign(n_eps, 0.0);
        st.sumsq.assign(n_eps, 0.0);
        st.dsum.assign(n_eps - 1, 0.0);
        st.dsumsq.assign(n_eps - 1, 0.0);
        double x[8], g[4], w[32];
        for (std::int64_t i = 0; i < comp_count[comp]; ++i) {
            bool inside = true;
            if (comp == 0) {
                for (int d = 0; d < sh.dim; ++d) x[d] = U(gen);
            } else {
                const int k = comp - 1;
                double r = mix.r_lo[k] * std::exp(U(gen) * mix.log_ratio);
                double c = -0.5 + MixtureSampler::kCWidth * U(gen);
                for (int d = 0; d < sh.dim; ++d) {
                    x[d] = c + r * (U(gen) - 0.5);
                    if (x[d] < 0.0 || x[d] > 1.0) inside = false;
                }
            }
            ++st.n;
            if (!inside) continue;  // integrand vanishes outside the cube
            double mn = x[0], mx = x[0];
            for (int d = 1; d < sh.dim; ++d) {
                mn = std::min(mn, x[d]);
                mx = std::max(mx, x[d]);
            }
            const double q = mix.density(mx - mn);
            gaps_of(id, x, g);
            for (int j = 0; j < n_eps; ++j) {
                double prod = sym;
                for (int t = 0; t < 4; ++t) prod *= std::pow(std::max(g[t], eps[j]), -alpha);
                w[j] = prod / q;
                st.sum[j] += w[j];
                st.sumsq[j] += w[j] * w[j];
            }
            for (int j = 1; j < n_eps; ++j) {
                double d = w[j] - w[j - 1];
                st.dsum[j - 1] += d;
                st.dsumsq[j - 1] += d * d;
            }
        }
        stats[comp] = st;
    });

    SingularScan out;
    out.eps = eps;
    out.value.assign(n_eps, 0.0);
    out.std_error.assign(n_eps, 0.0);
    out.diff.assign(n_eps - 1, 0.0);
    out.diff_se.assign(n_eps - 1, 0.0);
    for (int j = 0; j < n_eps; ++j) {
        double sum = 0.0, sumsq = 0.0;
        for (const auto& st : stats) {
            sum += st.sum[j];
            sumsq += st.sumsq[j];
        }
        double mean = sum / static_cast<double>(n_total);
        double var = std::max(0.0, sumsq / static_cast<double>(n_total) - mean * mean);
        out.value[j] = mean;
        out.std_error[j] = std::sqrt(var / static_cast<double>(n_total));
    }
    for (int j = 0; j + 1 < n_eps; ++j) {
        double sum = 0.0, sumsq = 0.0;
        for (const auto& st : stats) {
            sum += st.dsum[j];
            sumsq += st.dsumsq[j];
        }
        double mean = sum / static_cast<double>(n_total);
        double var = std::max(0.0, sumsq / static_cast<double>(n_total) - mean * mean);
        out.diff[j] = mean;
        out.diff_se[j] = std::sqrt(var / static_cast<double>(n_total));
    }
    return out;
}

Verdict convergence_verdict(SingularIntegral id, double delta, const VerdictConfig& cfg) {
    SingularScan scan = singular_scan(id, delta, cfg);
    const int n = static_cast<int>(scan.eps.size());
    Verdict v;
    for (int j = 0; j < n; ++j) v.evidence.emplace_back(scan.eps[j], scan.value[j]);
    v.evidence_se = scan.std_error;

    // growth coefficient: weighted LS of value on ln(1/eps) over the last 5 points
    {
        const int k0 = std::max(0, n - 5);
        double sx = 0, sy = 0, sxx = 0, sxy = 0, np = 0;
        for (int j = k0; j < n; ++j) {
            double x = std::log(1.0 / scan.eps[j]);
            sx += x;
            sy += scan.value[j];
            sxx += x * x;
            sxy += x * scan.value[j];
            np += 1;
        }
        double det = np * sxx - sx * sx;
        v.fitted_growth = (np * sxy - sx * sy) / det;
        double mx = sx / np;
        double ss = 0;
        for (int j = k0; j < n; ++j) {
            double x = std::log(1.0 / scan.eps[j]);
            double fit = v.fitted_growth * (x - mx) + sy / np;
            double res = scan.value[j] - fit;
            ss += res * res + scan.std_error[j] * scan.std_error[j];
        }
        double sxx_c = sxx - sx * sx / np;
        v.fitted_growth_se = std::sqrt(ss / std::max(1.0, np - 2.0) / sxx_c);
    }

    // stabilization: the last two per-decade increments negligible
    auto stabilized = [&](int j) {
        double tol = std::max(0.01 * std::abs(scan.value.back()), 3.0 * scan.diff_se[j]);
        return std::abs(scan.diff[j]) <= tol;
    };
    const int nd = n - 1;
    if (nd >= 2 && stabilized(nd - 1) && stabilized(nd - 2)) {
        v.status = VerdictStatus::converges;
        v.model = "stabilized";
        v.diff_decay_rate = 0.0;
        v.diff_decay_rate_se = 0.0;
        return v;
    }

    // difference-ratio classification over the significant positive increments
    std::vector<std::pair<double, double>> pts;  // (decade index, ln diff) with weight-ish se
    std::vector<double> lse;
    for (int j = 0; j < nd; ++j) {
        if (scan.diff[j] > 3.0 * scan.diff_se[j] && scan.diff[j] > 0.0) {
            pts.emplace_back(static_cast<double>(j), std::log(scan.diff[j]));
            lse.push_back(scan.diff_se[j] / scan.diff[j]);
        }
    }
    if (pts.size() < 4) {
        v.status = VerdictStatus::inconclusive;
        v.model = "insufficient-signal";
        v.diff_decay_rate = 0.0;
        v.diff_decay_rate_se = 0.0;
        return v;
    }
    // keep the deepest 8 points (asymptotic regime)
    if (pts.size() > 8) {
        lse.erase(lse.begin(), lse.end() - 8);
        pts.erase(pts.begin(), pts.end() - 8);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, np = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        np += 1;
    }
    double det = np * sxx - sx * sx;
    double slope = (np * sxy - sx * sy) / det;
    double mx = sx / np, my = sy / np;
    double ss = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double res = pts[i].second - (my + slope * (pts[i].first - mx));
        ss += res * res + lse[i] * lse[i];
    }
    double sxx_c = sxx - sx * sx / np;
    double slope_se = std::sqrt(ss / std::max(1.0, np - 2.0) / sxx_c);
    v.diff_decay_rate = slope;
    v.diff_decay_rate_se = slope_se;

    if (slope < -3.0 * slope_se) {
        v.status = VerdictStatus::converges;
        v.model = "geometric-tail";
    } else if (slope > 3.0 * slope_se) {
        v.status = VerdictStatus::diverges;
        v.model = "power-growth";
    } else if (std::abs(slope) <= 3.0 * slope_se && slope_se < 0.2) {
        // flat, significantly positive increments: logarithmic growth
        v.status = VerdictStatus::diverges;
        v.model = "log-growth";
    } else {
        v.status = VerdictStatus::inconclusive;
        v.model = "ambiguous-slope";
    }
    return v;
}

}  // namespace ltl

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ltlab/quadrature.hpp"
#include "ltlab/rng.hpp"

namespace ltl {

// Four rank intervals [m_i, n_i] inside {1..8} recording which order
// statistics span each singular factor.
struct BlockFamily {
    std::array<std::pair<int, int>, 4> blocks;  // 1-based, m_i < n_i

    void validate() const;
    int card(int i) const { return blocks[i].second - blocks[i].first + 1; }
    int union_card(int i, int j) const;
    bool is_full(int i) const { return blocks[i].first == 1 && blocks[i].second == 8; }
};

enum class ExtremalFamily { B0, B1, B2, B3, B4 };
BlockFamily extremal_blocks(ExtremalFamily which);

// Rank-coordinate block family of a permutation (sigma(k) = label of the k-th
// smallest coordinate), or nullopt when the ordering leaves the domain
// {x_i < x_{4+i}}. Rejection is a normal outcome.
std::optional<BlockFamily> blocks_from_permutation(const std::array<int, 8>& sigma);

// All accepted permutations (8!/2^4 = 2520 of them) with their families.
std::vector<std::pair<std::array<int, 8>, BlockFamily>> enumerate_block_families();

// Dominating extremal family by interval shrinkage (shrinking a block can
// only increase the integrand).
ExtremalFamily extremal_bound(const BlockFamily& fam);

// I_{alpha,B} = int_{0<x_1<...<x_8<1} prod_i max(x_{n_i} - x_{m_i}, eps)^-alpha
// by sorted-uniform Monte Carlo; deterministic given seed.
MeanSE block_integral(double alpha, const BlockFamily& fam, double eps, std::int64_t n_mc,
                      std::uint64_t seed, bool parallel = true);

// The clamped integral over the full domain {x in [0,1]^8 : x_i < x_{4+i}}
// with the four interval factors; the direct side of the enumeration check.
MeanSE direct_domain_integral(double alpha, double eps, std::int64_t n_mc, std::uint64_t seed,
                              bool parallel = true);

enum class SingularIntegral { sing1, sing2, sing3 };
enum class VerdictStatus { converges, diverges, inconclusive };

struct Verdict {
    VerdictStatus status;
    double fitted_growth;      // linear growth coefficient of value vs ln(1/eps)
    double fitted_growth_se;
    double diff_decay_rate;    // slope of ln(per-decade increment) vs decade
    double diff_decay_rate_se;
    std::vector<std::pair<double, double>> evidence;  // (eps, value), eps decreasing
    std::vector<double> evidence_se;
    std::string model;         // "stabilized" | "geometric-tail" | "log-growth" | "power-growth"
};

struct VerdictConfig {
    int decades = 12;          // eps = 10^-1 .. 10^-decades
    std::int64_t n_samples = 1500000;
    std::uint64_t seed = 20240607;
    bool parallel = true;
};

// Clamped-value scan of one of the three singular integrals over shrinking
// eps, with the convergence/divergence classification. Values come from a
// scale-stratified mixture importance sampler (uniform component plus
// log-uniform cluster-scale strata with closed-form mixture density) so the
// deep-clamp regime keeps a bounded likelihood ratio; all eps values share
// one sample stream.
Verdict convergence_verdict(SingularIntegral id, double delta, const VerdictConfig& cfg);

// Raw scan without classification (exposed for the CLI table).
struct SingularScan {
    std::vector<double> eps;
    std::vector<double> value;
    std::vector<double> std_error;
    std::vector<double> diff;      // value_k - value_{k-1} (CRN), k >= 1
    std::vector<double> diff_se;
};
SingularScan singular_scan(SingularIntegral id, double delta, const VerdictConfig& cfg);

}  // namespace ltl

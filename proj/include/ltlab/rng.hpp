#pragma once

#include <cstdint>
#include <random>

namespace ltl {

// Independent substream for (seed, block); the same pair always yields the
// same generator regardless of which thread consumes it.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
        0x9e3779b9u};
    return std::mt19937_64(seq);
}

struct MeanSE {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

// Streaming mean/variance accumulator (Welford).
class Accumulator {
  public:
    void add(double x) {
        ++n_;
        double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    void merge(const Accumulator& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        double d = o.mean_ - mean_;
        std::uint64_t n = n_ + o.n_;
        m2_ += o.m2_ + d * d * (static_cast<double>(n_) * static_cast<double>(o.n_)) /
                           static_cast<double>(n);
        mean_ += d * static_cast<double>(o.n_) / static_cast<double>(n);
        n_ = n;
    }
    std::uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    MeanSE result() const {
        MeanSE r;
        r.mean = mean_;
        r.n = n_;
        if (n_ > 1) r.std_error = std::sqrt(variance() / static_cast<double>(n_));
        return r;
    }

  private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace ltl

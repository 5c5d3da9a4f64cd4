#ifndef PRIORCI_MC_HPP
#define PRIORCI_MC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "priorci/interval.hpp"
#include "priorci/parallel.hpp"

namespace priorci {

/// Counter-style generator: each replication owns a substream keyed by
/// (seed, index), so estimates are independent of how replications are
/// partitioned across threads.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 g(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
        g.next();
        return g;
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on the open interval (0,1); never 0, safe under log.
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Box-Muller pairs, second deviate cached.
class NormalSampler {
public:
    explicit NormalSampler(SplitMix64 rng) : rng_(rng) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.uniform();
        const double u2 = rng_.uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long reps = 0;
    std::uint64_t seed = 0;
};

/// Maps summary statistics to an interval; rules that know sigma ignore s.
using IntervalRule = std::function<Interval(double xbar, double s)>;

enum class SampleMode {
    sufficiency,  // draw (xbar, s) from their exact joint law
    raw           // draw n variates and reduce
};

namespace detail {

struct SummarySample {
    double xbar;
    double s;
};

inline SummarySample draw_summary(NormalSampler& normals, double mu, double sigma, int n,
                                  SampleMode mode) {
    const double root_n = std::sqrt(static_cast<double>(n));
    if (mode == SampleMode::sufficiency) {
        const double xbar = mu + sigma / root_n * normals.next();
        double chi2 = 0.0;
        for (int i = 1; i < n; ++i) {
            const double z = normals.next();
            chi2 += z * z;
        }
        const double s = n > 1 ? sigma * std::sqrt(chi2 / (n - 1)) : 0.0;
        return {xbar, s};
    }
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = mu + sigma * normals.next();
        sum += x;
        sumsq += x * x;
    }
    const double xbar = sum / n;
    const double ss = std::fmax(0.0, sumsq - static_cast<double>(n) * xbar * xbar);
    const double s = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    return {xbar, s};
}

/// Runs reps substreamed replications of a per-sample statistic and returns
/// its mean with a standard error. Accumulation is per fixed block, blocks
/// combined in index order, so the result is bitwise stable across worker
/// counts.
inline McEstimate mc_mean(double mu, double sigma, int n, long long reps, std::uint64_t seed,
                          SampleMode mode,
                          const std::function<double(const SummarySample&)>& statistic) {
    if (reps < 1) throw std::invalid_argument("mc_mean: reps must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("mc_mean: sigma must be positive");
    if (n < 1) throw std::invalid_argument("mc_mean: n must be >= 1");

    constexpr long long block = 8192;
    const auto nblocks = static_cast<std::size_t>((reps + block - 1) / block);
    std::vector<double> sums(nblocks, 0.0), sumsqs(nblocks, 0.0);
    parallel_for(nblocks, [&](std::size_t bi) {
        const long long first = static_cast<long long>(bi) * block;
        const long long last = std::min(first + block, reps);
        double acc = 0.0, accsq = 0.0;
        for (long long rep = first; rep < last; ++rep) {
            NormalSampler normals(SplitMix64::substream(seed, static_cast<std::uint64_t>(rep)));
            const double v = statistic(draw_summary(normals, mu, sigma, n, mode));
            acc += v;
            accsq += v * v;
        }
        sums[bi] = acc;
        sumsqs[bi] = accsq;
    });
    double total = 0.0, totalsq = 0.0;
    for (std::size_t bi = 0; bi < nblocks; ++bi) {
        total += sums[bi];
        totalsq += sumsqs[bi];
    }
    McEstimate est;
    est.reps = reps;
    est.seed = seed;
    est.mean = total / static_cast<double>(reps);
    const double var = std::fmax(0.0, totalsq / static_cast<double>(reps) - est.mean * est.mean);
    est.std_error = std::sqrt(var / static_cast<double>(reps));
    return est;
}

}  // namespace detail

/// Fraction of replications whose interval contains mu.
inline McEstimate mc_coverage(double mu, double sigma, int n, const IntervalRule& rule,
                              long long reps, std::uint64_t seed,
                              SampleMode mode = SampleMode::sufficiency) {
    return detail::mc_mean(mu, sigma, n, reps, seed, mode,
                           [&](const detail::SummarySample& smp) {
                               return rule(smp.xbar, smp.s).contains(mu) ? 1.0 : 0.0;
                           });
}

/// Average interval length across replications.
inline McEstimate mc_expected_length(double mu, double sigma, int n, const IntervalRule& rule,
                                     long long reps, std::uint64_t seed,
                                     SampleMode mode = SampleMode::sufficiency) {
    return detail::mc_mean(mu, sigma, n, reps, seed, mode,
                           [&](const detail::SummarySample& smp) {
                               return rule(smp.xbar, smp.s).length();
                           });
}

}  // namespace priorci

#endif

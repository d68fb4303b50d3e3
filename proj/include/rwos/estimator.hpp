#pragma once
/**
 * @file estimator.hpp
 * @brief Monte Carlo estimates u(z) = E_z[beta_D(B_tau)] with standard
 * errors, computed in parallel with results independent of the schedule.
 *
 * Paths are grouped in fixed chunks of 4096. Every path draws from its own
 * counter-based stream keyed by (point seed, path index, attempt), each chunk
 * is summed sequentially, and chunk totals are combined in chunk order with
 * compensated summation. The worker count therefore never changes a result
 * bit.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rwos/errors.hpp"
#include "rwos/reflection.hpp"
#include "rwos/rng.hpp"
#include "rwos/walker.hpp"

namespace rwos {

inline constexpr std::uint64_t kChunkPaths = 4096;

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
    double mean_steps = 0.0;
    double mean_reflections = 0.0;
    std::uint64_t resampled = 0;
    bool flagged = false;  // resamples exceeded 0.1% of paths
};

struct EstimatorOptions {
    unsigned threads = 0;        // 0: RWOS_THREADS, else hardware concurrency
    unsigned max_attempts = 16;  // per path, before the estimate fails
};

/// Worker count: explicit request, then RWOS_THREADS, then the hardware.
inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RWOS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0, n) on up to `threads` workers. If tasks throw, the
/// exception of the lowest task index is rethrown.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
        else comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

struct ChunkTotals {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t paths = 0;
    std::uint64_t steps = 0;
    std::uint64_t reflections = 0;
    std::uint64_t resampled = 0;
};

// Simulates paths [first, first + count) from `start`.
template <class Sampler, class P>
ChunkTotals run_chunk(const Sampler& sampler, const P& start, const WalkConfig& cfg,
                      std::uint64_t point_seed, std::uint64_t first, std::uint64_t count,
                      unsigned max_attempts) {
    ChunkTotals t;
    const std::uint64_t key = mix64(point_seed);
    for (std::uint64_t k = first; k < first + count; ++k) {
        for (unsigned attempt = 0;; ++attempt) {
            if (attempt == max_attempts)
                throw NumericError("path " + std::to_string(k) + " failed " +
                                   std::to_string(max_attempts) + " times; resample budget exhausted");
            PathRng rng(key, k, attempt);
            typename Sampler::Sample s;
            const WalkStatus status = sampler.sample(start, cfg, rng, s);
            if (status != WalkStatus::ok) {
                ++t.resampled;
                continue;
            }
            t.sum += s.value;
            t.sum_sq += s.value * s.value;
            t.steps += s.steps;
            t.reflections += s.reflections;
            break;
        }
    }
    t.paths = count;
    return t;
}

inline Estimate combine(std::span<const ChunkTotals> chunks) {
    CompensatedSum sum, sum_sq;
    std::uint64_t n = 0, steps = 0, reflections = 0, resampled = 0;
    for (const auto& c : chunks) {
        sum.add(c.sum);
        sum_sq.add(c.sum_sq);
        n += c.paths;
        steps += c.steps;
        reflections += c.reflections;
        resampled += c.resampled;
    }
    Estimate e;
    e.n_paths = n;
    e.mean = sum.value() / double(n);
    const double var = n > 1 ? std::max(0.0, (sum_sq.value() - sum.value() * e.mean) / double(n - 1)) : 0.0;
    e.std_error = std::sqrt(var / double(n));
    e.mean_steps = double(steps) / double(n);
    e.mean_reflections = double(reflections) / double(n);
    e.resampled = resampled;
    e.flagged = double(resampled) > 1e-3 * double(n);
    return e;
}

}  // namespace detail

/// Estimates at several start points; point i uses seed derive_seed(seed, i)
/// unless `seeds` supplies explicit per-point seeds.
template <class Sampler, class P>
std::vector<Estimate> estimate_points(const Sampler& sampler, std::span<const P> points,
                                      std::span<const std::uint64_t> seeds, std::uint64_t n_paths,
                                      const WalkConfig& cfg, const EstimatorOptions& opt = {}) {
    if (n_paths < 2) throw ConfigError("n_paths must be at least 2");
    const std::uint64_t chunks_per_point = (n_paths + kChunkPaths - 1) / kChunkPaths;
    const std::size_t n_tasks = points.size() * chunks_per_point;
    std::vector<detail::ChunkTotals> totals(n_tasks);
    parallel_for(n_tasks, resolve_threads(opt.threads), [&](std::size_t task) {
        const std::size_t point = task / chunks_per_point;
        const std::uint64_t chunk = task % chunks_per_point;
        const std::uint64_t first = chunk * kChunkPaths;
        const std::uint64_t count = std::min(kChunkPaths, n_paths - first);
        totals[task] = detail::run_chunk(sampler, points[point], cfg, seeds[point], first, count,
                                         opt.max_attempts);
    });
    std::vector<Estimate> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        out.push_back(detail::combine(
            std::span<const detail::ChunkTotals>(totals).subspan(i * chunks_per_point, chunks_per_point)));
    return out;
}

/// Planar sampler adapter for estimate_points.
struct PlanarSampler {
    using Sample = ExitSample;
    const WalkGeometry& geometry;

    WalkStatus sample(Point2 start, const WalkConfig& cfg, PathRng& rng, ExitSample& out) const {
        return try_sample_exit(geometry, start, cfg, rng, out);
    }
};

namespace detail {
template <class Domain, class P>
void require_interior(const Domain& domain, const P& p, std::size_t index) {
    if (!contains(domain, p))
        throw ConfigError("evaluation point " + std::to_string(index) + " is not inside the domain");
}
}  // namespace detail

/// u(point) for the boundary-value problem of `geometry`, seeded by cfg.rng_seed.
inline Estimate estimate_u(const WalkGeometry& geometry, Point2 point, std::uint64_t n_paths,
                           const WalkConfig& cfg, const EstimatorOptions& opt = {}) {
    validate(cfg, geometry.domain());
    detail::require_interior(geometry.domain(), point, 0);
    const std::uint64_t seed = cfg.rng_seed;
    return estimate_points(PlanarSampler{geometry}, std::span<const Point2>(&point, 1),
                           std::span<const std::uint64_t>(&seed, 1), n_paths, cfg, opt)
        .front();
}

/// Point seeds used by estimate_batch.
inline std::vector<std::uint64_t> batch_seeds(std::uint64_t seed, std::size_t n) {
    std::vector<std::uint64_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = derive_seed(seed, i);
    return s;
}

/// Element-wise equal to estimate_u(points[i]) with rng_seed = derive_seed(cfg.rng_seed, i).
inline std::vector<Estimate> estimate_batch(const WalkGeometry& geometry, std::span<const Point2> points,
                                            std::uint64_t n_paths, const WalkConfig& cfg,
                                            const EstimatorOptions& opt = {}) {
    validate(cfg, geometry.domain());
    for (std::size_t i = 0; i < points.size(); ++i) detail::require_interior(geometry.domain(), points[i], i);
    const auto seeds = batch_seeds(cfg.rng_seed, points.size());
    return estimate_points(PlanarSampler{geometry}, points, std::span<const std::uint64_t>(seeds), n_paths,
                           cfg, opt);
}

}  // namespace rwos

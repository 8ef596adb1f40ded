#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charsum/evaluator.hpp"

namespace charsum::sweep {

/// One fully specified sum: instance plus both characters as (c, s) pairs.
struct InstanceParams {
    unsigned m = 3;
    std::uint64_t A = 0;
    std::uint64_t B = 1;
    std::uint64_t k = 1;
    std::uint64_t c1 = 1;
    int s1 = 1;
    std::uint64_t c2 = 1;
    int s2 = 1;

    evaluator::SumInstance instance() const { return {m, A, B, k}; }
    characters::Character chi1() const { return {m, s1, c1}; }
    characters::Character chi2() const { return {m, s2, c2}; }

    friend auto operator<=>(const InstanceParams&, const InstanceParams&) = default;
};

std::string to_string(const InstanceParams& p);

/// Every (A in [0,2^m), B odd, k in ks, all characters) for m in [m_min, m_max].
class ExhaustiveGrid {
public:
    ExhaustiveGrid(unsigned m_min, unsigned m_max, std::vector<std::uint64_t> ks);

    std::size_t size() const noexcept { return total_; }
    InstanceParams at(std::size_t index) const;

private:
    struct Block {
        unsigned m;
        std::size_t first;
        std::size_t count;
    };
    std::vector<std::uint64_t> ks_;
    std::vector<Block> blocks_;
    std::size_t total_ = 0;
};

/// What a biased random draw aims at. The evaluator, not the sampler, decides
/// the case actually reached.
enum class Target {
    LargeEven,
    LargeOdd,
    MidRange,
    EdgeT3,
    EdgeT2,
    Tiny,
    ZeroParity,
    ZeroImprimitive,
    ZeroCondition,
    SwappedBEven,
    Reduced,
    Uniform,
};

inline constexpr std::size_t kTargetCount = 12;

/**
 * Deterministic random instances over m in [m_min, m_max]. Draw i depends
 * only on (seed, i), so any sharding of indices reproduces the same set.
 * Draws cycle through the targets so every regime is well populated.
 */
class BiasedSampler {
public:
    BiasedSampler(std::uint64_t seed, unsigned m_min, unsigned m_max);

    InstanceParams at(std::size_t index) const;
    InstanceParams draw(std::size_t index, Target target) const;

private:
    std::uint64_t seed_;
    unsigned m_min_;
    unsigned m_max_;
};

struct CheckResult {
    InstanceParams params;
    evaluator::ClosedForm closed;
    cyclotomic::CycInt oracle{3};
    bool match = false;
    double closed_seconds = 0;
    double brute_seconds = 0;
};

CheckResult check_instance(const InstanceParams& params);

/// Worker count from an explicit flag, else CHARSUM_JOBS, else hardware.
unsigned resolve_jobs(std::optional<unsigned> flag);

/// Runs body(index, worker) for index in [0, count) on `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t, unsigned)>& body);

struct RunReport {
    std::size_t instances_checked = 0;
    std::vector<InstanceParams> mismatches;  // sorted
    std::map<std::string, std::size_t> case_counts;
    double closed_seconds = 0;  // summed per-instance time
    double brute_seconds = 0;
    double wall_seconds = 0;
    std::optional<std::uint64_t> seed;

    bool ok() const noexcept { return mismatches.empty(); }
};

using InstanceSource = std::function<InstanceParams(std::size_t)>;

RunReport run_check(const InstanceSource& source, std::size_t count, unsigned jobs);

}  // namespace charsum::sweep

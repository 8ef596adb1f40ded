#include "charsum/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "charsum/oracle.hpp"
#include "charsum/ring2adic.hpp"

namespace charsum::sweep {

using ring2adic::mask;
using ring2adic::pow2;
using ring2adic::u64;

namespace {

u64 splitmix64(u64 x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(u64 seed) : engine_(seed) {}

    u64 uniform(u64 lo, u64 hi) { return std::uniform_int_distribution<u64>(lo, hi)(engine_); }
    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_) < p; }
    int sign() { return uniform(0, 1) ? 1 : -1; }
    u64 below_pow2(unsigned bits) { return bits == 0 ? 0 : uniform(0, mask(bits)); }
    /// Odd number in [1, 2^bits).
    u64 odd_below(unsigned bits) { return bits <= 1 ? 1 : (below_pow2(bits - 1) << 1) | 1; }
    u64 any_c(unsigned m) { return uniform(1, pow2(m - 2)); }
    u64 odd_c(unsigned m) { return odd_below(m - 2); }
    u64 even_c(unsigned m) { return 2 * uniform(1, pow2(m - 3)); }

    template <class T, std::size_t N>
    T pick(const std::array<T, N>& xs)
    {
        return xs[uniform(0, N - 1)];
    }

private:
    std::mt19937_64 engine_;
};

constexpr std::array<u64, 12> kExponents = {1, 2, 3, 4, 5, 6, 7, 8, 12, 16, 24, 40};

// Closed-interval range of d = m - n reaching the target, clipped to n >= 1.
struct DRange {
    unsigned lo;
    unsigned hi;
};

std::optional<DRange> d_range(Target target, unsigned m, unsigned t)
{
    DRange r{1, 0};
    switch (target) {
    case Target::LargeEven:
    case Target::LargeOdd:
    case Target::ZeroCondition: r = {2 * t + 5, m - 1}; break;
    case Target::MidRange: r = {t + 4, std::min(2 * t + 4, m - 1)}; break;
    case Target::EdgeT3: r = {t + 3, std::min(t + 3, m - 1)}; break;
    case Target::EdgeT2: r = {t + 2, std::min(t + 2, m - 1)}; break;
    case Target::Tiny: r = {1, std::min(t + 1, m - 1)}; break;
    default: return std::nullopt;
    }
    if (target == Target::LargeEven && r.lo % 2 == 1) {
        ++r.lo;
    }
    if (target == Target::LargeOdd && r.lo % 2 == 0) {
        ++r.lo;
    }
    if (r.lo > r.hi) {
        return std::nullopt;
    }
    return r;
}

unsigned pick_d(Rng& rng, Target target, DRange r)
{
    if (target == Target::LargeEven || target == Target::LargeOdd) {
        const unsigned steps = (r.hi - r.lo) / 2;
        return r.lo + 2 * static_cast<unsigned>(rng.uniform(0, steps));
    }
    return static_cast<unsigned>(rng.uniform(r.lo, r.hi));
}

// Residue of B mod 2^bits making x0 a root of C(x) / 2^(n+t), given
// c1 = 2^(n+t) c3, N and n from the regime. Random above bit `bits`.
u64 steer_B(Rng& rng, const InstanceParams& p, unsigned n, unsigned t, unsigned N, u64 c3, u64 x0, unsigned bits)
{
    const unsigned w = std::max(bits, 1u);
    const auto mul = [w](u64 a, u64 b) { return ring2adic::mul_mod2w(a, b, w); };
    const u64 xk = ring2adic::pow_mod2w(x0, p.k, w);
    const u64 rr = mul(ring2adic::compute_R(N, w), ring2adic::inv_mod2w(ring2adic::compute_R(N + n, w), w));
    const u64 a1 = p.A >> n;
    const u64 k1 = p.k >> t;
    const u64 tail = mul(mul(ring2adic::inv_mod2w(c3, w), p.c2), mul(mul(a1, k1), mul(xk, rr)));
    const u64 low = (0 - mul(p.A, xk) - tail) & mask(w);
    return (low | (rng.below_pow2(p.m - w) << w)) & mask(p.m);
}

std::optional<InstanceParams> draw_main(Rng& rng, Target target, unsigned m)
{
    const u64 k = rng.pick(kExponents);
    const unsigned t = ring2adic::v2(k);
    const auto range = d_range(target, m, t);
    if (!range) {
        return std::nullopt;
    }
    const unsigned d = pick_d(rng, target, *range);
    const unsigned n = m - d;

    InstanceParams p;
    p.m = m;
    p.k = k;
    p.A = rng.odd_below(d) << n;
    p.B = rng.odd_below(m);
    p.c2 = rng.odd_c(m);
    p.s2 = rng.sign();
    p.c1 = rng.any_c(m);
    p.s1 = rng.sign();
    const u64 top = pow2(m - 2);

    switch (target) {
    case Target::LargeEven:
    case Target::LargeOdd: {
        const u64 c3 = rng.odd_below(d - t - 2);
        p.c1 = c3 << (n + t);
        if (t > 0) {
            p.s1 = 1;
        }
        if (rng.chance(0.75)) {
            const unsigned levels = (m + n) / 2 + t - n - t;
            p.B = steer_B(rng, p, n, t, (d + 1) / 2, c3, rng.odd_below(m), levels);
        }
        break;
    }
    case Target::ZeroCondition:
        if (t > 0 && rng.chance(0.3)) {
            p.c1 = rng.odd_below(d - t - 2) << (n + t);
            p.s1 = -1;
        } else if (rng.chance(0.3)) {
            p.c1 = rng.odd_below(d - t - 2) << (n + t);
        }
        break;
    case Target::MidRange: {
        const u64 c3 = rng.odd_below(d - t - 2);
        p.c1 = c3 << (n + t);
        if (rng.chance(0.6)) {
            p.s1 = 1;
        }
        if (rng.chance(0.75)) {
            const u64 x0 = (t == 0 && rng.chance(0.5)) ? mask(m) : 1;
            p.B = steer_B(rng, p, n, t, t + 2, c3, x0, d - t - 2);
        }
        break;
    }
    case Target::EdgeT3:
        if (rng.chance(0.7)) {
            p.c1 = top / 2;
        }
        break;
    case Target::EdgeT2:
        if (rng.chance(0.7)) {
            p.c1 = top;
        }
        break;
    case Target::Tiny:
        if (rng.chance(0.6)) {
            p.c1 = top;
            p.s1 = 1;
        }
        if (rng.chance(0.1)) {
            p.A = 0;
        }
        break;
    default: break;
    }
    return p;
}

InstanceParams draw_uniform(Rng& rng, unsigned m)
{
    InstanceParams p;
    p.m = m;
    p.A = rng.below_pow2(m);
    p.B = rng.below_pow2(m);
    p.k = rng.chance(0.5) ? rng.pick(kExponents) : rng.uniform(1, 1000);
    p.c1 = rng.any_c(m);
    p.s1 = rng.sign();
    p.c2 = rng.any_c(m);
    p.s2 = rng.sign();
    return p;
}

// A and B of opposite parity.
void opposite_parity(Rng& rng, InstanceParams& p)
{
    p.A = rng.below_pow2(p.m);
    p.B = (rng.below_pow2(p.m) & ~u64{1}) | ((p.A & 1) ^ 1);
}

}  // namespace

std::string to_string(const InstanceParams& p)
{
    std::ostringstream os;
    os << "m=" << p.m << " A=" << p.A << " B=" << p.B << " k=" << p.k << " c1=" << p.c1 << " s1=" << p.s1
       << " c2=" << p.c2 << " s2=" << p.s2;
    return os.str();
}

ExhaustiveGrid::ExhaustiveGrid(unsigned m_min, unsigned m_max, std::vector<u64> ks) : ks_(std::move(ks))
{
    if (m_min < 3 || m_max < m_min || m_max > 12 || ks_.empty()) {
        throw std::invalid_argument("exhaustive grid needs 3 <= m_min <= m_max <= 12 and a nonempty k list");
    }
    for (unsigned m = m_min; m <= m_max; ++m) {
        const std::size_t chars = 2 * pow2(m - 2);
        const std::size_t count = pow2(m) * pow2(m - 1) * ks_.size() * chars * chars;
        blocks_.push_back({m, total_, count});
        total_ += count;
    }
}

InstanceParams ExhaustiveGrid::at(std::size_t index) const
{
    if (index >= total_) {
        throw std::out_of_range("grid index out of range");
    }
    const Block& b =
        *std::find_if(blocks_.rbegin(), blocks_.rend(), [index](const Block& blk) { return blk.first <= index; });
    std::size_t i = index - b.first;
    const u64 q = pow2(b.m - 2);
    const auto next = [&i](std::size_t radix) {
        const std::size_t digit = i % radix;
        i /= radix;
        return digit;
    };
    InstanceParams p;
    p.m = b.m;
    p.s2 = next(2) ? -1 : 1;
    p.c2 = next(q) + 1;
    p.s1 = next(2) ? -1 : 1;
    p.c1 = next(q) + 1;
    p.k = ks_[next(ks_.size())];
    p.B = 2 * next(pow2(b.m - 1)) + 1;
    p.A = next(pow2(b.m));
    return p;
}

BiasedSampler::BiasedSampler(u64 seed, unsigned m_min, unsigned m_max) : seed_(seed), m_min_(m_min), m_max_(m_max)
{
    if (m_min < 3 || m_max < m_min || m_max > ring2adic::kMaxModulusExponent) {
        throw std::invalid_argument("sampler needs 3 <= m_min <= m_max <= 30");
    }
}

InstanceParams BiasedSampler::at(std::size_t index) const
{
    return draw(index, static_cast<Target>(index % kTargetCount));
}

InstanceParams BiasedSampler::draw(std::size_t index, Target target) const
{
    Rng rng(splitmix64(seed_ ^ splitmix64(index)));
    const auto m = static_cast<unsigned>(rng.uniform(m_min_, m_max_));

    switch (target) {
    case Target::Uniform: return draw_uniform(rng, m);
    case Target::ZeroParity: {
        InstanceParams p = draw_uniform(rng, m);
        p.B = (p.B & ~u64{1}) | (p.A & 1);
        return p;
    }
    case Target::ZeroImprimitive: {
        InstanceParams p = draw_uniform(rng, m);
        opposite_parity(rng, p);
        p.c1 = rng.odd_c(m);
        p.c2 = m > 3 ? rng.even_c(m) : 2;
        return p;
    }
    case Target::Reduced: {
        InstanceParams p = draw_uniform(rng, m);
        opposite_parity(rng, p);
        p.c1 = m > 3 ? rng.even_c(m) : 2;
        p.c2 = m > 3 ? rng.even_c(m) : 2;
        return p;
    }
    case Target::SwappedBEven: {
        InstanceParams p = draw_uniform(rng, m);
        p.A |= 1;
        p.B &= ~u64{1};
        p.c2 = rng.odd_c(m);
        return p;
    }
    default: break;
    }

    // Small m may not reach the target for a random k; retry, then widen m.
    for (int attempt = 0; attempt < 16; ++attempt) {
        if (auto p = draw_main(rng, target, m)) {
            return *p;
        }
    }
    for (unsigned wide = m; wide <= m_max_; ++wide) {
        for (int attempt = 0; attempt < 16; ++attempt) {
            if (auto p = draw_main(rng, target, wide)) {
                return *p;
            }
        }
    }
    return draw_uniform(rng, m);
}

CheckResult check_instance(const InstanceParams& params)
{
    using clock = std::chrono::steady_clock;
    const auto inst = params.instance();
    const auto chi1 = params.chi1();
    const auto chi2 = params.chi2();

    CheckResult out;
    out.params = params;
    auto t0 = clock::now();
    out.closed = evaluator::evaluate(inst, chi1, chi2);
    auto t1 = clock::now();
    out.oracle = oracle::brute_force(inst, chi1, chi2);
    auto t2 = clock::now();
    out.match = out.closed.value == out.oracle;
    out.closed_seconds = std::chrono::duration<double>(t1 - t0).count();
    out.brute_seconds = std::chrono::duration<double>(t2 - t1).count();
    return out;
}

unsigned resolve_jobs(std::optional<unsigned> flag)
{
    if (flag && *flag > 0) {
        return *flag;
    }
    if (const char* env = std::getenv("CHARSUM_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t, unsigned)>& body)
{
    jobs = std::max(1u, jobs);
    if (jobs == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i, 0);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            constexpr std::size_t kBatch = 64;
            try {
                for (;;) {
                    const std::size_t first = next.fetch_add(kBatch);
                    if (first >= count) {
                        break;
                    }
                    const std::size_t last = std::min(count, first + kBatch);
                    for (std::size_t i = first; i < last; ++i) {
                        body(i, w);
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(count);
            }
        });
    }
    for (auto& t : workers) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

RunReport run_check(const InstanceSource& source, std::size_t count, unsigned jobs)
{
    jobs = std::max(1u, jobs);
    std::vector<RunReport> partial(jobs);
    const auto start = std::chrono::steady_clock::now();
    parallel_for(count, jobs, [&](std::size_t i, unsigned w) {
        const CheckResult res = check_instance(source(i));
        RunReport& rep = partial[w];
        ++rep.instances_checked;
        ++rep.case_counts[std::string(evaluator::case_name(res.closed.tag))];
        rep.closed_seconds += res.closed_seconds;
        rep.brute_seconds += res.brute_seconds;
        if (!res.match) {
            rep.mismatches.push_back(res.params);
        }
    });

    RunReport out;
    for (const RunReport& rep : partial) {
        out.instances_checked += rep.instances_checked;
        out.closed_seconds += rep.closed_seconds;
        out.brute_seconds += rep.brute_seconds;
        out.mismatches.insert(out.mismatches.end(), rep.mismatches.begin(), rep.mismatches.end());
        for (const auto& [tag, n] : rep.case_counts) {
            out.case_counts[tag] += n;
        }
    }
    std::sort(out.mismatches.begin(), out.mismatches.end());
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace charsum::sweep

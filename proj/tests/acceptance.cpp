// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. All equalities are exact ring equalities;
// the only tolerances are the timing bounds pinned below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "charsum/evaluator.hpp"
#include "charsum/oracle.hpp"
#include "charsum/ring2adic.hpp"
#include "charsum/sweep.hpp"

using namespace charsum;
using evaluator::CaseTag;
using evaluator::ClosedForm;
using evaluator::Regime;
using evaluator::SumInstance;
using characters::Character;
using cyclotomic::CycInt;
using sweep::InstanceParams;
using sweep::Target;
using u64 = std::uint64_t;

namespace {

constexpr double kClosedFormBudgetSeconds = 1e-3;
constexpr double kMinSpeedup = 1e3;
constexpr std::size_t kRandomSamples = 120000;
constexpr std::size_t kMinPerCase = 1000;
constexpr std::size_t kDecompositionSamples = 10000;
constexpr std::size_t kMultiRootInstances = 1000;
constexpr std::size_t kNormalizationSamples = 12000;

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail, double secs)
{
    std::printf("%s [%d] %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(), secs);
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

// Shared state for criteria 1-3: the magnitude law runs over the nonzero
// Large instances met by the two equivalence sweeps.
struct MagnitudeTally {
    std::size_t checked = 0;
    std::vector<InstanceParams> bad;
};

bool is_large(CaseTag tag) { return tag == CaseTag::LargeEven || tag == CaseTag::LargeOdd; }

// S conj(S) = 2^(m + n + 2t + 2 min(1,t)) with n, t read off the instance the
// main route actually sees (after a possible swap of A and B).
bool magnitude_law_holds(const InstanceParams& p, const ClosedForm& cf)
{
    const auto np = evaluator::normalize(p.instance(), p.chi1(), p.chi2());
    const auto& prepared = std::get<evaluator::PreparedProblem>(np);
    const unsigned n = ring2adic::v2(prepared.instance.A);
    const unsigned t = ring2adic::v2(p.k);
    const unsigned e = p.m + n + 2 * t + 2 * std::min(1u, t);
    const CycInt norm = cf.value * cyclotomic::conj(cf.value);
    return e < 63 && norm == CycInt::from_integer(norm.ring_exponent(), std::int64_t{1} << e);
}

struct SweepOutcome {
    std::size_t checked = 0;
    std::vector<InstanceParams> mismatches;
    std::map<std::string, std::size_t> counts;
};

SweepOutcome sweep_with_magnitude(const sweep::InstanceSource& source, std::size_t count, unsigned jobs,
                                  MagnitudeTally& tally)
{
    std::vector<SweepOutcome> shards(jobs);
    std::vector<std::size_t> mags(jobs, 0);
    std::vector<std::vector<InstanceParams>> bad(jobs);
    sweep::parallel_for(count, jobs, [&](std::size_t i, unsigned w) {
        const InstanceParams p = source(i);
        const ClosedForm cf = evaluator::evaluate(p.instance(), p.chi1(), p.chi2());
        const CycInt s = oracle::brute_force(p.instance(), p.chi1(), p.chi2());
        auto& sh = shards[w];
        ++sh.checked;
        ++sh.counts[std::string(evaluator::case_name(cf.tag))];
        if (cf.value != s) {
            sh.mismatches.push_back(p);
        }
        if (is_large(cf.tag) && !s.is_zero()) {
            ++mags[w];
            if (!magnitude_law_holds(p, cf)) {
                bad[w].push_back(p);
            }
        }
    });
    SweepOutcome out;
    for (unsigned w = 0; w < jobs; ++w) {
        out.checked += shards[w].checked;
        out.mismatches.insert(out.mismatches.end(), shards[w].mismatches.begin(), shards[w].mismatches.end());
        for (const auto& [k, v] : shards[w].counts) {
            out.counts[k] += v;
        }
        tally.checked += mags[w];
        tally.bad.insert(tally.bad.end(), bad[w].begin(), bad[w].end());
    }
    std::sort(out.mismatches.begin(), out.mismatches.end());
    return out;
}

std::string first_mismatch(const std::vector<InstanceParams>& v)
{
    return v.empty() ? std::string() : " first: " + sweep::to_string(v.front());
}

void criterion_exhaustive(unsigned jobs, MagnitudeTally& tally)
{
    const auto t0 = clock_type::now();
    const sweep::ExhaustiveGrid grid(3, 5, {1, 2, 3, 4, 6, 8, 12});
    const SweepOutcome r = sweep_with_magnitude([&grid](std::size_t i) { return grid.at(i); }, grid.size(), jobs, tally);
    const bool pass = r.checked == grid.size() && r.mismatches.empty();
    report(1, "exhaustive equivalence m=3..5", pass,
           std::to_string(r.checked) + " instances, " + std::to_string(r.mismatches.size()) + " mismatches" +
               first_mismatch(r.mismatches),
           seconds_since(t0));
}

void criterion_random(unsigned jobs, MagnitudeTally& tally)
{
    const auto t0 = clock_type::now();
    const sweep::BiasedSampler sampler(20240601, 6, 14);
    const SweepOutcome r =
        sweep_with_magnitude([&sampler](std::size_t i) { return sampler.at(i); }, kRandomSamples, jobs, tally);
    std::string detail = std::to_string(r.checked) + " instances, " + std::to_string(r.mismatches.size()) +
                         " mismatches; per case:";
    bool enough = true;
    for (const char* name : {"LargeEven", "LargeOdd", "MidRange", "EdgeT3", "EdgeT2", "Tiny", "ZeroParity",
                             "ZeroImprimitive", "ZeroCondition"}) {
        const auto it = r.counts.find(name);
        const std::size_t c = it == r.counts.end() ? 0 : it->second;
        enough = enough && c >= kMinPerCase;
        detail += " " + std::string(name) + "=" + std::to_string(c);
    }
    report(2, "randomized equivalence m=6..14", r.mismatches.empty() && enough && r.checked >= 100000,
           detail + first_mismatch(r.mismatches), seconds_since(t0));
}

void criterion_magnitude(const MagnitudeTally& tally)
{
    report(3, "magnitude law on nonzero Large instances", tally.checked > 0 && tally.bad.empty(),
           std::to_string(tally.checked) + " checked, " + std::to_string(tally.bad.size()) + " violations" +
               first_mismatch(tally.bad),
           0.0);
}

void criterion_decomposition()
{
    const auto t0 = clock_type::now();
    const sweep::BiasedSampler sampler(77, 3, 12);
    std::size_t checked = 0;
    std::vector<InstanceParams> bad;
    for (std::size_t i = 0; checked < kDecompositionSamples; ++i) {
        const InstanceParams p = sampler.at(i);
        const auto inst = p.instance();
        const auto chi1 = p.chi1();
        const auto chi2 = p.chi2();
        const CycInt s = oracle::brute_force(inst, chi1, chi2);
        const CycInt plus = oracle::half_sum(inst, chi1, chi2, 1);
        const CycInt expected =
            p.k % 2 == 0 ? (1 + p.s1) * plus : plus + p.s1 * oracle::half_sum(inst, chi1, chi2, -1);
        if (s != expected) {
            bad.push_back(p);
        }
        ++checked;
    }
    report(4, "decomposition identities", bad.empty(),
           std::to_string(checked) + " instances, " + std::to_string(bad.size()) + " violations" + first_mismatch(bad),
           seconds_since(t0));
}

void criterion_representatives()
{
    const auto t0 = clock_type::now();
    const sweep::BiasedSampler sampler(31337, 8, 20);
    std::size_t found = 0;
    std::size_t reps = 0;
    std::vector<InstanceParams> bad;
    for (std::size_t i = 0; found < kMultiRootInstances && i < 200 * kMultiRootInstances; ++i) {
        const InstanceParams p = sampler.draw(i, i % 2 ? Target::LargeOdd : Target::LargeEven);
        const auto inst = p.instance();
        if (inst.A % 2 != 0 || inst.B % 2 == 0 || !characters::is_primitive(p.chi2())) {
            continue;
        }
        if (evaluator::derive(inst).regime != Regime::Large) {
            continue;
        }
        const auto dp = evaluator::derive(inst);
        if (p.c1 % (u64{1} << (dp.n + dp.t)) != 0 || ((p.c1 >> (dp.n + dp.t)) & 1) == 0) {
            continue;
        }
        const auto sols = evaluator::solve_characteristic(inst, p.chi1(), p.chi2());
        if (sols.solutions.size() < 2) {
            continue;
        }
        ++found;
        const CycInt first = evaluator::evaluate_large_at(inst, p.chi1(), p.chi2(), sols.solutions.front()).value;
        for (u64 x0 : sols.solutions) {
            ++reps;
            if (evaluator::evaluate_large_at(inst, p.chi1(), p.chi2(), x0).value != first) {
                bad.push_back(p);
                break;
            }
        }
    }
    report(5, "representative independence", found >= kMultiRootInstances && bad.empty(),
           std::to_string(found) + " instances with >= 2 roots, " + std::to_string(reps) + " representatives, " +
               std::to_string(bad.size()) + " disagreements" + first_mismatch(bad),
           seconds_since(t0));
}

void criterion_eighth_root()
{
    bool pass = true;
    int checked = 0;
    for (unsigned r = 3; r <= 10; ++r) {
        const std::int64_t eighth = std::int64_t{1} << (r - 3);
        for (std::int64_t h = 1; h < 8; h += 2) {
            const CycInt lhs = CycInt::from_integer(r, 1) + cyclotomic::root_of_unity(r, 2 * h * eighth);
            const CycInt rhs =
                ring2adic::jacobi2(h) * (cyclotomic::sqrt2(r) * cyclotomic::root_of_unity(r, h * eighth));
            pass = pass && lhs == rhs;
            ++checked;
        }
    }
    report(6, "eighth-root identity", pass, std::to_string(checked) + " (h, ring) pairs", 0.0);
}

// Odd x < 2^w with C(x) = 0 mod 2^w, by testing every candidate.
std::vector<u64> brute_filter(const SumInstance& inst, const evaluator::DerivedParams& dp, u64 c1, u64 c2)
{
    std::vector<u64> out;
    const unsigned w = dp.char_exp;
    for (u64 x = 1; x < (u64{1} << w); x += 2) {
        if (evaluator::C_eval(x, inst, dp, c1, c2, w) == 0) {
            out.push_back(x);
        }
    }
    return out;
}

void criterion_solver()
{
    const auto t0 = clock_type::now();
    std::size_t checked = 0;
    std::size_t nonempty = 0;
    std::vector<InstanceParams> bad;
    const auto check = [&](const InstanceParams& p) {
        const auto inst = p.instance();
        const auto dp = evaluator::derive(inst);
        const auto sols = evaluator::solve_characteristic(inst, p.chi1(), p.chi2());
        const auto expected = brute_filter(inst, dp, p.c1, p.c2);
        ++checked;
        nonempty += expected.empty() ? 0 : 1;
        if (sols.w != dp.char_exp || sols.solutions != expected) {
            bad.push_back(p);
        }
    };

    // Every Large instance up to m = 8 with B in a fixed set and c2 over all
    // primitive values.
    for (unsigned m = 7; m <= 8; ++m) {
        for (u64 A = 2; A < (u64{1} << m); A += 2) {
            for (u64 k : {1, 2, 3, 4, 6}) {
                const auto dp = evaluator::derive({m, A, 1, k});
                if (dp.regime != Regime::Large) {
                    continue;
                }
                const u64 unit = u64{1} << (dp.n + dp.t);
                for (u64 B : {1, 3, 7, 13}) {
                    for (u64 c1 = unit; c1 <= (u64{1} << (m - 2)); c1 += 2 * unit) {
                        for (u64 c2 = 1; c2 < (u64{1} << (m - 2)); c2 += 2) {
                            check({m, A, B, k, c1, 1, c2, 1});
                        }
                    }
                }
            }
        }
    }

    // Random Large instances up to M_exp = 20.
    std::mt19937_64 rng(4242);
    std::size_t random_checked = 0;
    while (random_checked < 400) {
        const unsigned m = 9 + static_cast<unsigned>(rng() % 22);
        const unsigned n = 1 + static_cast<unsigned>(rng() % 6);
        const u64 k = 1 + rng() % 24;
        if (n >= m) {
            continue;
        }
        const u64 A = ((rng() | 1) << n) & ring2adic::mask(m);
        const u64 B = (rng() | 1) & ring2adic::mask(m);
        const SumInstance inst{m, A, B, k};
        const auto dp = evaluator::derive(inst);
        if (dp.regime != Regime::Large || dp.char_exp > 20 || dp.n + dp.t >= m - 2) {
            continue;
        }
        const u64 c1 = ((rng() % (u64{1} << (m - 2 - dp.n - dp.t))) | 1) << (dp.n + dp.t);
        const u64 c2 = (rng() % (u64{1} << (m - 2))) | 1;
        check({m, A, B, k, c1, rng() % 2 ? 1 : -1, c2, rng() % 2 ? 1 : -1});
        ++random_checked;
    }
    report(7, "characteristic solver completeness", bad.empty() && nonempty > 0,
           std::to_string(checked) + " instances (" + std::to_string(nonempty) + " solvable), " +
               std::to_string(bad.size()) + " set mismatches" + first_mismatch(bad),
           seconds_since(t0));
}

double closed_form_seconds(const InstanceParams& p)
{
    // Best of several batches; each batch is long enough for the clock.
    double best = 1e9;
    for (int batch = 0; batch < 7; ++batch) {
        std::size_t reps = 0;
        const auto t0 = clock_type::now();
        double elapsed = 0;
        while (reps < 50 || elapsed < 0.02) {
            const ClosedForm cf = evaluator::evaluate(p.instance(), p.chi1(), p.chi2());
            if (cf.value.is_zero()) {
                return -1;
            }
            ++reps;
            elapsed = seconds_since(t0);
        }
        best = std::min(best, elapsed / static_cast<double>(reps));
    }
    return best;
}

void criterion_performance()
{
    const auto t0 = clock_type::now();
    const auto at = [](unsigned m) { return InstanceParams{m, 2, 1, 1, 2, 1, 1, 1}; };
    const double c16 = closed_form_seconds(at(16));
    const double c20 = closed_form_seconds(at(20));
    const double c24 = closed_form_seconds(at(24));

    const InstanceParams p = at(24);
    const auto tb = clock_type::now();
    const CycInt brute = oracle::brute_force(p.instance(), p.chi1(), p.chi2());
    const double b24 = seconds_since(tb);
    const bool match = brute == evaluator::evaluate(p.instance(), p.chi1(), p.chi2()).value;

    const double ratio = b24 / c24;
    // Linear growth in 2^m would multiply the cost by 16 per step of 4 in m.
    const bool sublinear = c16 > 0 && c20 > 0 && c20 / c16 < 16.0 && c24 / c20 < 16.0 && c24 / c16 < 256.0;
    const bool pass = match && c24 > 0 && c24 < kClosedFormBudgetSeconds && ratio >= kMinSpeedup && sublinear;
    char buf[256];
    std::snprintf(buf, sizeof buf, "closed m=16/20/24 = %.2f/%.2f/%.2f us, brute m=24 = %.3f s, ratio %.3g, match %s",
                  c16 * 1e6, c20 * 1e6, c24 * 1e6, b24, ratio, match ? "yes" : "no");
    report(8, "performance at m=24", pass, buf, seconds_since(t0));
}

bool violates_hypotheses(const InstanceParams& p)
{
    const bool main_shape = p.A % 2 == 0 && p.B % 2 == 1 && characters::is_primitive(p.chi2());
    return !main_shape;
}

void criterion_normalization()
{
    const auto t0 = clock_type::now();
    const sweep::BiasedSampler sampler(9001, 3, 12);
    const Target targets[] = {Target::ZeroParity, Target::ZeroImprimitive, Target::SwappedBEven, Target::Reduced,
                              Target::Uniform};
    std::size_t checked = 0;
    std::map<std::string, std::size_t> counts;
    std::vector<InstanceParams> bad;
    for (std::size_t i = 0; checked < kNormalizationSamples; ++i) {
        const InstanceParams p = sampler.draw(i, targets[i % std::size(targets)]);
        if (!violates_hypotheses(p)) {
            continue;
        }
        const ClosedForm cf = evaluator::evaluate(p.instance(), p.chi1(), p.chi2());
        ++counts[std::string(evaluator::case_name(cf.tag))];
        if (cf.value != oracle::brute_force(p.instance(), p.chi1(), p.chi2())) {
            bad.push_back(p);
        }
        ++checked;
    }
    std::string detail = std::to_string(checked) + " instances, " + std::to_string(bad.size()) + " mismatches;";
    for (const auto& [name, c] : counts) {
        detail += " " + name + "=" + std::to_string(c);
    }
    report(9, "normalization soundness", bad.empty(), detail + first_mismatch(bad), seconds_since(t0));
}

}  // namespace

int main()
{
    const unsigned jobs = sweep::resolve_jobs(std::nullopt);
    std::printf("acceptance suite, %u worker(s)\n", jobs);
    MagnitudeTally tally;
    criterion_exhaustive(jobs, tally);
    criterion_random(jobs, tally);
    criterion_magnitude(tally);
    criterion_decomposition();
    criterion_representatives();
    criterion_eighth_root();
    criterion_solver();
    criterion_performance();
    criterion_normalization();
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

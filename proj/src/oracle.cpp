#include "charsum/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>
#include <vector>

#include "charsum/ring2adic.hpp"

namespace charsum::oracle {

using ring2adic::mask;
using ring2adic::u64;

namespace {

void check(const evaluator::SumInstance& inst, const characters::Character& chi1, const characters::Character& chi2)
{
    inst.validate();
    if (chi1.m() != inst.m || chi2.m() != inst.m) {
        throw std::invalid_argument("characters must share the instance modulus");
    }
}

// Odd x in [first, last) only; even x contribute nothing.
void accumulate_range(const evaluator::SumInstance& inst, const characters::Character& chi1,
                      const characters::Character& chi2, u64 first, u64 last, cyclotomic::CycAccumulator& acc)
{
    const unsigned m = inst.m;
    const unsigned r = acc.ring_exponent();
    for (u64 x = first | 1; x < last; x += 2) {
        const u64 y = (ring2adic::mul_mod2w(inst.A, ring2adic::pow_mod2w(x, inst.k, m), m) + inst.B) & mask(m);
        if ((y & 1) == 0) {
            continue;
        }
        acc.add_root(*characters::char_exponent(chi1, x, r) + *characters::char_exponent(chi2, y, r));
    }
}

}  // namespace

cyclotomic::CycInt brute_force(const evaluator::SumInstance& inst, const characters::Character& chi1,
                               const characters::Character& chi2, unsigned jobs)
{
    check(inst, chi1, chi2);
    const unsigned r = characters::ring_for_modulus(inst.m);
    const u64 total = ring2adic::pow2(inst.m);
    // x = 2^m is even, so summing x over [1, 2^m) is the full sum.
    jobs = std::clamp<unsigned>(jobs, 1, 64);
    if (jobs == 1 || total < 4096) {
        cyclotomic::CycAccumulator acc(r);
        accumulate_range(inst, chi1, chi2, 1, total, acc);
        return acc.value();
    }

    std::vector<cyclotomic::CycAccumulator> shards(jobs, cyclotomic::CycAccumulator(r));
    std::vector<std::thread> workers;
    const u64 chunk = total / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
        const u64 first = j * chunk;
        const u64 last = j + 1 == jobs ? total : first + chunk;
        workers.emplace_back([&, j, first, last] { accumulate_range(inst, chi1, chi2, first, last, shards[j]); });
    }
    for (auto& w : workers) {
        w.join();
    }
    for (unsigned j = 1; j < jobs; ++j) {
        shards[0].merge(shards[j]);
    }
    return shards[0].value();
}

cyclotomic::CycInt half_sum(const evaluator::SumInstance& inst, const characters::Character& chi1,
                            const characters::Character& chi2, int sign)
{
    check(inst, chi1, chi2);
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("half_sum sign must be +1 or -1");
    }
    const unsigned m = inst.m;
    const unsigned r = characters::ring_for_modulus(m);
    const u64 a = sign > 0 ? inst.A : (0 - inst.A) & mask(m);
    const u64 step = ring2adic::pow_mod2w(5, inst.k, m);
    const u64 order = ring2adic::pow2(m - 2);

    cyclotomic::CycAccumulator acc(r);
    u64 five_gamma = 1;
    u64 five_gamma_k = 1;
    for (u64 gamma = 1; gamma <= order; ++gamma) {
        five_gamma = ring2adic::mul_mod2w(five_gamma, 5, m);
        five_gamma_k = ring2adic::mul_mod2w(five_gamma_k, step, m);
        const u64 y = (ring2adic::mul_mod2w(a, five_gamma_k, m) + inst.B) & mask(m);
        if ((y & 1) == 0) {
            continue;
        }
        acc.add_root(*characters::char_exponent(chi1, five_gamma, r) + *characters::char_exponent(chi2, y, r));
    }
    return acc.value();
}

}  // namespace charsum::oracle

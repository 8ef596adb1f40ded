#pragma once

#include "charsum/characters.hpp"
#include "charsum/cyclotomic.hpp"
#include "charsum/evaluator.hpp"

// Ground truth by direct summation, exact in Z[zeta_{2^r}],
// r = ring_for_modulus(m). Cost is O(2^m) dlogs.

namespace charsum::oracle {

/// sum_{x=1}^{2^m} chi1(x) chi2(A x^k + B). jobs > 1 shards x across
/// threads; the result does not depend on jobs.
cyclotomic::CycInt brute_force(const evaluator::SumInstance& inst, const characters::Character& chi1,
                               const characters::Character& chi2, unsigned jobs = 1);

/// S(sign * A) = sum_{gamma=1}^{2^(m-2)} chi1(5^gamma) chi2(sign * A * 5^(gamma k) + B).
cyclotomic::CycInt half_sum(const evaluator::SumInstance& inst, const characters::Character& chi1,
                            const characters::Character& chi2, int sign);

}  // namespace charsum::oracle

#include "charsum/evaluator.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <utility>

#include "charsum/ring2adic.hpp"

namespace charsum::evaluator {

using ring2adic::mask;
using ring2adic::u64;

namespace {

constexpr std::array<std::string_view, 10> kCaseNames = {
    "ZeroParity", "ZeroImprimitive", "ZeroCondition", "LargeEven", "LargeOdd",
    "MidRange",   "EdgeT3",          "EdgeT2",        "Tiny",      "Reduced",
};

void check_characters(const SumInstance& inst, const Character& chi1, const Character& chi2)
{
    inst.validate();
    if (chi1.m() != inst.m || chi2.m() != inst.m) {
        throw std::invalid_argument("characters must share the instance modulus");
    }
}

void require_main_route(const SumInstance& inst, const Character& chi1, const Character& chi2)
{
    check_characters(inst, chi1, chi2);
    if ((inst.A & 1) != 0 || (inst.B & 1) == 0) {
        throw std::invalid_argument("closed-form regimes need A even and B odd");
    }
    if (!characters::is_primitive(chi2)) {
        throw std::invalid_argument("closed-form regimes need chi2 primitive");
    }
}

// chi(x) as a zeta_{2^r} exponent; x must be odd.
u64 unit_exponent(const Character& chi, u64 x, unsigned r)
{
    return *characters::char_exponent(chi, x & mask(chi.m()), r);
}

CycInt zero_of(unsigned m) { return CycInt(characters::ring_for_modulus(m)); }

ClosedForm zero_form(CaseTag tag, unsigned m)
{
    ClosedForm out;
    out.tag = tag;
    out.value = zero_of(m);
    return out;
}

// 2^p * chi(y) for odd y.
CycInt scaled_chi(const Character& chi, u64 y, unsigned p)
{
    const unsigned r = characters::ring_for_modulus(chi.m());
    return (std::int64_t{1} << p) * cyclotomic::root_of_unity(r, static_cast<std::int64_t>(unit_exponent(chi, y, r)));
}

u64 odd_part(u64 x, unsigned e) { return x >> e; }

// Breadth-first 2-adic lifting. accept(x, j) decides whether an odd x < 2^j
// survives at level j; it must only depend on x mod 2^j and survivors at
// level j+1 must reduce to survivors at level j.
template <class Accept>
std::vector<u64> lift_odd_roots(unsigned levels, std::size_t cap, Accept accept)
{
    std::vector<u64> frontier;
    if (levels == 0) {
        return frontier;
    }
    if (accept(u64{1}, 1u)) {
        frontier.push_back(1);
    }
    for (unsigned j = 2; j <= levels && !frontier.empty(); ++j) {
        std::vector<u64> next;
        next.reserve(frontier.size() * 2);
        const u64 bit = u64{1} << (j - 1);
        for (u64 x : frontier) {
            for (u64 y : {x, x | bit}) {
                if (accept(y, j)) {
                    next.push_back(y);
                }
            }
        }
        if (next.size() > cap) {
            throw std::logic_error("characteristic solver frontier exceeded its bound");
        }
        frontier = std::move(next);
    }
    std::sort(frontier.begin(), frontier.end());
    return frontier;
}

std::size_t frontier_cap(const DerivedParams& p)
{
    const unsigned e = p.n + 2 * p.t + 6;
    return e >= 63 ? SIZE_MAX : (std::size_t{1} << e);
}

// c1 = 2^(n+t) * c3 with c3 odd, or nullopt.
std::optional<u64> split_c1(const Character& chi1, const DerivedParams& p)
{
    const unsigned shift = p.n + p.t;
    const u64 c1 = chi1.c();
    if (shift >= 64 || (c1 & mask(shift)) != 0) {
        return std::nullopt;
    }
    const u64 c3 = c1 >> shift;
    if ((c3 & 1) == 0) {
        return std::nullopt;
    }
    return c3;
}

void check_large_preconditions(const SumInstance& inst, const Character& chi1, const Character& chi2,
                               const DerivedParams& p)
{
    require_main_route(inst, chi1, chi2);
    if (p.regime != Regime::Large) {
        throw std::invalid_argument("instance is not in the Large regime");
    }
}

}  // namespace

void SumInstance::validate() const
{
    if (m < 3 || m > ring2adic::kMaxModulusExponent) {
        throw ring2adic::WidthCapExceeded("modulus exponent m=" + std::to_string(m) + " outside [3, " +
                                          std::to_string(ring2adic::kMaxModulusExponent) + "]");
    }
    if (A >= ring2adic::pow2(m) || B >= ring2adic::pow2(m)) {
        throw std::invalid_argument("A and B must be residues in [0, 2^m)");
    }
    if (k == 0) {
        throw std::invalid_argument("exponent k must be positive");
    }
}

std::string_view case_name(CaseTag tag) { return kCaseNames.at(static_cast<std::size_t>(tag)); }

std::optional<CaseTag> parse_case(std::string_view name)
{
    for (CaseTag tag : kAllCaseTags) {
        if (case_name(tag) == name) {
            return tag;
        }
    }
    return std::nullopt;
}

std::string_view regime_name(Regime regime)
{
    switch (regime) {
    case Regime::Tiny: return "Tiny";
    case Regime::EdgeT2: return "EdgeT2";
    case Regime::EdgeT3: return "EdgeT3";
    case Regime::MidRange: return "MidRange";
    case Regime::Large: return "Large";
    }
    return "?";
}

DerivedParams derive(const SumInstance& inst)
{
    inst.validate();
    if ((inst.A & 1) != 0 || (inst.B & 1) == 0) {
        throw std::invalid_argument("derive needs A even and B odd");
    }
    DerivedParams p;
    p.t = ring2adic::v2(inst.k);
    p.k1 = odd_part(inst.k, p.t);
    if (inst.A == 0) {
        // A x^k + B = B for every x.
        p.a_is_zero = true;
        p.n = inst.m;
        p.regime = Regime::Tiny;
        return p;
    }
    p.n = ring2adic::v2(inst.A);
    p.A1 = odd_part(inst.A, p.n);
    p.char_exp = (inst.m + p.n) / 2 + p.t;

    const unsigned d = inst.m - p.n;
    const unsigned t = p.t;
    if (d < t + 2) {
        p.regime = Regime::Tiny;
    } else if (d > 2 * t + 4) {
        p.regime = Regime::Large;
        p.N = (d + 1) / 2;
    } else {
        p.N = t + 2;
        if (d == t + 2) {
            p.regime = Regime::EdgeT2;
        } else if (d == t + 3) {
            p.regime = Regime::EdgeT3;
        } else {
            p.regime = Regime::MidRange;
        }
    }
    return p;
}

u64 C_eval(u64 x, const SumInstance& inst, const DerivedParams& params, u64 c1, u64 c2, unsigned w)
{
    if (params.N < 2) {
        throw std::invalid_argument("C(x) is undefined in the Tiny regime");
    }
    if ((x & 1) == 0) {
        throw std::invalid_argument("C(x) is evaluated at odd x only");
    }
    const u64 rn = ring2adic::compute_R(params.N, w);
    const u64 rnn_inv = ring2adic::inv_mod2w(ring2adic::compute_R(params.N + params.n, w), w);
    const u64 xk = ring2adic::pow_mod2w(x, inst.k, w);
    const auto mul = [w](u64 a, u64 b) { return ring2adic::mul_mod2w(a, b, w); };

    const u64 h = mul(inst.A, xk) + inst.B;
    const u64 first = mul(c1, h);
    const u64 second = mul(mul(mul(c2, inst.A), mul(inst.k & mask(w), xk)), mul(rn, rnn_inv));
    return (first + second) & mask(w);
}

CharSolutionSet solve_characteristic(const SumInstance& inst, const Character& chi1, const Character& chi2)
{
    const DerivedParams p = derive(inst);
    check_large_preconditions(inst, chi1, chi2, p);
    if (!split_c1(chi1, p)) {
        throw std::invalid_argument("characteristic equation needs c1 = 2^(n+t) * odd");
    }
    const unsigned w = p.char_exp;
    CharSolutionSet out;
    out.w = w;
    out.solutions = lift_odd_roots(w, frontier_cap(p), [&](u64 x, unsigned j) {
        return (C_eval(x, inst, p, chi1.c(), chi2.c(), w) & mask(j)) == 0;
    });
    return out;
}

ClosedForm evaluate_large_at(const SumInstance& inst, const Character& chi1, const Character& chi2, u64 x0)
{
    const DerivedParams p = derive(inst);
    check_large_preconditions(inst, chi1, chi2, p);
    const auto c3 = split_c1(chi1, p);
    if (!c3 || (p.t > 0 && chi1.sign() < 0)) {
        throw std::invalid_argument("instance has S = 0; no representative exists");
    }
    const unsigned M = p.char_exp;
    const u64 c_wide = C_eval(x0, inst, p, chi1.c(), chi2.c(), M + 1);
    if ((c_wide & mask(M)) != 0) {
        throw std::invalid_argument("x0 does not solve the characteristic equation");
    }

    const unsigned m = inst.m;
    const unsigned r = characters::ring_for_modulus(m);
    const unsigned d = m - p.n;
    const int lambda = static_cast<int>((c_wide >> M) & 1);
    const u64 h = (2 * static_cast<u64>(lambda) + (p.k1 - 1) + (ring2adic::pow2(p.n) - 1) * *c3) & 7;

    const u64 x0m = x0 & mask(m);
    const u64 y0 = (ring2adic::mul_mod2w(inst.A, ring2adic::pow_mod2w(x0m, inst.k, m), m) + inst.B) & mask(m);
    const u64 unit = unit_exponent(chi1, x0m, r) + unit_exponent(chi2, y0, r);
    const unsigned power = (m + p.n) / 2 + p.t + std::min(1u, p.t);

    ClosedForm out;
    out.witness.x0 = x0;
    out.witness.lambda_parity = lambda;
    out.magnitude_halves = static_cast<int>(m + p.n + 2 * p.t + 2 * std::min(1u, p.t));
    CycInt value = (std::int64_t{1} << power) * cyclotomic::root_of_unity(r, static_cast<std::int64_t>(unit));
    if (d % 2 == 0) {
        out.tag = CaseTag::LargeEven;
    } else {
        out.tag = CaseTag::LargeOdd;
        out.witness.h = static_cast<int>(h);
        // (1 + i^h) = sqrt2 * omega^h * (2/h)
        const std::int64_t omega_h = static_cast<std::int64_t>(h) << (r - 3);
        value = ring2adic::jacobi2(static_cast<std::int64_t>(h)) *
                (value * cyclotomic::root_of_unity(r, omega_h) * cyclotomic::sqrt2(r));
    }
    out.value = std::move(value);
    return out;
}

ClosedForm evaluate_large(const SumInstance& inst, const Character& chi1, const Character& chi2)
{
    const DerivedParams p = derive(inst);
    check_large_preconditions(inst, chi1, chi2, p);
    const auto c3 = split_c1(chi1, p);
    const bool k_even = p.t > 0;
    if (!c3 || (k_even && chi1.sign() < 0)) {
        return zero_form(CaseTag::ZeroCondition, inst.m);
    }
    // C = 2^(n+t) D with D(x) mod 2^j depending on x mod 2^j only, so the
    // roots mod 2^char_exp are all lifts of the roots of D mod 2^L.
    const unsigned shift = p.n + p.t;
    const unsigned levels = p.char_exp - shift;
    const unsigned w = p.char_exp;
    const std::vector<u64> roots = lift_odd_roots(levels, frontier_cap(p), [&](u64 x, unsigned j) {
        return (C_eval(x, inst, p, chi1.c(), chi2.c(), w) & mask(j + shift)) == 0;
    });
    if (roots.empty()) {
        return zero_form(CaseTag::ZeroCondition, inst.m);
    }
    return evaluate_large_at(inst, chi1, chi2, roots.front());
}

ClosedForm evaluate_small(const SumInstance& inst, const Character& chi1, const Character& chi2)
{
    require_main_route(inst, chi1, chi2);
    const DerivedParams p = derive(inst);
    const unsigned m = inst.m;
    const u64 plus = (inst.A + inst.B) & mask(m);
    const u64 minus = (inst.B - inst.A) & mask(m);
    const bool k_even = p.t > 0;

    ClosedForm out;
    out.value = zero_of(m);
    const auto set_value = [&](CycInt v, int halves) {
        out.value = std::move(v);
        out.magnitude_halves = halves;
    };

    switch (p.regime) {
    case Regime::EdgeT2:
        out.tag = CaseTag::EdgeT2;
        if ((k_even && chi1.is_principal()) || (!k_even && chi1.is_chi4())) {
            set_value(scaled_chi(chi2, plus, m - 1), 2 * static_cast<int>(m - 1));
        }
        break;
    case Regime::EdgeT3: {
        out.tag = CaseTag::EdgeT3;
        // chi1(5) = -1. (chi1(5) = +1 gives a vanishing geometric sum.)
        const bool minus_one_at_five = chi1.c() == (chi1.order_of_five() >> 1);
        if (!minus_one_at_five) {
            break;
        }
        if (k_even && chi1.sign() > 0) {
            set_value(scaled_chi(chi2, plus, m - 1), 2 * static_cast<int>(m - 1));
        } else if (!k_even) {
            // chi2(B-A)/chi2(A+B) = +-i, so |S|^2 = 2 * 4^(m-2).
            set_value(scaled_chi(chi2, plus, m - 2) + chi1.sign() * scaled_chi(chi2, minus, m - 2),
                      2 * static_cast<int>(m - 2) + 1);
        }
        break;
    }
    case Regime::MidRange: {
        out.tag = CaseTag::MidRange;
        const unsigned w = m - 2;
        const bool at_plus = C_eval(1, inst, p, chi1.c(), chi2.c(), w) == 0;
        const bool at_minus = !k_even && C_eval(mask(w), inst, p, chi1.c(), chi2.c(), w) == 0;
        if (k_even) {
            if (at_plus && chi1.sign() > 0) {
                set_value(scaled_chi(chi2, plus, m - 1), 2 * static_cast<int>(m - 1));
            }
        } else if (at_plus) {
            set_value(scaled_chi(chi2, plus, m - 2), 2 * static_cast<int>(m - 2));
        } else if (at_minus) {
            set_value(chi1.sign() * scaled_chi(chi2, minus, m - 2), 2 * static_cast<int>(m - 2));
        }
        break;
    }
    default:
        throw std::invalid_argument("evaluate_small handles t+2 <= m-n <= 2t+4 only");
    }
    return out;
}

ClosedForm evaluate_tiny(const SumInstance& inst, const Character& chi1, const Character& chi2)
{
    require_main_route(inst, chi1, chi2);
    const DerivedParams p = derive(inst);
    if (p.regime != Regime::Tiny) {
        throw std::invalid_argument("evaluate_tiny handles m-n < t+2 only");
    }
    // Every odd x has A x^k + B = A + B mod 2^m.
    ClosedForm out;
    out.tag = CaseTag::Tiny;
    out.value = zero_of(inst.m);
    if (chi1.is_principal()) {
        out.value = scaled_chi(chi2, (inst.A + inst.B) & mask(inst.m), inst.m - 1);
        out.magnitude_halves = 2 * static_cast<int>(inst.m - 1);
    }
    return out;
}

NormalizedProblem normalize(const SumInstance& inst, const Character& chi1, const Character& chi2)
{
    check_characters(inst, chi1, chi2);
    if (((inst.A ^ inst.B) & 1) == 0) {
        return ZeroByNormalization{CaseTag::ZeroParity};
    }
    PreparedProblem prob{inst, chi1, chi2};
    if ((inst.A & 1) != 0) {
        // x -> x^-1 turns chi1(x) chi2(A x^k + B) into
        // conj(chi1 chi2^k)(x) chi2(B x^k + A).
        std::swap(prob.instance.A, prob.instance.B);
        prob.chi1 = characters::char_conj(characters::char_mul(chi1, characters::char_pow(chi2, inst.k)));
        prob.swapped = true;
    }
    const bool prim1 = characters::is_primitive(prob.chi1);
    const bool prim2 = characters::is_primitive(prob.chi2);
    if (prim2) {
        return prob;
    }
    if (prim1) {
        // x -> x (1 + 2^(m-1)) fixes every chi2 value and flips chi1.
        return ZeroByNormalization{CaseTag::ZeroImprimitive};
    }
    const unsigned f =
        std::max(characters::conductor(prob.chi1).exponent, characters::conductor(prob.chi2).exponent);
    const unsigned target = std::max(f, 3u);
    prob.route = f >= 3 ? PreparedProblem::Route::ReducedModulus : PreparedProblem::Route::DirectSmall;
    prob.scale_log2 = inst.m - target;
    prob.instance.m = target;
    prob.instance.A &= mask(target);
    prob.instance.B &= mask(target);
    prob.chi1 = characters::induce(prob.chi1, target);
    prob.chi2 = characters::induce(prob.chi2, target);
    return prob;
}

namespace {

ClosedForm evaluate_main(const SumInstance& inst, const Character& chi1, const Character& chi2)
{
    const DerivedParams p = derive(inst);
    switch (p.regime) {
    case Regime::Tiny: return evaluate_tiny(inst, chi1, chi2);
    case Regime::Large: return evaluate_large(inst, chi1, chi2);
    default: return evaluate_small(inst, chi1, chi2);
    }
}

// Both characters factor through mod 4; sum the four odd classes mod 8.
ClosedForm evaluate_direct_small(const SumInstance& inst, const Character& chi1, const Character& chi2)
{
    const unsigned r = characters::ring_for_modulus(inst.m);
    std::int64_t total = 0;
    for (u64 x = 1; x < 8; x += 2) {
        const u64 y = (inst.A * ring2adic::pow_mod2w(x, inst.k, 3) + inst.B) & 7;
        const auto e1 = characters::char_exponent(chi1, x, r);
        const auto e2 = characters::char_exponent(chi2, y, r);
        if (!e1 || !e2) {
            continue;
        }
        // Values are +-1, i.e. exponents 0 or 2^(r-1).
        total += ((*e1 + *e2) & mask(r)) == 0 ? 1 : -1;
    }
    ClosedForm out;
    out.tag = CaseTag::Reduced;
    out.value = CycInt::from_integer(r, total);
    if (total != 0) {
        out.magnitude_halves = 2 * static_cast<int>(ring2adic::v2(static_cast<u64>(total < 0 ? -total : total)));
    }
    return out;
}

}  // namespace

ClosedForm evaluate(const SumInstance& inst, const Character& chi1, const Character& chi2)
{
    const NormalizedProblem norm = normalize(inst, chi1, chi2);
    if (const auto* zero = std::get_if<ZeroByNormalization>(&norm)) {
        return zero_form(zero->tag, inst.m);
    }
    const auto& prob = std::get<PreparedProblem>(norm);
    if (prob.route == PreparedProblem::Route::Main) {
        return evaluate_main(prob.instance, prob.chi1, prob.chi2);
    }

    ClosedForm inner = prob.route == PreparedProblem::Route::ReducedModulus
                           ? evaluate(prob.instance, prob.chi1, prob.chi2)
                           : evaluate_direct_small(prob.instance, prob.chi1, prob.chi2);
    ClosedForm out;
    out.tag = CaseTag::Reduced;
    out.witness = inner.witness;
    out.witness.inner_case = inner.tag;
    out.witness.scale_log2 = prob.scale_log2;
    out.value = (std::int64_t{1} << prob.scale_log2) *
                cyclotomic::lift(inner.value, characters::ring_for_modulus(inst.m));
    if (inner.magnitude_halves) {
        out.magnitude_halves = *inner.magnitude_halves + 2 * static_cast<int>(prob.scale_log2);
    }
    return out;
}

}  // namespace charsum::evaluator

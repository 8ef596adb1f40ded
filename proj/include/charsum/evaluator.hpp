#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "charsum/characters.hpp"
#include "charsum/cyclotomic.hpp"

// Closed-form evaluation of the complete character sum
//
//   S = sum_{x=1}^{2^m} chi1(x) chi2(A x^k + B)    over Z/2^m.
//
// The main route assumes A = 2^n A1 even, B odd and chi2 primitive, and
// splits on d = m - n against t = v2(k):
//
//   d < t+2          Tiny      only chi1 = chi0 survives
//   d = t+2          EdgeT2
//   d = t+3          EdgeT3
//   t+3 < d <= 2t+4  MidRange  decided by C(1), C(-1) mod 2^(m-2)
//   d > 2t+4         Large     decided by the characteristic equation
//
// normalize() maps every other input onto that route (or onto zero).

namespace charsum::evaluator {

using characters::Character;
using cyclotomic::CycInt;

struct SumInstance {
    unsigned m = 3;
    std::uint64_t A = 0;
    std::uint64_t B = 0;
    std::uint64_t k = 1;

    /// Throws ring2adic::WidthCapExceeded for m out of range and
    /// std::invalid_argument for other malformed fields.
    void validate() const;

    friend bool operator==(const SumInstance&, const SumInstance&) = default;
};

enum class CaseTag {
    ZeroParity,
    ZeroImprimitive,
    ZeroCondition,
    LargeEven,
    LargeOdd,
    MidRange,
    EdgeT3,
    EdgeT2,
    Tiny,
    Reduced,
};

inline constexpr CaseTag kAllCaseTags[] = {
    CaseTag::ZeroParity, CaseTag::ZeroImprimitive, CaseTag::ZeroCondition, CaseTag::LargeEven, CaseTag::LargeOdd,
    CaseTag::MidRange,   CaseTag::EdgeT3,          CaseTag::EdgeT2,        CaseTag::Tiny,      CaseTag::Reduced,
};

std::string_view case_name(CaseTag tag);
std::optional<CaseTag> parse_case(std::string_view name);

enum class Regime { Tiny, EdgeT2, EdgeT3, MidRange, Large };

std::string_view regime_name(Regime regime);

struct DerivedParams {
    bool a_is_zero = false;  // A = 0 mod 2^m; folded into Tiny
    unsigned n = 0;          // v2(A)
    std::uint64_t A1 = 0;    // odd part of A
    unsigned t = 0;          // v2(k)
    std::uint64_t k1 = 0;    // odd part of k
    unsigned N = 0;          // 0 in the Tiny regime, where it is undefined
    unsigned char_exp = 0;   // floor((m+n)/2) + t
    Regime regime = Regime::Tiny;
};

/// Requires A even and B odd.
DerivedParams derive(const SumInstance& inst);

struct Witness {
    std::optional<std::uint64_t> x0;
    std::optional<int> lambda_parity;
    std::optional<int> h;  // mod 8
    unsigned scale_log2 = 0;
    std::optional<CaseTag> inner_case;  // set for Reduced
};

struct ClosedForm {
    CaseTag tag = CaseTag::ZeroParity;
    CycInt value{3};
    /// |S| = 2^(magnitude_halves / 2) when S != 0.
    std::optional<int> magnitude_halves;
    Witness witness;
};

struct ZeroByNormalization {
    CaseTag tag;
};

struct PreparedProblem {
    enum class Route {
        Main,            // A even, B odd, chi2 primitive
        ReducedModulus,  // both characters imprimitive; recurse mod 2^m'
        DirectSmall,     // both characters factor through mod 4
    };

    SumInstance instance;
    Character chi1;
    Character chi2;
    Route route = Route::Main;
    unsigned scale_log2 = 0;
    bool swapped = false;
};

using NormalizedProblem = std::variant<ZeroByNormalization, PreparedProblem>;

NormalizedProblem normalize(const SumInstance& inst, const Character& chi1, const Character& chi2);

/// C(x) = c1 (A x^k + B) + c2 A k x^k R_N R_{N+n}^{-1} mod 2^w. Needs N defined.
std::uint64_t C_eval(std::uint64_t x, const SumInstance& inst, const DerivedParams& params, std::uint64_t c1,
                     std::uint64_t c2, unsigned w);

struct CharSolutionSet {
    unsigned w = 0;
    std::vector<std::uint64_t> solutions;  // sorted ascending
};

/// Every odd x < 2^char_exp with C(x) = 0 mod 2^char_exp. Large regime only,
/// and c1 must be 2^(n+t) times an odd number.
CharSolutionSet solve_characteristic(const SumInstance& inst, const Character& chi1, const Character& chi2);

ClosedForm evaluate_large(const SumInstance& inst, const Character& chi1, const Character& chi2);

/// evaluate_large with a caller-chosen representative x0 of the
/// characteristic equation's solution set.
ClosedForm evaluate_large_at(const SumInstance& inst, const Character& chi1, const Character& chi2, std::uint64_t x0);

ClosedForm evaluate_small(const SumInstance& inst, const Character& chi1, const Character& chi2);
ClosedForm evaluate_tiny(const SumInstance& inst, const Character& chi1, const Character& chi2);

/// Full pipeline: normalize, derive, dispatch on regime, rescale.
ClosedForm evaluate(const SumInstance& inst, const Character& chi1, const Character& chi2);

}  // namespace charsum::evaluator

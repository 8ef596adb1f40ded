#pragma once

#include <cstdint>
#include <optional>

#include "charsum/cyclotomic.hpp"

namespace charsum::characters {

/**
 * A multiplicative character mod 2^m (m >= 3), fixed by its values on the
 * generators of (Z/2^m)* = <-1> x <5>:
 *
 *   chi(-1) = sign,  chi(5) = exp(2 pi i c / 2^(m-2)),  1 <= c <= 2^(m-2).
 *
 * c = 2^(m-2) encodes chi(5) = 1.
 */
class Character {
public:
    Character(unsigned m, int sign, std::uint64_t c);

    /// Accepts any c and reduces it into [1, 2^(m-2)].
    static Character normalized(unsigned m, int sign, std::uint64_t c);
    static Character principal(unsigned m);
    /// The character induced by the nontrivial character mod 4.
    static Character chi4(unsigned m);

    unsigned m() const noexcept { return m_; }
    int sign() const noexcept { return sign_; }
    std::uint64_t c() const noexcept { return c_; }
    std::uint64_t order_of_five() const noexcept { return std::uint64_t{1} << (m_ - 2); }

    bool is_principal() const noexcept { return sign_ == 1 && c_ == order_of_five(); }
    bool is_chi4() const noexcept { return sign_ == -1 && c_ == order_of_five(); }

    friend bool operator==(const Character&, const Character&) = default;

private:
    unsigned m_;
    int sign_;
    std::uint64_t c_;
};

/// Smallest ring exponent holding every value of a character mod 2^m
/// together with the eighth roots of unity.
constexpr unsigned ring_for_modulus(unsigned m) noexcept { return m > 5 ? m - 2 : 3; }

/**
 * chi(x) as an exponent of zeta_{2^r}, or nullopt for even x.
 * Requires r >= max(m - 2, 3).
 */
std::optional<std::uint64_t> char_exponent(const Character& chi, std::uint64_t x, unsigned r);

/// chi(x) in ring r; even x gives zero.
cyclotomic::CycInt eval_char(const Character& chi, std::uint64_t x, unsigned r);

/// Primitive mod 2^m iff c is odd.
bool is_primitive(const Character& chi);

struct Conductor {
    /// 0 for the principal character, 2 for chi4, otherwise in [3, m].
    unsigned exponent = 0;
    int sign = 1;
    /// The induced character mod 2^exponent when exponent >= 3.
    std::optional<Character> induced;
};

Conductor conductor(const Character& chi);

/// The same character viewed mod 2^m2, m2 >= conductor exponent and m2 >= 3.
Character induce(const Character& chi, unsigned m2);

Character char_conj(const Character& chi);
Character char_mul(const Character& a, const Character& b);
Character char_pow(const Character& chi, std::uint64_t k);

}  // namespace charsum::characters

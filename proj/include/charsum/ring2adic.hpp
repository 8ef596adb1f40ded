#pragma once

#include <cstdint>
#include <stdexcept>

// Arithmetic in Z/2^w for 1 <= w <= 64, plus the 2-adic helpers the
// character-sum evaluator needs: valuations, odd inverses, the R_i
// constants and discrete logarithms to base 5.

namespace charsum::ring2adic {

using u64 = std::uint64_t;
__extension__ using u128 = unsigned __int128;

// Largest residue width handled by the word-sized routines.
inline constexpr unsigned kMaxWidth = 64;

// Supported modulus exponent for sums over Z/2^m. compute_R needs
// (w + i)-bit intermediates with w, i <= m, which must fit in 64 bits.
inline constexpr unsigned kMaxModulusExponent = 30;

/// Raised when a requested width exceeds what the implementation supports.
class WidthCapExceeded : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

constexpr u64 mask(unsigned w) noexcept
{
    return w >= 64 ? ~u64{0} : (u64{1} << w) - 1;
}

constexpr u64 pow2(unsigned e) noexcept { return u64{1} << e; }

/// Largest e with 2^e | x. Zero is rejected.
unsigned v2(u64 x);

/// Inverse of an odd y modulo 2^w (Newton iteration).
u64 inv_mod2w(u64 y, unsigned w);

/// b^e mod 2^w by square-and-multiply; b^0 = 1.
u64 pow_mod2w(u64 b, u64 e, unsigned w);

inline u64 mul_mod2w(u64 a, u64 b, unsigned w) noexcept
{
    return static_cast<u64>(static_cast<u128>(a) * b) & mask(w);
}

/// R_i mod 2^w, where 5^(2^(i-2)) = 1 + R_i 2^i. Always odd.
u64 compute_R(unsigned i, unsigned w);

/// x = (-1)^negative * 5^gamma mod 2^m, 0 <= gamma < 2^(m-2).
struct Dlog5 {
    bool negative = false;
    u64 gamma = 0;

    friend bool operator==(const Dlog5&, const Dlog5&) = default;
};

Dlog5 dlog5(u64 x, unsigned m);

/// Jacobi symbol (2/h) for odd h; depends only on h mod 8.
int jacobi2(std::int64_t h);

/// A residue modulo 2^w.
class Residue2w {
public:
    Residue2w(u64 value, unsigned width);

    u64 value() const noexcept { return value_; }
    unsigned width() const noexcept { return width_; }
    bool is_odd() const noexcept { return (value_ & 1) != 0; }

    Residue2w inverse() const;
    Residue2w pow(u64 e) const;

    friend Residue2w operator+(Residue2w a, Residue2w b);
    friend Residue2w operator-(Residue2w a, Residue2w b);
    friend Residue2w operator*(Residue2w a, Residue2w b);
    friend Residue2w operator-(Residue2w a);
    friend bool operator==(const Residue2w&, const Residue2w&) = default;

private:
    u64 value_;
    unsigned width_;
};

}  // namespace charsum::ring2adic

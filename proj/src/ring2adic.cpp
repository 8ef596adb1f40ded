#include "charsum/ring2adic.hpp"

#include <bit>
#include <string>

namespace charsum::ring2adic {

namespace {

void check_width(unsigned w)
{
    if (w == 0 || w > kMaxWidth) {
        throw WidthCapExceeded("residue width " + std::to_string(w) + " outside [1, 64]");
    }
}

void check_same_width(const Residue2w& a, const Residue2w& b)
{
    if (a.width() != b.width()) {
        throw std::invalid_argument("residue widths differ");
    }
}

}  // namespace

unsigned v2(u64 x)
{
    if (x == 0) {
        throw std::invalid_argument("v2(0) is undefined");
    }
    return static_cast<unsigned>(std::countr_zero(x));
}

u64 inv_mod2w(u64 y, unsigned w)
{
    check_width(w);
    if ((y & 1) == 0) {
        throw std::invalid_argument("inverse mod 2^w requires an odd argument");
    }
    // y*y = 1 mod 8, so z = y is correct to 3 bits; each step doubles that.
    u64 z = y;
    for (int step = 0; step < 5; ++step) {
        z *= 2 - y * z;
    }
    return z & mask(w);
}

u64 pow_mod2w(u64 b, u64 e, unsigned w)
{
    check_width(w);
    u64 result = 1 & mask(w);
    b &= mask(w);
    while (e != 0) {
        if (e & 1) {
            result = mul_mod2w(result, b, w);
        }
        b = mul_mod2w(b, b, w);
        e >>= 1;
    }
    return result;
}

u64 compute_R(unsigned i, unsigned w)
{
    if (i < 2) {
        throw std::invalid_argument("R_i is defined for i >= 2");
    }
    check_width(w);
    if (w + i > kMaxWidth) {
        throw WidthCapExceeded("compute_R needs " + std::to_string(w + i) + "-bit intermediates");
    }
    const unsigned wide = w + i;
    // 5^(2^(i-2)) by i-2 squarings.
    u64 p = 5;
    for (unsigned s = 2; s < i; ++s) {
        p = mul_mod2w(p, p, wide);
    }
    return ((p - 1) & mask(wide)) >> i;
}

Dlog5 dlog5(u64 x, unsigned m)
{
    if (m < 3 || m > kMaxWidth - 1) {
        throw WidthCapExceeded("dlog5 needs 3 <= m <= 63");
    }
    if ((x & 1) == 0) {
        throw std::invalid_argument("dlog5 requires an odd argument");
    }
    x &= mask(m);
    Dlog5 out;
    out.negative = (x & 3) == 3;
    u64 y = out.negative ? (0 - x) & mask(m) : x;

    // Invariant: y = x' * 5^(-gamma_partial) = 1 mod 2^(j+2). Multiplying by
    // 5^(-2^j) = 1 + (odd) 2^(j+2) flips bit j+2 and leaves lower bits alone.
    u64 step = inv_mod2w(5, m);
    for (unsigned j = 0; j + 2 < m; ++j) {
        if ((y >> (j + 2)) & 1) {
            y = mul_mod2w(y, step, m);
            out.gamma |= u64{1} << j;
        }
        step = mul_mod2w(step, step, m);
    }
    return out;
}

int jacobi2(std::int64_t h)
{
    if ((h & 1) == 0) {
        throw std::invalid_argument("(2/h) requires odd h");
    }
    const auto r = static_cast<unsigned>(h & 7);
    return (r == 1 || r == 7) ? 1 : -1;
}

Residue2w::Residue2w(u64 value, unsigned width) : value_(0), width_(width)
{
    check_width(width);
    value_ = value & mask(width);
}

Residue2w Residue2w::inverse() const { return {inv_mod2w(value_, width_), width_}; }

Residue2w Residue2w::pow(u64 e) const { return {pow_mod2w(value_, e, width_), width_}; }

Residue2w operator+(Residue2w a, Residue2w b)
{
    check_same_width(a, b);
    return {a.value_ + b.value_, a.width_};
}

Residue2w operator-(Residue2w a, Residue2w b)
{
    check_same_width(a, b);
    return {a.value_ - b.value_, a.width_};
}

Residue2w operator*(Residue2w a, Residue2w b)
{
    check_same_width(a, b);
    return {mul_mod2w(a.value_, b.value_, a.width_), a.width_};
}

Residue2w operator-(Residue2w a) { return {0 - a.value_, a.width_}; }

}  // namespace charsum::ring2adic

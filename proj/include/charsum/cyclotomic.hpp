#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace charsum::cyclotomic {

// Largest ring exponent r accepted (degree 2^(r-1) must index a vector).
inline constexpr unsigned kMaxRingExponent = 40;

/// One nonzero coefficient of a cyclotomic integer in the power basis.
struct Term {
    std::uint64_t index = 0;
    std::int64_t coeff = 0;

    friend bool operator==(const Term&, const Term&) = default;
};

/**
 * An element of Z[zeta] with zeta = exp(2 pi i / 2^r).
 *
 * Values are written in the power basis zeta^0 .. zeta^(2^(r-1) - 1) using
 * zeta^(2^(r-1)) = -1. That basis is an integral basis, so the coefficient
 * sequence is unique and equality is plain coefficient comparison. Only
 * nonzero coefficients are stored, sorted by index.
 */
class CycInt {
public:
    /// Zero of the ring with exponent r.
    explicit CycInt(unsigned r);

    static CycInt from_integer(unsigned r, std::int64_t n);
    static CycInt from_dense(unsigned r, std::span<const std::int64_t> coeffs);
    /// Builds from arbitrary (index < 2^(r-1), coeff) pairs; duplicates are summed.
    static CycInt from_terms(unsigned r, std::vector<Term> terms);

    unsigned ring_exponent() const noexcept { return r_; }
    std::uint64_t degree() const noexcept { return std::uint64_t{1} << (r_ - 1); }

    std::int64_t coeff(std::uint64_t j) const;
    std::vector<std::int64_t> dense() const;
    const std::vector<Term>& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    /// True when the value lies in Z (only the zeta^0 coefficient may be nonzero).
    bool is_integer() const noexcept;

    friend CycInt operator+(const CycInt& a, const CycInt& b);
    friend CycInt operator-(const CycInt& a, const CycInt& b);
    friend CycInt operator-(const CycInt& a);
    friend CycInt operator*(const CycInt& a, const CycInt& b);
    friend CycInt operator*(std::int64_t s, const CycInt& a);
    friend bool operator==(const CycInt&, const CycInt&) = default;

private:
    CycInt(unsigned r, std::vector<Term> terms);
    static CycInt canonical(unsigned r, std::vector<Term> raw);

    unsigned r_;
    std::vector<Term> terms_;
};

/// zeta_{2^r}^j, reduced into the basis.
CycInt root_of_unity(unsigned r, std::int64_t j);

/// sqrt(2) = zeta_8 - zeta_8^3 inside ring r >= 3.
CycInt sqrt2(unsigned r);

/// Same value viewed in the larger ring r2 >= a.ring_exponent().
CycInt lift(const CycInt& a, unsigned r2);

/// Complex conjugation zeta -> zeta^-1.
CycInt conj(const CycInt& a);

/// Floating-point value, for display only.
std::complex<double> approx_complex(const CycInt& a);

/**
 * Dense accumulator for sums of roots of unity. add_root is O(1); the
 * oracle adds one root per summand.
 */
class CycAccumulator {
public:
    explicit CycAccumulator(unsigned r);

    unsigned ring_exponent() const noexcept { return r_; }

    /// Adds sign * zeta^e (e taken mod 2^r).
    void add_root(std::uint64_t e, std::int64_t sign = 1) noexcept
    {
        e &= full_mask_;
        if (e & half_) {
            coeffs_[e & (half_ - 1)] -= sign;
        } else {
            coeffs_[e] += sign;
        }
    }

    void merge(const CycAccumulator& other);
    CycInt value() const;

private:
    unsigned r_;
    std::uint64_t half_;
    std::uint64_t full_mask_;
    std::vector<std::int64_t> coeffs_;
};

}  // namespace charsum::cyclotomic

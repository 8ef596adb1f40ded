#include "charsum/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace charsum::cyclotomic {

namespace {

void check_ring(unsigned r)
{
    if (r < 1 || r > kMaxRingExponent) {
        throw std::invalid_argument("ring exponent " + std::to_string(r) + " out of range");
    }
}

void check_same_ring(const CycInt& a, const CycInt& b)
{
    if (a.ring_exponent() != b.ring_exponent()) {
        throw std::invalid_argument("cyclotomic operands live in different rings");
    }
}

}  // namespace

CycInt::CycInt(unsigned r) : r_(r) { check_ring(r); }

CycInt::CycInt(unsigned r, std::vector<Term> terms) : r_(r), terms_(std::move(terms)) {}

CycInt CycInt::canonical(unsigned r, std::vector<Term> raw)
{
    std::sort(raw.begin(), raw.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
    std::vector<Term> merged;
    merged.reserve(raw.size());
    for (const Term& t : raw) {
        if (!merged.empty() && merged.back().index == t.index) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == 0; });
    return CycInt(r, std::move(merged));
}

CycInt CycInt::from_terms(unsigned r, std::vector<Term> terms)
{
    check_ring(r);
    const std::uint64_t d = std::uint64_t{1} << (r - 1);
    for (const Term& t : terms) {
        if (t.index >= d) {
            throw std::invalid_argument("term index outside the power basis");
        }
    }
    return canonical(r, std::move(terms));
}

CycInt CycInt::from_integer(unsigned r, std::int64_t n)
{
    check_ring(r);
    if (n == 0) {
        return CycInt(r);
    }
    return CycInt(r, {Term{0, n}});
}

CycInt CycInt::from_dense(unsigned r, std::span<const std::int64_t> coeffs)
{
    check_ring(r);
    const std::uint64_t d = std::uint64_t{1} << (r - 1);
    if (coeffs.size() != d) {
        throw std::invalid_argument("dense coefficient vector must have length 2^(r-1)");
    }
    std::vector<Term> terms;
    for (std::uint64_t j = 0; j < d; ++j) {
        if (coeffs[j] != 0) {
            terms.push_back({j, coeffs[j]});
        }
    }
    return CycInt(r, std::move(terms));
}

std::int64_t CycInt::coeff(std::uint64_t j) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), j,
                               [](const Term& t, std::uint64_t idx) { return t.index < idx; });
    return (it != terms_.end() && it->index == j) ? it->coeff : 0;
}

std::vector<std::int64_t> CycInt::dense() const
{
    std::vector<std::int64_t> out(degree(), 0);
    for (const Term& t : terms_) {
        out[t.index] = t.coeff;
    }
    return out;
}

bool CycInt::is_integer() const noexcept
{
    return terms_.empty() || (terms_.size() == 1 && terms_.front().index == 0);
}

CycInt operator+(const CycInt& a, const CycInt& b)
{
    check_same_ring(a, b);
    std::vector<Term> raw = a.terms_;
    raw.insert(raw.end(), b.terms_.begin(), b.terms_.end());
    return CycInt::canonical(a.r_, std::move(raw));
}

CycInt operator-(const CycInt& a) { return -1 * a; }

CycInt operator-(const CycInt& a, const CycInt& b) { return a + (-b); }

CycInt operator*(std::int64_t s, const CycInt& a)
{
    if (s == 0) {
        return CycInt(a.r_);
    }
    std::vector<Term> out = a.terms_;
    for (Term& t : out) {
        t.coeff *= s;
    }
    return CycInt(a.r_, std::move(out));
}

CycInt operator*(const CycInt& a, const CycInt& b)
{
    check_same_ring(a, b);
    const std::uint64_t d = a.degree();
    std::vector<Term> raw;
    raw.reserve(a.terms_.size() * b.terms_.size());
    for (const Term& x : a.terms_) {
        for (const Term& y : b.terms_) {
            std::uint64_t e = x.index + y.index;
            std::int64_t c = x.coeff * y.coeff;
            if (e >= d) {
                e -= d;
                c = -c;
            }
            raw.push_back({e, c});
        }
    }
    return CycInt::canonical(a.r_, std::move(raw));
}

CycInt root_of_unity(unsigned r, std::int64_t j)
{
    check_ring(r);
    const std::uint64_t half = std::uint64_t{1} << (r - 1);
    // Two's complement keeps j mod 2^r correct for negative j.
    const std::uint64_t e = static_cast<std::uint64_t>(j) & ((half << 1) - 1);
    if (e >= half) {
        return CycInt::from_terms(r, {Term{e - half, -1}});
    }
    return CycInt::from_terms(r, {Term{e, 1}});
}

CycInt sqrt2(unsigned r)
{
    if (r < 3) {
        throw std::invalid_argument("sqrt(2) needs a ring containing the eighth roots of unity");
    }
    const std::int64_t eighth = std::int64_t{1} << (r - 3);
    return root_of_unity(r, eighth) - root_of_unity(r, 3 * eighth);
}

CycInt lift(const CycInt& a, unsigned r2)
{
    check_ring(r2);
    if (r2 < a.ring_exponent()) {
        throw std::invalid_argument("lift target ring is smaller than the source ring");
    }
    const unsigned shift = r2 - a.ring_exponent();
    std::vector<Term> terms = a.terms();
    for (Term& t : terms) {
        t.index <<= shift;
    }
    return CycInt::from_terms(r2, std::move(terms));
}

CycInt conj(const CycInt& a)
{
    // zeta^-j = -zeta^(d - j) for 0 < j < d.
    const std::uint64_t d = a.degree();
    std::vector<Term> terms = a.terms();
    for (Term& t : terms) {
        if (t.index != 0) {
            t.index = d - t.index;
            t.coeff = -t.coeff;
        }
    }
    return CycInt::from_terms(a.ring_exponent(), std::move(terms));
}

std::complex<double> approx_complex(const CycInt& a)
{
    const double order = std::ldexp(1.0, static_cast<int>(a.ring_exponent()));
    std::complex<double> z{0.0, 0.0};
    for (const Term& t : a.terms()) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(t.index) / order;
        z += static_cast<double>(t.coeff) * std::polar(1.0, angle);
    }
    return z;
}

CycAccumulator::CycAccumulator(unsigned r)
    : r_(r), half_(std::uint64_t{1} << (r - 1)), full_mask_((std::uint64_t{1} << r) - 1)
{
    check_ring(r);
    coeffs_.assign(half_, 0);
}

void CycAccumulator::merge(const CycAccumulator& other)
{
    if (other.r_ != r_) {
        throw std::invalid_argument("accumulators live in different rings");
    }
    for (std::uint64_t j = 0; j < half_; ++j) {
        coeffs_[j] += other.coeffs_[j];
    }
}

CycInt CycAccumulator::value() const { return CycInt::from_dense(r_, coeffs_); }

}  // namespace charsum::cyclotomic

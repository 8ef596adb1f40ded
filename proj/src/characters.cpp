#include "charsum/characters.hpp"

#include <stdexcept>
#include <string>

#include "charsum/ring2adic.hpp"

namespace charsum::characters {

namespace {

std::uint64_t wrap_c(std::uint64_t c, std::uint64_t order)
{
    const std::uint64_t r = c & (order - 1);
    return r == 0 ? order : r;
}

}  // namespace

Character::Character(unsigned m, int sign, std::uint64_t c) : m_(m), sign_(sign), c_(c)
{
    if (m < 3 || m > ring2adic::kMaxModulusExponent) {
        throw std::invalid_argument("character modulus exponent " + std::to_string(m) + " outside [3, " +
                                    std::to_string(ring2adic::kMaxModulusExponent) + "]");
    }
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("chi(-1) must be +1 or -1");
    }
    if (c < 1 || c > order_of_five()) {
        throw std::invalid_argument("character parameter c must lie in [1, 2^(m-2)]");
    }
}

Character Character::normalized(unsigned m, int sign, std::uint64_t c)
{
    if (m < 3 || m > ring2adic::kMaxModulusExponent) {
        return Character(m, sign, 1);  // throws
    }
    return Character(m, sign, wrap_c(c, std::uint64_t{1} << (m - 2)));
}

Character Character::principal(unsigned m) { return normalized(m, 1, 0); }

Character Character::chi4(unsigned m) { return normalized(m, -1, 0); }

std::optional<std::uint64_t> char_exponent(const Character& chi, std::uint64_t x, unsigned r)
{
    const unsigned m = chi.m();
    if (r < ring_for_modulus(m)) {
        throw std::invalid_argument("ring too small for the character's values");
    }
    if ((x & 1) == 0) {
        return std::nullopt;
    }
    const auto [negative, gamma] = ring2adic::dlog5(x, m);
    // zeta_{2^(m-2)} = zeta_{2^r}^(2^(r-m+2)).
    std::uint64_t e = (chi.c() * gamma) << (r - (m - 2));
    if (negative && chi.sign() < 0) {
        e += std::uint64_t{1} << (r - 1);
    }
    return e & ring2adic::mask(r);
}

cyclotomic::CycInt eval_char(const Character& chi, std::uint64_t x, unsigned r)
{
    const auto e = char_exponent(chi, x, r);
    if (!e) {
        return cyclotomic::CycInt(r);
    }
    return cyclotomic::root_of_unity(r, static_cast<std::int64_t>(*e));
}

bool is_primitive(const Character& chi) { return (chi.c() & 1) != 0; }

Conductor conductor(const Character& chi)
{
    Conductor out;
    out.sign = chi.sign();
    if (chi.c() == chi.order_of_five()) {
        out.exponent = chi.sign() > 0 ? 0 : 2;
        return out;
    }
    const unsigned drop = ring2adic::v2(chi.c());
    out.exponent = chi.m() - drop;
    out.induced = Character(out.exponent, chi.sign(), chi.c() >> drop);
    return out;
}

Character induce(const Character& chi, unsigned m2)
{
    const Conductor f = conductor(chi);
    if (m2 < 3 || m2 < f.exponent) {
        throw std::invalid_argument("cannot induce a character below its conductor");
    }
    if (m2 >= chi.m()) {
        return Character::normalized(m2, chi.sign(), chi.c() << (m2 - chi.m()));
    }
    return Character::normalized(m2, chi.sign(), chi.c() >> (chi.m() - m2));
}

Character char_conj(const Character& chi)
{
    return Character::normalized(chi.m(), chi.sign(), chi.order_of_five() - (chi.c() & (chi.order_of_five() - 1)));
}

Character char_mul(const Character& a, const Character& b)
{
    if (a.m() != b.m()) {
        throw std::invalid_argument("characters have different moduli");
    }
    return Character::normalized(a.m(), a.sign() * b.sign(), a.c() + b.c());
}

Character char_pow(const Character& chi, std::uint64_t k)
{
    const std::uint64_t order = chi.order_of_five();
    const std::uint64_t c = ((chi.c() & (order - 1)) * (k & (order - 1))) & (order - 1);
    const int sign = (k & 1) ? chi.sign() : 1;
    return Character::normalized(chi.m(), sign, c);
}

}  // namespace charsum::characters

#ifndef CGA_TESTS_SUPPORT_HPP
#define CGA_TESTS_SUPPORT_HPP

#include "cga/weyl.hpp"

#include <random>

namespace cga::testing {

inline GaussianRational random_gaussian(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

inline Coefficient random_coefficient(std::mt19937& rng, int terms = 2) {
    std::uniform_int_distribution<int> gpow(-2, 2), wpow(0, 2);
    Coefficient c;
    for (int k = 0; k < terms; ++k) c += Coefficient(random_gaussian(rng), {gpow(rng), wpow(rng)});
    return c;
}

/// Random operator of bounded degree in t, x, y and their derivatives, with phases.
inline WeylOp random_operator(std::mt19937& rng, int terms = 3, int max_pow = 2) {
    std::uniform_int_distribution<int> pw(0, max_pow), ph(-2, 2), coin(0, 2);
    WeylOp op;
    for (int k = 0; k < terms; ++k) {
        Monomial m;
        m.phase = {ph(rng), coin(rng) == 0 ? ph(rng) : 0};
        m.t_pow = static_cast<std::uint16_t>(coin(rng) == 0 ? pw(rng) : 0);
        m.x[0] = static_cast<std::uint16_t>(pw(rng));
        m.x[1] = static_cast<std::uint16_t>(pw(rng));
        m.dx[0] = static_cast<std::uint16_t>(pw(rng));
        m.dx[1] = static_cast<std::uint16_t>(pw(rng));
        m.dt_pow = static_cast<std::uint16_t>(coin(rng) == 0 ? 1 : 0);
        op += WeylOp::monomial(m, random_coefficient(rng, 1));
    }
    return op;
}

}  // namespace cga::testing

#endif

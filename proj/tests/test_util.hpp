#pragma once

// Shared random generators for the symbolic-calculus tests.

#include <random>

#include "lcs/forms.hpp"

namespace testutil {

inline lcs::TrigPoly random_poly(std::mt19937& rng, int nq, int np, int max_freq = 2) {
    std::uniform_int_distribution<int> freq(-max_freq, max_freq), coeff(-3, 3), pw(0, 2);
    lcs::TrigPoly p(nq, np);
    for (int t = 0; t < 3; ++t) {
        std::vector<int> fr(nq);
        for (auto& v : fr) v = freq(rng);
        std::vector<int> powers(np, 0);
        if (np > 0) powers[static_cast<std::size_t>(t) % np] = pw(rng);
        p = p + lcs::TrigPoly::harmonic(nq, np, fr, t % 2 == 1, lcs::Rat(coeff(rng), 2),
                                        powers);
    }
    return p;
}

inline lcs::TrigForm random_form(std::mt19937& rng, int degree, int nq, int np) {
    lcs::TrigForm f(degree, nq, np);
    const int d = nq + np;
    std::vector<int> pool(d);
    for (int i = 0; i < d; ++i) pool[i] = i;
    for (int t = 0; t < 2; ++t) {
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int> basis(pool.begin(), pool.begin() + degree);
        f.add_term(basis, random_poly(rng, nq, np));
    }
    return f;
}

// A random closed 1-form on T^n: constant part plus an exact part df.
inline lcs::TrigForm random_closed_one_form(std::mt19937& rng, int nq, int np) {
    std::uniform_int_distribution<int> coeff(-2, 2);
    lcs::TrigForm eta(1, nq, np);
    for (int i = 0; i < nq; ++i)
        eta.add_term({i}, lcs::TrigPoly::constant(nq, np, lcs::Rat(coeff(rng), 2)));
    lcs::TrigPoly f = random_poly(rng, nq, 0, 1).extended(nq, np);
    return eta + lcs::TrigForm::function(f).d();
}

// max over the grid of |lhs(x) - scale(x) * rhs(x)| across all basis
// coefficients; evaluates the product pointwise, which is exactly the grid
// residual of lhs - scale * rhs without expanding the symbolic product.
inline double scaled_difference_residual(const lcs::TrigForm& lhs,
                                         const lcs::TrigPoly& scale,
                                         const lcs::TrigForm& rhs,
                                         const lcs::SpaceModel& space) {
    std::map<std::vector<int>, std::pair<lcs::CompiledPoly, lcs::CompiledPoly>> keys;
    lcs::TrigPoly zero(lhs.nq(), lhs.np());
    for (const auto& [b, c] : lhs.terms())
        keys.emplace(b, std::make_pair(lcs::CompiledPoly(c), lcs::CompiledPoly(zero)));
    for (const auto& [b, c] : rhs.terms()) {
        auto it = keys.find(b);
        if (it == keys.end())
            keys.emplace(b, std::make_pair(lcs::CompiledPoly(zero), lcs::CompiledPoly(c)));
        else
            it->second.second = lcs::CompiledPoly(c);
    }
    lcs::CompiledPoly cs(scale);
    double worst = 0;
    for (const auto& x : space.grid()) {
        const double* q = x.data();
        const double* p = x.data() + space.nq;
        double s = cs.eval(q, p);
        for (const auto& [b, pair] : keys)
            worst = std::max(worst,
                             std::abs(pair.first.eval(q, p) - s * pair.second.eval(q, p)));
    }
    return worst;
}

} // namespace testutil

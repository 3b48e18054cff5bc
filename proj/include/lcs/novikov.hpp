#pragma once

// Novikov Betti numbers of (Q, [eta]) for integral classes, computed as
// homology with local coefficients on the infinite cyclic cover: each cell is
// lifted once (tree gauge), incidence coefficients pick up t^w with w the
// class value of the lift path, and ranks are taken over F(t).

#include <optional>
#include <string>
#include <vector>

#include "lcs/cell_complex.hpp"
#include "lcs/laurent.hpp"
#include "lcs/trig.hpp"

namespace lcs {

struct NovikovBetti {
    std::vector<int> betti;
    Field field = Field::Rationals;

    bool operator==(const NovikovBetti& o) const = default;
    int total() const {
        int s = 0;
        for (int b : betti) s += b;
        return s;
    }
};

struct LiftOptions {
    // Seed for the spanning-forest traversal order; any value yields the
    // same Betti numbers (tested), 0 is the deterministic default.
    unsigned tree_seed = 0;
};

// Boundary matrix C_k -> C_{k-1} over F[t, t^-1]; rows are (k-1)-cells.
LaurentMatrix twisted_boundary(const CellComplex& complex, const Cocycle& eta,
                               int k, Field field, const LiftOptions& opts = {});

NovikovBetti novikov_betti(const CellComplex& complex, const Cocycle& eta,
                           Field field, const LiftOptions& opts = {});

// b_k == b_{n-k} for all k. Requires is_closed_manifold, and orientability
// unless the field is F2; violations are typed errors, not `false`.
bool verify_duality(const CellComplex& complex, const Cocycle& eta, Field field);

// --- exact 1-dimensional Morse-Novikov complex -----------------------------

struct CircleZero {
    double theta = 0;
    int index = 0; // 1 where f decreases through zero, else 0
};

struct CircleMorseNovikov {
    std::vector<CircleZero> zeros;
    // differential d: C_1 -> C_0 over Q[t, t^-1]; empty when there are no
    // zeros. Exponents are graded by the class value (period * winding).
    LaurentMatrix differential;
    NovikovBetti betti;
    NovikovBetti subdivision_betti; // from the induced subdivision complex
};

// eta = f(theta) dtheta up to positive normalization; `f` is a trig
// polynomial in one variable with only simple zeros and `period` is the
// integral of eta over the circle. Throws ErrorKind::Degenerate when a zero
// fails the simplicity test.
CircleMorseNovikov circle_morse_novikov(const TrigPoly& f, long period,
                                        double zero_tol = 1e-9);

} // namespace lcs

#pragma once

// Finite regular CW complexes with enough attaching data to lift cells to the
// infinite cyclic cover of an integral degree-1 class:
//   - a 1-cell lists its endpoints as (source, -1), (target, +1);
//   - a 2-cell lists its boundary as an ordered closed edge walk of +-1 steps;
//   - a cell of dimension >= 3 must carry an explicit lift path (a signed
//     edge word from the cell's chosen basepoint lift to the face's) per
//     incidence entry before twisted boundaries can be formed.

#include <utility>
#include <vector>

#include "lcs/errors.hpp"

namespace lcs {

struct FaceEntry {
    int face = -1;
    int coeff = 0;
    std::vector<std::pair<int, int>> path; // (edge id, +-1) lift word
    bool has_path = false;
};

struct CellComplex {
    int dim = 0;
    int vertex_count = 0;
    // incidence[k][i] = faces of the i-th (k+1)-cell; k = 0 holds edges.
    std::vector<std::vector<std::vector<FaceEntry>>> incidence;
    bool is_closed_manifold = false;
    bool is_orientable = true;

    int cells(int k) const {
        if (k < 0 || k > dim) return 0;
        if (k == 0) return vertex_count;
        return static_cast<int>(incidence[k - 1].size());
    }

    const std::vector<FaceEntry>& faces_of(int k, int i) const {
        return incidence[k - 1][i];
    }

    int edge_source(int e) const;
    int edge_target(int e) const;

    // Structural checks: id ranges, edge endpoint format, closed 2-cell
    // walks, and del o del = 0 over the integers. Throws on violation.
    void validate() const;

    // Relabel cells of every dimension by the given permutations
    // (perm[k][old] = new). Used to test lift-choice invariance.
    CellComplex permuted(const std::vector<std::vector<int>>& perm) const;
};

struct Cocycle {
    std::vector<long long> edge_values;

    // Coboundary check: the signed edge-value sum over every 2-cell walk
    // vanishes. Throws ErrorKind::BadCocycle otherwise.
    void validate(const CellComplex& complex) const;

    bool is_zero() const {
        for (auto v : edge_values)
            if (v != 0) return false;
        return true;
    }
};

// Builders for the bundled test geometries.
namespace complexes {

// Circle with n vertices and n edges (n >= 1; n = 1 is the one-cell model).
CellComplex circle(int n = 1);

// One-vertex torus: edges a, b and a 2-cell attached along a b a^-1 b^-1.
CellComplex torus();

// One-vertex Klein bottle: 2-cell attached along a b a b^-1.
CellComplex klein_bottle();

// Product of two complexes of dimension <= 1 (e.g. subdivided circles).
// Cell order: vertices (va, vb) row-major; edges: first eA x vB, then
// vA x eB; squares eA x eB.
CellComplex product_1d(const CellComplex& a, const CellComplex& b);

// Cocycle on product_1d(a, b) from factor cocycles.
Cocycle product_cocycle(const CellComplex& a, const CellComplex& b,
                        const Cocycle& ca, const Cocycle& cb);

// Three-torus with explicit lift paths on the 2- and 3-cells.
CellComplex torus3();

} // namespace complexes

} // namespace lcs

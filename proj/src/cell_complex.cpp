#include "lcs/cell_complex.hpp"

#include <map>
#include <string>

namespace lcs {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw Error(ErrorKind::BadComplex, msg);
}

} // namespace

int CellComplex::edge_source(int e) const {
    for (const auto& f : incidence[0][e])
        if (f.coeff < 0) return f.face;
    throw Error(ErrorKind::BadComplex, "edge without source entry");
}

int CellComplex::edge_target(int e) const {
    for (const auto& f : incidence[0][e])
        if (f.coeff > 0) return f.face;
    throw Error(ErrorKind::BadComplex, "edge without target entry");
}

void CellComplex::validate() const {
    require(dim >= 0, "negative dimension");
    require(static_cast<int>(incidence.size()) == dim, "incidence size != dim");
    require(vertex_count > 0 || dim == 0, "complex without vertices");

    for (int k = 1; k <= dim; ++k) {
        for (int i = 0; i < cells(k); ++i) {
            const auto& faces = faces_of(k, i);
            for (const auto& f : faces) {
                require(f.face >= 0 && f.face < cells(k - 1),
                        "face id out of range in dimension " + std::to_string(k));
                require(f.coeff != 0, "zero incidence coefficient");
                for (const auto& [e, s] : f.path) {
                    require(e >= 0 && e < cells(1), "lift path edge out of range");
                    require(s == 1 || s == -1, "lift path sign must be +-1");
                }
            }
            if (k == 1) {
                require(faces.size() == 2, "edge must list source and target");
                int neg = 0, pos = 0;
                for (const auto& f : faces) {
                    require(f.coeff == 1 || f.coeff == -1, "edge coefficient must be +-1");
                    (f.coeff > 0 ? pos : neg)++;
                }
                require(neg == 1 && pos == 1, "edge needs one -1 and one +1 endpoint");
            }
            if (k == 2 && !faces.empty() && !faces.front().has_path) {
                // ordered closed walk through edge endpoints
                int start = -1, at = -1;
                for (const auto& f : faces) {
                    require(f.coeff == 1 || f.coeff == -1,
                            "2-cell walk steps must be +-1");
                    int s = f.coeff > 0 ? edge_source(f.face) : edge_target(f.face);
                    int t = f.coeff > 0 ? edge_target(f.face) : edge_source(f.face);
                    if (at < 0) start = s;
                    else require(s == at, "2-cell walk is not connected");
                    at = t;
                }
                require(at == start, "2-cell walk does not close up");
            }
        }
    }

    // del o del = 0 over Z on net coefficients
    for (int k = 2; k <= dim; ++k) {
        for (int i = 0; i < cells(k); ++i) {
            std::map<int, long long> acc; // (k-2)-cell -> coefficient
            for (const auto& f : faces_of(k, i)) {
                if (k - 1 == 0) continue;
                for (const auto& g : faces_of(k - 1, f.face))
                    acc[g.face] += static_cast<long long>(f.coeff) * g.coeff;
            }
            for (const auto& [cell, c] : acc)
                require(c == 0, "del o del != 0 at dimension " + std::to_string(k));
        }
    }
}

CellComplex CellComplex::permuted(const std::vector<std::vector<int>>& perm) const {
    CellComplex r = *this;
    auto map_id = [&](int k, int id) {
        if (k >= static_cast<int>(perm.size()) || perm[k].empty()) return id;
        return perm[k][id];
    };
    for (int k = 1; k <= dim; ++k) {
        std::vector<std::vector<FaceEntry>> cells_k(cells(k));
        for (int i = 0; i < cells(k); ++i) {
            auto faces = faces_of(k, i);
            for (auto& f : faces) {
                f.face = map_id(k - 1, f.face);
                for (auto& [e, s] : f.path) e = map_id(1, e);
            }
            cells_k[map_id(k, i)] = std::move(faces);
        }
        r.incidence[k - 1] = std::move(cells_k);
    }
    return r;
}

void Cocycle::validate(const CellComplex& complex) const {
    if (static_cast<int>(edge_values.size()) != complex.cells(1))
        throw Error(ErrorKind::BadCocycle, "cocycle size != number of 1-cells");
    for (int i = 0; i < complex.cells(2); ++i) {
        long long sum = 0;
        for (const auto& f : complex.faces_of(2, i))
            sum += static_cast<long long>(f.coeff) * edge_values[f.face];
        if (sum != 0)
            throw Error(ErrorKind::BadCocycle,
                        "coboundary does not vanish on 2-cell " + std::to_string(i));
    }
}

namespace complexes {

namespace {

FaceEntry entry(int face, int coeff) { return {face, coeff, {}, false}; }

FaceEntry entry_path(int face, int coeff, std::vector<std::pair<int, int>> path) {
    FaceEntry f{face, coeff, std::move(path), true};
    return f;
}

} // namespace

CellComplex circle(int n) {
    if (n < 1) throw Error(ErrorKind::Precondition, "circle needs >= 1 vertex");
    CellComplex c;
    c.dim = 1;
    c.vertex_count = n;
    c.incidence.resize(1);
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        c.incidence[0].push_back({entry(i, -1), entry(j, 1)});
    }
    c.is_closed_manifold = true;
    c.is_orientable = true;
    return c;
}

CellComplex torus() {
    CellComplex c;
    c.dim = 2;
    c.vertex_count = 1;
    c.incidence.resize(2);
    c.incidence[0].push_back({entry(0, -1), entry(0, 1)}); // a
    c.incidence[0].push_back({entry(0, -1), entry(0, 1)}); // b
    // a b a^-1 b^-1
    c.incidence[1].push_back({entry(0, 1), entry(1, 1), entry(0, -1), entry(1, -1)});
    c.is_closed_manifold = true;
    c.is_orientable = true;
    return c;
}

CellComplex klein_bottle() {
    CellComplex c;
    c.dim = 2;
    c.vertex_count = 1;
    c.incidence.resize(2);
    c.incidence[0].push_back({entry(0, -1), entry(0, 1)}); // a
    c.incidence[0].push_back({entry(0, -1), entry(0, 1)}); // b
    // a b a b^-1
    c.incidence[1].push_back({entry(0, 1), entry(1, 1), entry(0, 1), entry(1, -1)});
    c.is_closed_manifold = true;
    c.is_orientable = false;
    return c;
}

CellComplex product_1d(const CellComplex& a, const CellComplex& b) {
    if (a.dim > 1 || b.dim > 1)
        throw Error(ErrorKind::Precondition, "product_1d expects factors of dim <= 1");
    const int va = a.vertex_count, vb = b.vertex_count;
    const int ea = a.cells(1), eb = b.cells(1);
    CellComplex c;
    c.dim = (ea > 0 ? 1 : 0) + (eb > 0 ? 1 : 0);
    c.vertex_count = va * vb;
    c.incidence.resize(c.dim);
    auto vid = [&](int i, int j) { return i * vb + j; };
    // edges: eA x vB block first, then vA x eB
    auto he = [&](int e, int j) { return e * vb + j; };
    auto ve = [&](int i, int f) { return ea * vb + i * eb + f; };
    if (c.dim >= 1) {
        for (int e = 0; e < ea; ++e)
            for (int j = 0; j < vb; ++j)
                c.incidence[0].push_back(
                    {entry(vid(a.edge_source(e), j), -1), entry(vid(a.edge_target(e), j), 1)});
        for (int i = 0; i < va; ++i)
            for (int f = 0; f < eb; ++f)
                c.incidence[0].push_back(
                    {entry(vid(i, b.edge_source(f)), -1), entry(vid(i, b.edge_target(f)), 1)});
    }
    if (c.dim == 2) {
        // square e x f, walk: (e x s(f)) (t(e) x f) (e x t(f))^-1 (s(e) x f)^-1
        for (int e = 0; e < ea; ++e)
            for (int f = 0; f < eb; ++f)
                c.incidence[1].push_back({
                    entry(he(e, b.edge_source(f)), 1),
                    entry(ve(a.edge_target(e), f), 1),
                    entry(he(e, b.edge_target(f)), -1),
                    entry(ve(a.edge_source(e), f), -1),
                });
    }
    c.is_closed_manifold = a.is_closed_manifold && b.is_closed_manifold;
    c.is_orientable = a.is_orientable && b.is_orientable;
    return c;
}

Cocycle product_cocycle(const CellComplex& a, const CellComplex& b,
                        const Cocycle& ca, const Cocycle& cb) {
    Cocycle r;
    for (int e = 0; e < a.cells(1); ++e)
        for (int j = 0; j < b.vertex_count; ++j)
            r.edge_values.push_back(ca.edge_values[e]);
    for (int i = 0; i < a.vertex_count; ++i)
        for (int f = 0; f < b.cells(1); ++f)
            r.edge_values.push_back(cb.edge_values[f]);
    return r;
}

CellComplex torus3() {
    // one vertex; edges a, b, c; commutator squares ab, ac, bc; one 3-cell
    // with Koszul-style lift paths.
    CellComplex t;
    t.dim = 3;
    t.vertex_count = 1;
    t.incidence.resize(3);
    for (int e = 0; e < 3; ++e)
        t.incidence[0].push_back({entry(0, -1), entry(0, 1)});
    auto commutator = [&](int x, int y) {
        return std::vector<FaceEntry>{entry(x, 1), entry(y, 1), entry(x, -1), entry(y, -1)};
    };
    t.incidence[1].push_back(commutator(0, 1)); // ab
    t.incidence[1].push_back(commutator(0, 2)); // ac
    t.incidence[1].push_back(commutator(1, 2)); // bc
    // d(T) = (t^a - 1) bc - (t^b - 1) ac + (t^c - 1) ab
    t.incidence[2].push_back({
        entry_path(2, 1, {{0, 1}}), entry_path(2, -1, {}),
        entry_path(1, -1, {{1, 1}}), entry_path(1, 1, {}),
        entry_path(0, 1, {{2, 1}}), entry_path(0, -1, {}),
    });
    t.is_closed_manifold = true;
    t.is_orientable = true;
    return t;
}

} // namespace complexes

} // namespace lcs

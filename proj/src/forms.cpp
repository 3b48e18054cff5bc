#include "lcs/forms.hpp"

#include <algorithm>
#include <cmath>

namespace lcs {

std::vector<std::vector<double>> SpaceModel::grid() const {
    std::vector<std::vector<double>> pts;
    std::vector<double> x(dim(), 0.0);
    const double two_pi = 2.0 * M_PI;
    std::function<void(int)> rec = [&](int axis) {
        if (axis == dim()) {
            pts.push_back(x);
            return;
        }
        if (axis < nq) {
            for (int j = 0; j < q_samples; ++j) {
                x[axis] = two_pi * j / q_samples;
                rec(axis + 1);
            }
        } else {
            if (p_samples <= 1) {
                x[axis] = 0.5 * (p_min + p_max);
                rec(axis + 1);
            } else {
                for (int j = 0; j < p_samples; ++j) {
                    x[axis] = p_min + (p_max - p_min) * j / (p_samples - 1);
                    rec(axis + 1);
                }
            }
        }
    };
    rec(0);
    return pts;
}

VectorFieldExpr VectorFieldExpr::zero(int nq, int np) {
    VectorFieldExpr x;
    x.nq = nq;
    x.np = np;
    x.components.assign(nq + np, TrigPoly(nq, np));
    return x;
}

CompiledVectorField::CompiledVectorField(const VectorFieldExpr& x) {
    for (const auto& c : x.components) components.emplace_back(c);
}

void CompiledVectorField::eval(const double* x, double* out) const {
    const int nq = components.empty() ? 0 : components.front().nq;
    for (std::size_t i = 0; i < components.size(); ++i)
        out[i] = components[i].eval(x, x + nq);
}

namespace {

// Merge two strictly increasing index lists; returns the permutation sign or
// 0 when they collide.
int merge_sign(const std::vector<int>& a, const std::vector<int>& b,
               std::vector<int>& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    int inversions = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            inversions += static_cast<int>(a.size() - i);
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return inversions % 2 == 0 ? 1 : -1;
}

} // namespace

TrigForm::TrigForm(int degree, int nq, int np) : degree_(degree), nq_(nq), np_(np) {}

TrigForm TrigForm::function(const TrigPoly& f) {
    TrigForm r(0, f.nq(), f.np());
    r.add_term({}, f);
    return r;
}

TrigForm TrigForm::term(int nq, int np, std::vector<int> basis, const TrigPoly& coeff) {
    TrigForm r(static_cast<int>(basis.size()), nq, np);
    r.add_term(std::move(basis), coeff);
    return r;
}

TrigPoly TrigForm::coefficient(const std::vector<int>& basis) const {
    auto it = terms_.find(basis);
    return it == terms_.end() ? TrigPoly(nq_, np_) : it->second;
}

void TrigForm::add_term(std::vector<int> basis, const TrigPoly& coeff) {
    if (static_cast<int>(basis.size()) != degree_)
        throw Error(ErrorKind::Precondition, "form term of wrong degree");
    if (coeff.nq() != nq_ || coeff.np() != np_)
        throw Error(ErrorKind::Precondition, "form coefficient dimension mismatch");
    // sort basis indices, tracking the permutation sign
    int sign = 1;
    for (std::size_t i = 1; i < basis.size(); ++i)
        for (std::size_t j = i; j > 0 && basis[j] < basis[j - 1]; --j) {
            std::swap(basis[j], basis[j - 1]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < basis.size(); ++i)
        if (basis[i] == basis[i - 1]) return; // repeated covector
    for (int b : basis)
        if (b < 0 || b >= dim_check())
            throw Error(ErrorKind::Precondition, "basis covector out of range");
    TrigPoly c = sign > 0 ? coeff : -coeff;
    auto [it, inserted] = terms_.try_emplace(basis, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    } else if (it->second.is_zero()) {
        terms_.erase(it);
    }
}

int TrigForm::dim_check() const { return nq_ + np_; }

TrigForm TrigForm::operator+(const TrigForm& o) const {
    if (degree_ != o.degree_ || nq_ != o.nq_ || np_ != o.np_)
        throw Error(ErrorKind::Precondition, "form addition shape mismatch");
    TrigForm r = *this;
    for (const auto& [b, c] : o.terms_) r.add_term(b, c);
    return r;
}

TrigForm TrigForm::operator-(const TrigForm& o) const { return *this + (-o); }

TrigForm TrigForm::operator-() const {
    TrigForm r(degree_, nq_, np_);
    for (const auto& [b, c] : terms_) r.terms_[b] = -c;
    return r;
}

TrigForm TrigForm::scaled(const Rat& c) const {
    TrigForm r(degree_, nq_, np_);
    if (c == 0) return r;
    for (const auto& [b, v] : terms_) r.terms_[b] = v.scaled(c);
    return r;
}

TrigForm TrigForm::scaled_poly(const TrigPoly& f) const {
    TrigForm r(degree_, nq_, np_);
    for (const auto& [b, v] : terms_) {
        TrigPoly c = v * f;
        if (!c.is_zero()) r.add_term(b, c);
    }
    return r;
}

bool TrigForm::operator==(const TrigForm& o) const {
    return degree_ == o.degree_ && nq_ == o.nq_ && np_ == o.np_ && terms_ == o.terms_;
}

TrigForm TrigForm::wedge(const TrigForm& o) const {
    if (nq_ != o.nq_ || np_ != o.np_)
        throw Error(ErrorKind::Precondition, "wedge dimension mismatch");
    TrigForm r(degree_ + o.degree_, nq_, np_);
    std::vector<int> merged;
    for (const auto& [ba, ca] : terms_)
        for (const auto& [bb, cb] : o.terms_) {
            int sign = merge_sign(ba, bb, merged);
            if (sign == 0) continue;
            TrigPoly c = ca * cb;
            if (sign < 0) c = -c;
            if (!c.is_zero()) r.add_term(merged, c);
        }
    return r;
}

TrigForm TrigForm::d() const {
    TrigForm r(degree_ + 1, nq_, np_);
    for (const auto& [b, c] : terms_) {
        for (int i = 0; i < nq_ + np_; ++i) {
            TrigPoly dc = i < nq_ ? c.derivative_q(i) : c.derivative_p(i - nq_);
            if (dc.is_zero()) continue;
            std::vector<int> basis;
            basis.reserve(b.size() + 1);
            basis.push_back(i);
            basis.insert(basis.end(), b.begin(), b.end());
            r.add_term(std::move(basis), dc);
        }
    }
    return r;
}

TrigForm TrigForm::interior(const VectorFieldExpr& x) const {
    if (x.nq != nq_ || x.np != np_)
        throw Error(ErrorKind::Precondition, "interior product dimension mismatch");
    if (degree_ == 0)
        throw Error(ErrorKind::Precondition, "interior product with a function");
    TrigForm r(degree_ - 1, nq_, np_);
    for (const auto& [b, c] : terms_) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const TrigPoly& comp = x.components[b[j]];
            if (comp.is_zero()) continue;
            TrigPoly v = c * comp;
            if (j % 2 == 1) v = -v;
            std::vector<int> basis;
            basis.reserve(b.size() - 1);
            for (std::size_t i = 0; i < b.size(); ++i)
                if (i != j) basis.push_back(b[i]);
            r.add_term(std::move(basis), v);
        }
    }
    return r;
}

TrigPoly TrigForm::pair_field(const VectorFieldExpr& x) const {
    if (degree_ != 1)
        throw Error(ErrorKind::Precondition, "pair_field expects a 1-form");
    TrigPoly acc(nq_, np_);
    for (const auto& [b, c] : terms_) acc = acc + c * x.components[b[0]];
    return acc;
}

TrigForm TrigForm::extended(int new_nq, int new_np) const {
    TrigForm r(degree_, new_nq, new_np);
    for (const auto& [b, c] : terms_) {
        std::vector<int> basis;
        for (int idx : b)
            basis.push_back(idx < nq_ ? idx : idx - nq_ + new_nq);
        r.add_term(std::move(basis), c.extended(new_nq, new_np));
    }
    return r;
}

void TrigForm::eval_covector(const double* x, double* out) const {
    if (degree_ != 1)
        throw Error(ErrorKind::Precondition, "eval_covector expects a 1-form");
    std::fill(out, out + nq_ + np_, 0.0);
    for (const auto& [b, c] : terms_) out[b[0]] += c.eval(x, x + nq_);
}

void TrigForm::eval_matrix(const double* x, double* out) const {
    if (degree_ != 2)
        throw Error(ErrorKind::Precondition, "eval_matrix expects a 2-form");
    const int d = nq_ + np_;
    std::fill(out, out + d * d, 0.0);
    for (const auto& [b, c] : terms_) {
        double v = c.eval(x, x + nq_);
        out[b[0] * d + b[1]] += v;
        out[b[1] * d + b[0]] -= v;
    }
}

TrigForm d_eta(const TrigForm& beta, const TrigForm& eta) {
    if (eta.degree() != 1)
        throw Error(ErrorKind::Precondition, "eta must be a 1-form");
    if (!eta.d().is_zero())
        throw Error(ErrorKind::NotClosed, "eta is not closed");
    return beta.d() - eta.wedge(beta);
}

double max_abs_on_grid(const TrigForm& form, const SpaceModel& space) {
    std::vector<std::pair<std::vector<int>, CompiledPoly>> compiled;
    for (const auto& [b, c] : form.terms()) compiled.emplace_back(b, CompiledPoly(c));
    double worst = 0.0;
    for (const auto& x : space.grid())
        for (const auto& [b, c] : compiled)
            worst = std::max(worst, std::abs(c.eval(x.data(), x.data() + space.nq)));
    return worst;
}

CompiledForm2::CompiledForm2(const TrigForm& omega) : dim(omega.nq() + omega.np()) {
    if (omega.degree() != 2)
        throw Error(ErrorKind::Precondition, "CompiledForm2 expects a 2-form");
    for (const auto& [b, c] : omega.terms())
        entries.push_back({b[0], b[1], CompiledPoly(c)});
}

void CompiledForm2::eval(const double* x, double* out) const {
    std::fill(out, out + dim * dim, 0.0);
    const int nq = entries.empty() ? 0 : entries.front().coeff.nq;
    for (const auto& e : entries) {
        double v = e.coeff.eval(x, x + nq);
        out[e.a * dim + e.b] += v;
        out[e.b * dim + e.a] -= v;
    }
}

CompiledForm1::CompiledForm1(const TrigForm& alpha) : dim(alpha.nq() + alpha.np()) {
    if (alpha.degree() != 1)
        throw Error(ErrorKind::Precondition, "CompiledForm1 expects a 1-form");
    components.assign(dim, CompiledPoly(TrigPoly(alpha.nq(), alpha.np())));
    for (const auto& [b, c] : alpha.terms()) components[b[0]] = CompiledPoly(c);
}

void CompiledForm1::eval(const double* x, double* out) const {
    const int nq = components.empty() ? 0 : components.front().nq;
    for (int i = 0; i < dim; ++i) out[i] = components[i].eval(x, x + nq);
}

} // namespace lcs

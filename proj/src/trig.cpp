#include "lcs/trig.hpp"

#include <cmath>
#include <sstream>

namespace lcs {

namespace {

// Canonical sign: first nonzero frequency positive; sin(-x) = -sin(x).
void canonicalize(std::vector<int>& freq, bool sine, Rat& c, bool& out_sine) {
    out_sine = sine;
    for (int f : freq) {
        if (f > 0) return;
        if (f < 0) {
            for (auto& v : freq) v = -v;
            if (sine) c = -c;
            return;
        }
    }
    // all-zero frequency: sin(0) = 0, cos(0) = 1
    if (sine) c = 0;
    out_sine = false;
}

} // namespace

void TrigPoly::add_term(std::vector<int> freq, bool sine, Rat c,
                        std::vector<int> ppow) {
    bool s;
    canonicalize(freq, sine, c, s);
    if (c == 0) return;
    TrigKey key{std::move(freq), s, std::move(ppow)};
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

TrigPoly TrigPoly::constant(int nq, int np, const Rat& c) {
    TrigPoly p(nq, np);
    p.add_term(std::vector<int>(nq, 0), false, c, std::vector<int>(np, 0));
    return p;
}

TrigPoly TrigPoly::harmonic(int nq, int np, const std::vector<int>& freq,
                            bool sine, const Rat& c, const std::vector<int>& ppow) {
    if (static_cast<int>(freq.size()) != nq)
        throw Error(ErrorKind::Precondition, "harmonic: frequency size mismatch");
    TrigPoly p(nq, np);
    std::vector<int> pw = ppow.empty() ? std::vector<int>(np, 0) : ppow;
    if (static_cast<int>(pw.size()) != np)
        throw Error(ErrorKind::Precondition, "harmonic: p power size mismatch");
    p.add_term(freq, sine, c, pw);
    return p;
}

TrigPoly TrigPoly::coordinate_p(int nq, int np, int j) {
    std::vector<int> pw(np, 0);
    pw[j] = 1;
    return harmonic(nq, np, std::vector<int>(nq, 0), false, 1, pw);
}

bool TrigPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& k = terms_.begin()->first;
    for (int f : k.freq)
        if (f) return false;
    for (int a : k.ppow)
        if (a) return false;
    return !k.sine;
}

Rat TrigPoly::constant_value() const {
    TrigKey key{std::vector<int>(nq_, 0), false, std::vector<int>(np_, 0)};
    auto it = terms_.find(key);
    return it == terms_.end() ? Rat(0) : it->second;
}

void TrigPoly::check_dims(const TrigPoly& o, const char* where) const {
    if (nq_ != o.nq_ || np_ != o.np_)
        throw Error(ErrorKind::Precondition,
                    std::string(where) + ": mixed variable counts");
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
    check_dims(o, "trig add");
    TrigPoly r = *this;
    for (const auto& [k, c] : o.terms_) {
        auto [it, inserted] = r.terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) r.terms_.erase(it);
        }
    }
    return r;
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const { return *this + (-o); }

TrigPoly TrigPoly::operator-() const {
    TrigPoly r(nq_, np_);
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
}

TrigPoly TrigPoly::operator*(const TrigPoly& o) const {
    check_dims(o, "trig mul");
    TrigPoly r(nq_, np_);
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_) {
            std::vector<int> pw(np_);
            for (int j = 0; j < np_; ++j) pw[j] = ka.ppow[j] + kb.ppow[j];
            std::vector<int> sum(nq_), diff(nq_);
            for (int i = 0; i < nq_; ++i) {
                sum[i] = ka.freq[i] + kb.freq[i];
                diff[i] = ka.freq[i] - kb.freq[i];
            }
            Rat half = ca * cb / 2;
            if (!ka.sine && !kb.sine) { // cos cos
                r.add_term(diff, false, half, pw);
                r.add_term(sum, false, half, pw);
            } else if (ka.sine && kb.sine) { // sin sin
                r.add_term(diff, false, half, pw);
                r.add_term(sum, false, -half, pw);
            } else if (ka.sine && !kb.sine) { // sin cos
                r.add_term(sum, true, half, pw);
                r.add_term(diff, true, half, pw);
            } else { // cos sin
                r.add_term(sum, true, half, pw);
                r.add_term(diff, true, -half, pw);
            }
        }
    return r;
}

TrigPoly TrigPoly::scaled(const Rat& c) const {
    TrigPoly r(nq_, np_);
    if (c == 0) return r;
    for (const auto& [k, v] : terms_) r.terms_[k] = v * c;
    return r;
}

TrigPoly TrigPoly::derivative_q(int i) const {
    TrigPoly r(nq_, np_);
    for (const auto& [k, c] : terms_) {
        if (k.freq[i] == 0) continue;
        // d/dq cos(k.q) = -k_i sin(k.q), d/dq sin(k.q) = k_i cos(k.q)
        Rat nc = c * k.freq[i];
        if (!k.sine) nc = -nc;
        r.add_term(k.freq, !k.sine, nc, k.ppow);
    }
    return r;
}

TrigPoly TrigPoly::derivative_p(int j) const {
    TrigPoly r(nq_, np_);
    for (const auto& [k, c] : terms_) {
        if (k.ppow[j] == 0) continue;
        std::vector<int> pw = k.ppow;
        --pw[j];
        r.add_term(k.freq, k.sine, c * k.ppow[j], pw);
    }
    return r;
}

TrigPoly TrigPoly::extended(int new_nq, int new_np) const {
    if (new_nq < nq_ || new_np < np_)
        throw Error(ErrorKind::Precondition, "extended: cannot shrink model");
    TrigPoly r(new_nq, new_np);
    for (const auto& [k, c] : terms_) {
        std::vector<int> freq = k.freq;
        freq.resize(new_nq, 0);
        std::vector<int> pw = k.ppow;
        pw.resize(new_np, 0);
        r.add_term(std::move(freq), k.sine, c, std::move(pw));
    }
    return r;
}

double TrigPoly::eval(const double* q, const double* p) const {
    double acc = 0;
    for (const auto& [k, c] : terms_) {
        double phase = 0;
        for (int i = 0; i < nq_; ++i) phase += k.freq[i] * q[i];
        double v = to_double(c) * (k.sine ? std::sin(phase) : std::cos(phase));
        for (int j = 0; j < np_; ++j)
            for (int a = 0; a < k.ppow[j]; ++a) v *= p[j];
        acc += v;
    }
    return acc;
}

double TrigPoly::sup_bound(double p_bound) const {
    double acc = 0;
    for (const auto& [k, c] : terms_) {
        double v = std::abs(to_double(c));
        for (int j = 0; j < np_; ++j)
            for (int a = 0; a < k.ppow[j]; ++a) v *= p_bound;
        acc += v;
    }
    return acc;
}

std::string TrigPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        Rat a = c > 0 ? c : Rat(-c);
        os << a.str();
        bool any_freq = false;
        for (int f : k.freq) any_freq |= f != 0;
        if (any_freq) {
            os << (k.sine ? "*sin(" : "*cos(");
            bool f1 = true;
            for (int i = 0; i < nq_; ++i) {
                if (!k.freq[i]) continue;
                if (!f1 && k.freq[i] > 0) os << "+";
                if (k.freq[i] != 1) os << k.freq[i];
                os << "q" << (i + 1);
                f1 = false;
            }
            os << ")";
        }
        for (int j = 0; j < np_; ++j) {
            if (!k.ppow[j]) continue;
            os << "*p" << (j + 1);
            if (k.ppow[j] != 1) os << "^" << k.ppow[j];
        }
        first = false;
    }
    return os.str();
}

CompiledPoly::CompiledPoly(const TrigPoly& p) : nq(p.nq()), np(p.np()) {
    terms.reserve(p.terms().size());
    for (const auto& [k, c] : p.terms())
        terms.push_back({to_double(c), k.freq, k.ppow, k.sine});
}

double CompiledPoly::eval(const double* q, const double* p) const {
    double acc = 0;
    for (const auto& t : terms) {
        double phase = 0;
        for (int i = 0; i < nq; ++i) phase += t.freq[i] * q[i];
        double v = t.c * (t.sine ? std::sin(phase) : std::cos(phase));
        for (int j = 0; j < np; ++j)
            for (int a = 0; a < t.ppow[j]; ++a) v *= p[j];
        acc += v;
    }
    return acc;
}

TruncatedExp exp_truncated(const TrigPoly& f, double target, double p_bound) {
    const double bound = f.sup_bound(p_bound);
    // remainder of exp truncated at N: B^{N+1}/(N+1)! * e^B
    int order = 0;
    double tail = std::exp(bound);
    double pow_fact = 1.0;
    while (order < 120) {
        pow_fact *= bound / (order + 1);
        double rem = pow_fact * std::exp(bound);
        if (rem < target) {
            tail = rem;
            break;
        }
        ++order;
    }
    if (order >= 120)
        throw Error(ErrorKind::Precondition,
                    "exp_truncated: gauge function too large to certify");

    TrigPoly series = TrigPoly::constant(f.nq(), f.np(), 1);
    TrigPoly power = TrigPoly::constant(f.nq(), f.np(), 1);
    Rat fact = 1;
    for (int j = 1; j <= order + 1; ++j) {
        power = power * f;
        fact *= j;
        series = series + power.scaled(Rat(1) / fact);
    }
    return {series, tail, order + 1};
}

} // namespace lcs

#include "lcs/json_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace lcs {

namespace {

Rat rat_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rat(BigInt(s));
            return Rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "bad rational literal: " + s);
        }
    }
    if (j.is_array() && j.size() == 2)
        return Rat(BigInt(j[0].get<long long>()), BigInt(j[1].get<long long>()));
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_number_float()) {
        // exact value of the binary double
        double v = j.get<double>();
        int exp;
        double mant = std::frexp(v, &exp);
        long long scaled = static_cast<long long>(std::ldexp(mant, 53));
        exp -= 53;
        Rat r(scaled);
        for (int i = 0; i < std::abs(exp); ++i) {
            if (exp > 0) r *= 2;
            else r /= 2;
        }
        return r;
    }
    throw Error(ErrorKind::Parse, "expected a number");
}

json rat_to_json(const Rat& r) {
    if (boost::multiprecision::denominator(r) == 1) {
        // exact integers stay integers when they fit
        BigInt num = boost::multiprecision::numerator(r);
        if (num >= std::numeric_limits<long long>::min() &&
            num <= std::numeric_limits<long long>::max())
            return num.convert_to<long long>();
    }
    return r.str();
}

int basis_index_from_name(const std::string& name, int nq, int np) {
    if (name.size() < 3 || name[0] != 'd')
        throw Error(ErrorKind::Parse, "bad basis covector: " + name);
    char kind = name[1];
    int idx = std::stoi(name.substr(2)) - 1;
    if (kind == 'q' && idx >= 0 && idx < nq) return idx;
    if (kind == 'p' && idx >= 0 && idx < np) return nq + idx;
    throw Error(ErrorKind::Parse, "basis covector out of range: " + name);
}

std::string basis_name(int index, int nq) {
    std::ostringstream os;
    if (index < nq) os << "dq" << index + 1;
    else os << "dp" << index - nq + 1;
    return os.str();
}

TrigPoly coeff_from_json(const json& j, int nq, int np) {
    TrigPoly acc(nq, np);
    if (j.is_number() || j.is_string()) // plain constant
        return TrigPoly::constant(nq, np, rat_from_json(j));
    if (j.contains("terms")) {
        for (const auto& t : j["terms"]) {
            std::vector<int> k = t.value("k", std::vector<int>(nq, 0));
            k.resize(nq, 0);
            std::vector<int> p = t.value("p", std::vector<int>(np, 0));
            p.resize(np, 0);
            bool sine = t.value("kind", "cos") == std::string("sin");
            acc = acc + TrigPoly::harmonic(nq, np, k, sine, rat_from_json(t.at("c")), p);
        }
        return acc;
    }
    // product form: (sum of harmonics) * (sum of p monomials)
    TrigPoly trig(nq, np);
    if (j.contains("trig")) {
        for (const auto& t : j["trig"]) {
            std::vector<int> k = t.at(0).get<std::vector<int>>();
            k.resize(nq, 0);
            trig = trig + TrigPoly::harmonic(nq, np, k, false, rat_from_json(t.at(1)));
            if (t.size() > 2)
                trig = trig + TrigPoly::harmonic(nq, np, k, true, rat_from_json(t.at(2)));
        }
    } else {
        trig = TrigPoly::constant(nq, np, 1);
    }
    TrigPoly ppart(nq, np);
    if (j.contains("p_poly")) {
        for (const auto& t : j["p_poly"]) {
            std::vector<int> pw = t.at(0).get<std::vector<int>>();
            pw.resize(np, 0);
            ppart = ppart + TrigPoly::harmonic(nq, np, std::vector<int>(nq, 0), false,
                                               rat_from_json(t.at(1)), pw);
        }
    } else {
        ppart = TrigPoly::constant(nq, np, 1);
    }
    return trig * ppart;
}

json coeff_to_json(const TrigPoly& c) {
    json terms = json::array();
    for (const auto& [k, v] : c.terms()) {
        json t;
        t["k"] = k.freq;
        t["kind"] = k.sine ? "sin" : "cos";
        t["p"] = k.ppow;
        t["c"] = rat_to_json(v);
        terms.push_back(t);
    }
    return json{{"terms", terms}};
}

} // namespace

CellComplex complex_from_json(const json& j) {
    CellComplex c;
    try {
        c.dim = j.at("dim").get<int>();
        std::vector<int> counts = j.at("cells").get<std::vector<int>>();
        if (static_cast<int>(counts.size()) != c.dim + 1)
            throw Error(ErrorKind::Parse, "cells array must list dim+1 counts");
        c.vertex_count = counts.empty() ? 0 : counts[0];
        c.incidence.resize(c.dim);
        for (int k = 1; k <= c.dim; ++k)
            c.incidence[k - 1].resize(counts[k]);
        for (const auto& rec : j.at("incidence")) {
            int k = rec.at("cell").at(0).get<int>();
            int i = rec.at("cell").at(1).get<int>();
            if (k < 1 || k > c.dim || i < 0 || i >= static_cast<int>(c.incidence[k - 1].size()))
                throw Error(ErrorKind::Parse, "incidence record out of range");
            auto& faces = c.incidence[k - 1][i];
            for (const auto& f : rec.at("faces")) {
                FaceEntry e;
                e.face = f.at(0).get<int>();
                e.coeff = f.at(1).get<int>();
                faces.push_back(e);
            }
            if (rec.contains("paths")) {
                const auto& paths = rec.at("paths");
                if (paths.size() != faces.size())
                    throw Error(ErrorKind::Parse, "paths array must match faces");
                for (std::size_t t = 0; t < faces.size(); ++t) {
                    faces[t].has_path = true;
                    for (const auto& step : paths[t])
                        faces[t].path.emplace_back(step.at(0).get<int>(),
                                                   step.at(1).get<int>());
                }
            }
        }
        if (j.contains("flags")) {
            c.is_closed_manifold = j["flags"].value("is_closed_manifold", false);
            c.is_orientable = j["flags"].value("is_orientable", true);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("bad complex JSON: ") + e.what());
    }
    c.validate();
    return c;
}

json complex_to_json(const CellComplex& c) {
    json j;
    j["schema"] = kSchemaTag;
    j["dim"] = c.dim;
    std::vector<int> counts;
    for (int k = 0; k <= c.dim; ++k) counts.push_back(c.cells(k));
    j["cells"] = counts;
    json inc = json::array();
    for (int k = 1; k <= c.dim; ++k)
        for (int i = 0; i < c.cells(k); ++i) {
            json rec;
            rec["cell"] = {k, i};
            json faces = json::array();
            bool any_path = false;
            for (const auto& f : c.faces_of(k, i)) {
                faces.push_back({f.face, f.coeff});
                any_path |= f.has_path;
            }
            rec["faces"] = faces;
            if (any_path) {
                json paths = json::array();
                for (const auto& f : c.faces_of(k, i)) {
                    json path = json::array();
                    for (const auto& [e, s] : f.path) path.push_back({e, s});
                    paths.push_back(path);
                }
                rec["paths"] = paths;
            }
            inc.push_back(rec);
        }
    j["incidence"] = inc;
    j["flags"] = {{"is_closed_manifold", c.is_closed_manifold},
                  {"is_orientable", c.is_orientable}};
    return j;
}

Cocycle cocycle_from_json(const json& j) {
    Cocycle c;
    try {
        c.edge_values = j.at("edge_values").get<std::vector<long long>>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("bad cocycle JSON: ") + e.what());
    }
    return c;
}

json cocycle_to_json(const Cocycle& c) {
    return json{{"schema", kSchemaTag}, {"edge_values", c.edge_values}};
}

json betti_to_json(const NovikovBetti& b) {
    return json{{"schema", kSchemaTag},
                {"betti", b.betti},
                {"field", field_name(b.field)}};
}

TrigForm form_from_json(const json& j) {
    try {
        int degree = j.at("degree").get<int>();
        int nq = j.at("nq").get<int>();
        int np = j.value("np", 0);
        TrigForm f(degree, nq, np);
        for (const auto& t : j.at("terms")) {
            std::vector<int> basis;
            for (const auto& b : t.at("basis"))
                basis.push_back(basis_index_from_name(b.get<std::string>(), nq, np));
            f.add_term(basis, coeff_from_json(t.at("coeff"), nq, np));
        }
        return f;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("bad form JSON: ") + e.what());
    }
}

json form_to_json(const TrigForm& f) {
    json j;
    j["schema"] = kSchemaTag;
    j["degree"] = f.degree();
    j["nq"] = f.nq();
    j["np"] = f.np();
    json terms = json::array();
    for (const auto& [basis, coeff] : f.terms()) {
        json t;
        json names = json::array();
        for (int b : basis) names.push_back(basis_name(b, f.nq()));
        t["basis"] = names;
        t["coeff"] = coeff_to_json(coeff);
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

GeneratingFamily family_from_json(const json& j) {
    try {
        int n = j.at("n").get<int>();
        int m = j.at("m").get<int>();
        std::vector<std::vector<double>> quad;
        if (j.contains("quad") && !j["quad"].is_null())
            quad = j["quad"].get<std::vector<std::vector<double>>>();
        double radius = j.value("ball_radius", 1.0);
        std::vector<CoreTerm> core;
        for (const auto& t : j.value("core", json::array())) {
            CoreTerm ct;
            ct.coeff = t.at("coeff").get<double>();
            ct.freq = t.value("freq", std::vector<int>(n, 0));
            ct.freq.resize(n, 0);
            ct.sine = t.value("sine", false);
            ct.xi_pow = t.value("xi_pow", std::vector<int>(m, 0));
            ct.xi_pow.resize(m, 0);
            core.push_back(ct);
        }
        return GeneratingFamily(n, m, quad, radius, core);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("bad family JSON: ") + e.what());
    }
}

json family_to_json(const GeneratingFamily& f) {
    json j;
    j["schema"] = kSchemaTag;
    j["n"] = f.n();
    j["m"] = f.m();
    j["quad"] = f.quad();
    j["ball_radius"] = f.ball_radius();
    json core = json::array();
    for (const auto& t : f.core())
        core.push_back({{"coeff", t.coeff},
                        {"freq", t.freq},
                        {"sine", t.sine},
                        {"xi_pow", t.xi_pow}});
    j["core"] = core;
    return j;
}

json error_to_json(const Error& e) {
    return json{{"schema", kSchemaTag},
                {"error", {{"kind", error_kind_name(e.kind())}, {"message", e.what()}}}};
}

// --- expression grammar ------------------------------------------------------

namespace {

struct Lexer {
    std::string src;
    std::size_t pos = 0;

    void skip() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
            ++pos;
    }
    bool eof() {
        skip();
        return pos >= src.size();
    }
    char peek() {
        skip();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        skip();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool accept_word(const std::string& w) {
        skip();
        if (src.compare(pos, w.size(), w) == 0) {
            pos += w.size();
            return true;
        }
        return false;
    }
    long integer() {
        skip();
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
            ++pos;
        if (start == pos) throw Error(ErrorKind::Parse, "expected an integer in form expression");
        return std::stol(src.substr(start, pos - start));
    }
    // decimal or a/b rational
    Rat number() {
        skip();
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
            ++pos;
        std::string intpart = src.substr(start, pos - start);
        if (pos < src.size() && src[pos] == '.') {
            ++pos;
            std::size_t fs = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
                ++pos;
            std::string frac = src.substr(fs, pos - fs);
            if (intpart.empty() && frac.empty())
                throw Error(ErrorKind::Parse, "bad number in form expression");
            BigInt den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            return Rat(BigInt(intpart.empty() ? "0" : intpart) * den + BigInt(frac.empty() ? "0" : frac), den);
        }
        if (intpart.empty()) throw Error(ErrorKind::Parse, "bad number in form expression");
        if (pos < src.size() && src[pos] == '/') {
            ++pos;
            long den = integer();
            return Rat(BigInt(intpart), BigInt(den));
        }
        return Rat(BigInt(intpart));
    }
};

struct ParsedTerm {
    Rat coeff = 1;
    std::map<int, long> phase; // q index -> integer frequency (empty: no trig)
    bool sine = false;
    bool has_trig = false;
    int dq_index = -1; // -1 for scalar terms
};

// phase = [-] [int] q[int] { (+|-) [int] q[int] }
void parse_phase(Lexer& lx, ParsedTerm& term) {
    int sign = lx.accept('-') ? -1 : 1;
    while (true) {
        long mult = 1;
        if (std::isdigit(static_cast<unsigned char>(lx.peek()))) mult = lx.integer();
        if (!lx.accept_word("q"))
            throw Error(ErrorKind::Parse, "expected q<i> inside cos/sin");
        long idx = 1;
        if (std::isdigit(static_cast<unsigned char>(lx.peek()))) idx = lx.integer();
        term.phase[static_cast<int>(idx - 1)] += sign * mult;
        if (lx.accept('+')) sign = 1;
        else if (lx.accept('-')) sign = -1;
        else break;
    }
}

std::vector<ParsedTerm> parse_terms(const std::string& src, bool forms) {
    Lexer lx{src};
    if (lx.eof()) throw Error(ErrorKind::Parse, "empty expression");
    std::vector<ParsedTerm> terms;
    bool negative = lx.accept('-');
    while (!lx.eof()) {
        ParsedTerm term;
        if (negative) term.coeff = -1;
        char c = lx.peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            term.coeff = term.coeff * lx.number();
        if (lx.accept('*')) {} // optional explicit product
        bool is_cos = lx.accept_word("cos");
        bool is_sin = !is_cos && lx.accept_word("sin");
        if (is_cos || is_sin) {
            term.has_trig = true;
            term.sine = is_sin;
            if (!lx.accept('('))
                throw Error(ErrorKind::Parse, "expected ( after cos/sin");
            parse_phase(lx, term);
            if (!lx.accept(')'))
                throw Error(ErrorKind::Parse, "expected ) closing cos/sin");
        }
        if (lx.accept('*')) {}
        if (forms) {
            if (!lx.accept_word("dq"))
                throw Error(ErrorKind::Parse, "every term needs a dq<i> factor");
            long idx = 1;
            if (std::isdigit(static_cast<unsigned char>(lx.peek()))) idx = lx.integer();
            term.dq_index = static_cast<int>(idx - 1);
        }
        terms.push_back(std::move(term));
        if (lx.eof()) break;
        if (lx.accept('+')) negative = false;
        else if (lx.accept('-')) negative = true;
        else throw Error(ErrorKind::Parse, "expected + or - between terms");
        if (lx.eof()) throw Error(ErrorKind::Parse, "dangling operator");
    }
    return terms;
}

int torus_dimension(const std::vector<ParsedTerm>& terms, int min_n) {
    int n = std::max(min_n, 1);
    for (const auto& t : terms) {
        n = std::max(n, t.dq_index + 1);
        for (const auto& [idx, mult] : t.phase) n = std::max(n, idx + 1);
    }
    return n;
}

} // namespace

TrigForm parse_one_form(const std::string& src, int min_n) {
    auto terms = parse_terms(src, true);
    int n = torus_dimension(terms, min_n);
    TrigForm f(1, n, 0);
    for (const auto& t : terms) {
        std::vector<int> freq(n, 0);
        for (const auto& [idx, mult] : t.phase) freq[idx] = static_cast<int>(mult);
        TrigPoly coeff = t.has_trig ? TrigPoly::harmonic(n, 0, freq, t.sine, t.coeff)
                                    : TrigPoly::constant(n, 0, t.coeff);
        f.add_term({t.dq_index}, coeff);
    }
    return f;
}

TrigPoly parse_scalar(const std::string& src, int min_n) {
    auto terms = parse_terms(src, false);
    int n = torus_dimension(terms, min_n);
    TrigPoly p(n, 0);
    for (const auto& t : terms) {
        std::vector<int> freq(n, 0);
        for (const auto& [idx, mult] : t.phase) freq[idx] = static_cast<int>(mult);
        p = p + (t.has_trig ? TrigPoly::harmonic(n, 0, freq, t.sine, t.coeff)
                            : TrigPoly::constant(n, 0, t.coeff));
    }
    return p;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace lcs

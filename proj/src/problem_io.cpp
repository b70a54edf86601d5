#include "fracsol/problem_io.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "fracsol/errors.hpp"
#include "json.hpp"

namespace fracsol {
namespace {

using nlohmann::json;
using cplx = std::complex<double>;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Display formatting for the human-readable rendering (matches the term
// algebra's render_text style).
std::string fmt_disp(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

std::string complex_disp(cplx z) {
    if (z.imag() == 0.0) return fmt_disp(z.real());
    std::string s = "(" + fmt_disp(z.real());
    s += z.imag() < 0 ? "-" : "+";
    double im = std::abs(z.imag());
    if (im != 1.0) s += fmt_disp(im);
    s += "i)";
    return s;
}

void locate(const std::string& text, size_t byte, int& line, int& col) {
    line = 1;
    col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

cplx read_complex(const json& j, const char* what) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_object()) {
        double re = j.value("re", 0.0);
        double im = j.value("im", 0.0);
        if (!j.contains("re") && !j.contains("im"))
            throw ParseError(std::string(what) + ": complex value needs re or im");
        return cplx(re, im);
    }
    throw ParseError(std::string(what) + ": expected a number or {re, im}");
}

int power_index_from_exponent(double p, double alpha) {
    double ratio = p / alpha;
    double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9)
        throw ValidationError("exponent " + fmt_disp(p) + " is not an integer multiple of alpha");
    if (rounded < 0.0) throw ValidationError("negative forcing exponent");
    return static_cast<int>(rounded);
}

void append_trig_pair(TermSum& g, cplx coeff, int k, double b, bool is_sin) {
    if (is_sin) {
        // sin_a(b t^a) = (E(ib t^a) - E(-ib t^a)) / (2i)
        g.terms.push_back({coeff * cplx(0.0, -0.5), k, cplx(0.0, b)});
        g.terms.push_back({coeff * cplx(0.0, 0.5), k, cplx(0.0, -b)});
    } else {
        g.terms.push_back({coeff * 0.5, k, cplx(0.0, b)});
        g.terms.push_back({coeff * 0.5, k, cplx(0.0, -b)});
    }
}

FracTerm read_raw_atom(const json& a, const char* what) {
    FracTerm t;
    if (!a.contains("coeff")) throw ParseError(std::string(what) + ": atom needs coeff");
    t.coeff = read_complex(a.at("coeff"), what);
    t.k = a.value("k", 0);
    if (t.k < 0) throw ValidationError("negative forcing power index");
    t.a = cplx(a.value("rate_re", 0.0), a.value("rate_im", 0.0));
    return t;
}

TermSum read_forcing(const json& arr, double alpha) {
    if (!arr.is_array()) throw ParseError("forcing: expected an array of atoms");
    TermSum g;
    g.alpha = alpha;
    for (const json& a : arr) {
        if (!a.is_object()) throw ParseError("forcing: atoms must be objects");
        std::string kind = a.value("kind", "");
        if (kind.empty()) {
            g.terms.push_back(read_raw_atom(a, "forcing"));
        } else if (kind == "ml") {
            FracTerm t;
            t.coeff = read_complex(a.at("coeff"), "forcing ml");
            t.k = a.value("k", 0);
            t.a = read_complex(a.at("rate"), "forcing ml rate");
            g.terms.push_back(t);
        } else if (kind == "power") {
            FracTerm t;
            t.coeff = read_complex(a.at("coeff"), "forcing power");
            if (a.contains("k"))
                t.k = a.at("k").get<int>();
            else if (a.contains("exponent"))
                t.k = power_index_from_exponent(a.at("exponent").get<double>(), alpha);
            else
                throw ParseError("forcing power: needs k or exponent");
            if (t.k < 0) throw ValidationError("negative forcing power index");
            g.terms.push_back(t);
        } else if (kind == "cos" || kind == "sin") {
            cplx coeff = read_complex(a.at("coeff"), "forcing trig");
            double b = a.at("rate").get<double>();
            append_trig_pair(g, coeff, a.value("k", 0), b, kind == "sin");
        } else {
            throw ParseError("forcing: unknown atom kind '" + kind + "'");
        }
    }
    return g;
}

Problem parse_problem_json(const std::string& text, const ParseOptions& opts) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 0, col = 0;
        locate(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
        throw ParseError(e.what(), line, col);
    }
    if (!j.is_object()) throw ParseError("problem: expected a JSON object");

    double alpha;
    if (opts.alpha)
        alpha = *opts.alpha;
    else if (j.contains("alpha"))
        alpha = j.at("alpha").get<double>();
    else
        throw ValidationError("problem: alpha missing (file field or --alpha)");
    if (!(alpha > 0.0) || alpha > 1.0) throw ValidationError("problem: alpha must be in (0, 1]");

    bool has_op = j.contains("operator") || j.contains("forcing");
    bool has_eq = j.contains("equation");
    if (has_op == has_eq)
        throw ValidationError("problem: provide either operator+forcing or equation");

    try {
        if (has_eq) {
            std::map<std::string, double> bindings = opts.bindings;
            if (j.contains("bindings")) {
                for (auto it = j.at("bindings").begin(); it != j.at("bindings").end(); ++it)
                    bindings[it.key()] = it.value().get<double>();
            }
            return parse_equation_dsl(j.at("equation").get<std::string>(), alpha, bindings);
        }

        if (!j.contains("operator")) throw ParseError("problem: operator missing");
        const json& oc = j.at("operator");
        if (!oc.is_array() || oc.empty())
            throw ParseError("problem: operator must be a non-empty coefficient array");
        Problem p;
        p.op.alpha = alpha;
        for (const json& c : oc) p.op.coeffs.push_back(read_complex(c, "operator"));
        if (std::abs(p.op.coeffs.back()) == 0.0)
            throw ValidationError("problem: leading operator coefficient is zero");
        p.forcing.alpha = alpha;
        if (j.contains("forcing")) p.forcing = read_forcing(j.at("forcing"), alpha);
        return p;
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

std::string term_sum_json(const TermSum& s) {
    std::string out = "{\"alpha\": " + fmt17(s.alpha) + ", \"terms\": [";
    for (size_t i = 0; i < s.terms.size(); ++i) {
        const FracTerm& t = s.terms[i];
        if (i) out += ", ";
        out += "{\"re\": " + fmt17(t.coeff.real()) + ", \"im\": " + fmt17(t.coeff.imag()) +
               ", \"k\": " + std::to_string(t.k) + ", \"a_re\": " + fmt17(t.a.real()) +
               ", \"a_im\": " + fmt17(t.a.imag()) + "}";
    }
    out += "]}";
    return out;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string power_disp(int k) {
    if (k == 0) return "";
    if (k == 1) return "t^a";
    return "t^(" + std::to_string(k) + "a)";
}

std::string mode_disp(cplx rate) {
    if (std::abs(rate) == 0.0) return "";
    std::string arg;
    if (rate == cplx(1.0, 0.0))
        arg = "t^a";
    else if (rate == cplx(-1.0, 0.0))
        arg = "-t^a";
    else
        arg = complex_disp(rate) + "*t^a";
    return "E_a(" + arg + ")";
}

std::string atom_disp(int k, cplx rate) {
    std::string p = power_disp(k);
    std::string m = mode_disp(rate);
    if (p.empty() && m.empty()) return "1";
    if (p.empty()) return m;
    if (m.empty()) return p;
    return p + "*" + m;
}

std::string trig_disp(int k, double damp, double freq, bool is_sin) {
    std::string s = power_disp(k);
    if (damp != 0.0) {
        if (!s.empty()) s += "*";
        s += mode_disp(cplx(damp, 0.0));
    }
    if (!s.empty()) s += "*";
    std::string arg = freq == 1.0 ? "t^a" : fmt_disp(freq) + "*t^a";
    s += (is_sin ? "sin_a(" : "cos_a(") + arg + ")";
    return s;
}

// Render the particular part, preferring the paired real form.
std::string particular_disp(const TermSum& pi) {
    if (pi.terms.empty()) return "";
    try {
        RealRendering rr = to_real(pi);
        return render_text(rr);
    } catch (const SolverError&) {
        std::string out;
        for (size_t i = 0; i < pi.terms.size(); ++i) {
            const FracTerm& t = pi.terms[i];
            if (i) out += " + ";
            out += complex_disp(t.coeff);
            std::string at = atom_disp(t.k, t.a);
            if (at != "1") out += "*" + at;
        }
        return out;
    }
}

}  // namespace

Problem parse_problem(const std::string& text, InputFormat fmt, const ParseOptions& opts) {
    if (fmt == InputFormat::json) return parse_problem_json(text, opts);
    if (!opts.alpha) throw ValidationError("DSL input needs --alpha");
    if (!(*opts.alpha > 0.0) || *opts.alpha > 1.0)
        throw ValidationError("problem: alpha must be in (0, 1]");
    return parse_equation_dsl(text, *opts.alpha, opts.bindings);
}

std::string serialize_problem(const Problem& p) {
    std::string out = "{\"alpha\": " + fmt17(p.op.alpha) + ", \"operator\": [";
    for (size_t i = 0; i < p.op.coeffs.size(); ++i) {
        if (i) out += ", ";
        cplx c = p.op.coeffs[i];
        if (c.imag() == 0.0)
            out += fmt17(c.real());
        else
            out += "{\"re\": " + fmt17(c.real()) + ", \"im\": " + fmt17(c.imag()) + "}";
    }
    out += "], \"forcing\": [";
    for (size_t i = 0; i < p.forcing.terms.size(); ++i) {
        const FracTerm& t = p.forcing.terms[i];
        if (i) out += ", ";
        out += "{\"coeff\": ";
        if (t.coeff.imag() == 0.0)
            out += fmt17(t.coeff.real());
        else
            out += "{\"re\": " + fmt17(t.coeff.real()) + ", \"im\": " + fmt17(t.coeff.imag()) + "}";
        out += ", \"k\": " + std::to_string(t.k) + ", \"rate_re\": " + fmt17(t.a.real()) +
               ", \"rate_im\": " + fmt17(t.a.imag()) + "}";
    }
    out += "]}";
    return out;
}

std::string serialize_solution(const Solution& sol) {
    std::string out = "{\n  \"alpha\": " + fmt17(sol.alpha) + ",\n  \"complementary\": [";
    for (size_t i = 0; i < sol.complementary.size(); ++i) {
        if (i) out += ", ";
        out += term_sum_json(sol.complementary[i]);
    }
    out += "],\n  \"particular\": " + term_sum_json(sol.particular);
    out += ",\n  \"rendered\": \"" + json_escape(render_solution_closed_form(sol)) + "\"\n}\n";
    return out;
}

std::string render_solution_closed_form(const Solution& sol) {
    std::string out = "y = ";
    int label = 1;
    bool first = true;
    auto emit = [&](const std::string& body) {
        if (!first) out += " + ";
        first = false;
        out += "A_" + std::to_string(label++) + "*" + body;
    };

    std::vector<bool> used(sol.roots.roots.size(), false);
    for (size_t i = 0; i < sol.roots.roots.size(); ++i) {
        if (used[i]) continue;
        const RootInfo& r = sol.roots.roots[i];
        double scale = std::max(1.0, std::abs(r.value));
        if (std::abs(r.value.imag()) <= 1e-9 * scale) {
            used[i] = true;
            for (int k = 0; k < r.multiplicity; ++k)
                emit(atom_disp(k, cplx(r.value.real(), 0.0)));
            continue;
        }
        // Look for the conjugate partner of a genuinely complex root.
        size_t partner = sol.roots.roots.size();
        for (size_t j = i + 1; j < sol.roots.roots.size(); ++j) {
            if (used[j]) continue;
            const RootInfo& s = sol.roots.roots[j];
            if (s.multiplicity == r.multiplicity &&
                std::abs(s.value - std::conj(r.value)) <= 1e-9 * scale) {
                partner = j;
                break;
            }
        }
        if (partner == sol.roots.roots.size()) {
            used[i] = true;
            for (int k = 0; k < r.multiplicity; ++k) emit(atom_disp(k, r.value));
            continue;
        }
        used[i] = used[partner] = true;
        double damp = r.value.real();
        double freq = std::abs(r.value.imag());
        for (int k = 0; k < r.multiplicity; ++k) {
            emit(trig_disp(k, damp, freq, false));
            emit(trig_disp(k, damp, freq, true));
        }
    }

    std::string pi = particular_disp(sol.particular);
    if (!pi.empty()) {
        if (!first) out += " + ";
        first = false;
        out += pi;
    }
    if (first) out += "0";
    return out;
}

std::string solution_text(const Solution& sol) {
    std::string out = "order: a = " + fmt_disp(sol.alpha) + "\n";
    out += "characteristic roots:";
    if (sol.roots.roots.empty()) out += " none";
    for (size_t i = 0; i < sol.roots.roots.size(); ++i) {
        const RootInfo& r = sol.roots.roots[i];
        out += std::string(i ? "," : "") + " " + complex_disp(r.value);
        if (r.multiplicity > 1) out += " (multiplicity " + std::to_string(r.multiplicity) + ")";
    }
    out += "\n" + render_solution_closed_form(sol) + "\n";
    return out;
}

void write_samples_csv(std::ostream& out, const SampledFunction& s) {
    out << "t,y\n";
    for (size_t i = 0; i < s.values.size(); ++i)
        out << fmt17(i * s.h) << "," << fmt17(s.values[i]) << "\n";
}

SampledFunction read_samples_csv(std::istream& in) {
    std::vector<double> ts, vs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (lineno == 1 && !std::isdigit(line[pos]) && line[pos] != '-' && line[pos] != '+' &&
            line[pos] != '.')
            continue;  // header row
        size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("samples: expected 't,value'", lineno, 1);
        try {
            size_t used = 0;
            std::string left = line.substr(0, comma);
            std::string right = line.substr(comma + 1);
            double t = std::stod(left, &used);
            double v = std::stod(right);
            (void)used;
            ts.push_back(t);
            vs.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("samples: malformed number", lineno, 1);
        }
    }
    if (ts.size() < 2) throw ValidationError("samples: need at least two rows");
    if (std::abs(ts[0]) > 1e-12) throw ValidationError("samples: grid must start at t = 0");
    double h = ts[1] - ts[0];
    if (!(h > 0.0)) throw ValidationError("samples: grid must increase");
    for (size_t i = 1; i < ts.size(); ++i) {
        double expect = static_cast<double>(i) * h;
        if (std::abs(ts[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw ValidationError("samples: grid is not uniform");
    }
    SampledFunction s;
    s.h = h;
    s.values = std::move(vs);
    return s;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string piece = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
        size_t b = piece.find_first_not_of(" \t");
        if (b == std::string::npos) throw ParseError("expected a number in list");
        try {
            size_t used = 0;
            out.push_back(std::stod(piece, &used));
            while (used < piece.size() && std::isspace(static_cast<unsigned char>(piece[used])))
                ++used;
            if (used != piece.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError("malformed number in list: '" + piece + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ParseError("empty list");
    return out;
}

}  // namespace fracsol

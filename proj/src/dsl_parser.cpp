#include <cctype>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracsol/errors.hpp"
#include "fracsol/problem_io.hpp"

namespace fracsol {
namespace {

using cplx = std::complex<double>;

enum class Tok {
    number,
    ident,
    kw_d,
    kw_y,
    kw_t,
    kw_e,
    kw_cos,
    kw_sin,
    kw_a,
    plus,
    minus,
    star,
    caret,
    lparen,
    rparen,
    equals,
    end
};

struct Token {
    Tok type = Tok::end;
    double value = 0.0;    // number payload
    std::string text;      // ident payload / original spelling
    int line = 1;
    int col = 1;
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::number: return "number";
        case Tok::ident: return "identifier";
        case Tok::kw_d: return "'D'";
        case Tok::kw_y: return "'y'";
        case Tok::kw_t: return "'t'";
        case Tok::kw_e: return "'E'";
        case Tok::kw_cos: return "'cos'";
        case Tok::kw_sin: return "'sin'";
        case Tok::kw_a: return "'a'";
        case Tok::plus: return "'+'";
        case Tok::minus: return "'-'";
        case Tok::star: return "'*'";
        case Tok::caret: return "'^'";
        case Tok::lparen: return "'('";
        case Tok::rparen: return "')'";
        case Tok::equals: return "'='";
        case Tok::end: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](Tok t, double v, const std::string& s, int l, int c) {
        out.push_back({t, v, s, l, c});
    };
    while (i < text.size()) {
        char ch = text[i];
        if (ch == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++col;
            ++i;
            continue;
        }
        int tl = line, tc = col;
        if (std::isdigit(static_cast<unsigned char>(ch)) ||
            (ch == '.' && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            const char* start = text.c_str() + i;
            char* endp = nullptr;
            double v = std::strtod(start, &endp);
            size_t len = static_cast<size_t>(endp - start);
            push(Tok::number, v, text.substr(i, len), tl, tc);
            i += len;
            col += static_cast<int>(len);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_'))
                ++j;
            std::string word = text.substr(i, j - i);
            Tok t = Tok::ident;
            if (word == "D") t = Tok::kw_d;
            else if (word == "y") t = Tok::kw_y;
            else if (word == "t") t = Tok::kw_t;
            else if (word == "E") t = Tok::kw_e;
            else if (word == "cos") t = Tok::kw_cos;
            else if (word == "sin") t = Tok::kw_sin;
            else if (word == "a") t = Tok::kw_a;
            push(t, 0.0, word, tl, tc);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        Tok t;
        switch (ch) {
            case '+': t = Tok::plus; break;
            case '-': t = Tok::minus; break;
            case '*': t = Tok::star; break;
            case '^': t = Tok::caret; break;
            case '(': t = Tok::lparen; break;
            case ')': t = Tok::rparen; break;
            case '=': t = Tok::equals; break;
            default:
                throw ParseError(std::string("unexpected character '") + ch + "'", tl, tc);
        }
        push(t, 0.0, std::string(1, ch), tl, tc);
        ++col;
        ++i;
    }
    out.push_back({Tok::end, 0.0, "", line, col});
    return out;
}

// Everything one parsed term can carry before it is classified as an
// operator term (has y) or a forcing atom (no y).
struct TermParts {
    double coeff = 1.0;
    bool has_y = false;
    bool has_d = false;
    int d_order = 0;
    bool has_power = false;
    int k = 0;
    enum class Mode { none, ml, cos, sin } mode = Mode::none;
    double rate = 0.0;
    int line = 1, col = 1;
};

class Parser {
  public:
    Parser(const std::string& text, double alpha, const std::map<std::string, double>& bindings)
        : toks_(lex(text)), alpha_(alpha), bindings_(bindings) {
        for (const auto& kv : bindings) {
            if (kv.first == "a" || kv.first == "D" || kv.first == "y" || kv.first == "t" ||
                kv.first == "E" || kv.first == "cos" || kv.first == "sin")
                throw ValidationError("binding name '" + kv.first + "' is reserved");
        }
    }

    Problem parse() {
        Problem p;
        p.op.alpha = alpha_;
        p.forcing.alpha = alpha_;
        std::map<int, double> op_coeffs;
        parse_side(true, op_coeffs, p.forcing);
        expect(Tok::equals);
        parse_side(false, op_coeffs, p.forcing);
        if (peek().type != Tok::end) fail("'+', '-', or end of input");

        if (op_coeffs.empty()) throw ValidationError("equation has no y terms");
        int n = op_coeffs.rbegin()->first;
        p.op.coeffs.assign(n + 1, 0.0);
        for (const auto& kv : op_coeffs) p.op.coeffs[kv.first] = kv.second;
        if (std::abs(p.op.coeffs.back()) == 0.0)
            throw ValidationError("leading operator coefficient cancels to zero");
        return p;
    }

  private:
    const Token& peek(int ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        throw ParseError("expected " + expected + ", got " + tok_name(t.type) +
                             (t.text.empty() ? "" : " '" + t.text + "'"),
                         t.line, t.col);
    }

    Token expect(Tok type) {
        if (peek().type != type) fail(tok_name(type));
        return take();
    }

    bool starts_factor(Tok t) const {
        switch (t) {
            case Tok::number:
            case Tok::ident:
            case Tok::kw_d:
            case Tok::kw_y:
            case Tok::kw_t:
            case Tok::kw_e:
            case Tok::kw_cos:
            case Tok::kw_sin:
                return true;
            default:
                return false;
        }
    }

    double bound_value(const Token& t) const {
        auto it = bindings_.find(t.text);
        if (it == bindings_.end())
            throw ParseError("unbound identifier '" + t.text + "' (use --bind " + t.text +
                                 "=<value>)",
                             t.line, t.col);
        return it->second;
    }

    // Exponent written in units of the order symbol: a | N | Na | (Na).
    // A bare N is an absolute power converted to N/alpha when integral.
    int order_exponent(const char* what) {
        bool paren = false;
        if (peek().type == Tok::lparen) {
            paren = true;
            take();
        }
        int k;
        if (peek().type == Tok::kw_a) {
            take();
            k = 1;
        } else if (peek().type == Tok::number) {
            Token num = take();
            if (peek().type == Tok::kw_a) {
                take();
                double r = std::round(num.value);
                if (std::abs(num.value - r) > 1e-9)
                    throw ValidationError(std::string(what) + ": multiplier of 'a' must be an integer");
                k = static_cast<int>(r);
            } else {
                double ratio = num.value / alpha_;
                double r = std::round(ratio);
                if (std::abs(ratio - r) > 1e-9)
                    throw ValidationError(std::string(what) + ": exponent " + num.text +
                                          " is not an integer multiple of alpha");
                k = static_cast<int>(r);
            }
        } else {
            fail("'a' or a number after '^'");
        }
        if (paren) expect(Tok::rparen);
        if (k < 0) throw ValidationError(std::string(what) + ": negative exponent");
        return k;
    }

    double signed_rate() {
        double sign = 1.0;
        while (peek().type == Tok::plus || peek().type == Tok::minus) {
            if (take().type == Tok::minus) sign = -sign;
        }
        if (peek().type == Tok::number) return sign * take().value;
        if (peek().type == Tok::ident) return sign * bound_value(take());
        fail("a number or bound identifier");
    }

    void factor(TermParts& parts) {
        const Token& t = peek();
        switch (t.type) {
            case Tok::number: {
                Token num = take();
                double v = num.value;
                if (peek().type == Tok::caret) {
                    take();
                    Token e = expect(Tok::number);
                    v = std::pow(v, e.value);
                }
                parts.coeff *= v;
                return;
            }
            case Tok::ident: {
                Token id = take();
                double v = bound_value(id);
                if (peek().type == Tok::caret) {
                    take();
                    Token e = expect(Tok::number);
                    v = std::pow(v, e.value);
                }
                parts.coeff *= v;
                return;
            }
            case Tok::kw_y:
                take();
                if (parts.has_y) throw ParseError("repeated 'y' in one term", t.line, t.col);
                parts.has_y = true;
                return;
            case Tok::kw_d: {
                take();
                if (parts.has_d) throw ParseError("repeated 'D' in one term", t.line, t.col);
                parts.has_d = true;
                parts.d_order = 1;
                if (peek().type == Tok::caret) {
                    take();
                    parts.d_order = order_exponent("derivative");
                }
                return;
            }
            case Tok::kw_t: {
                take();
                if (parts.has_power)
                    throw ParseError("repeated 't' factor in one term", t.line, t.col);
                parts.has_power = true;
                parts.k = 1;
                if (peek().type == Tok::caret) {
                    take();
                    parts.k = order_exponent("power");
                }
                return;
            }
            case Tok::kw_e:
            case Tok::kw_cos:
            case Tok::kw_sin: {
                Token kw = take();
                if (parts.mode != TermParts::Mode::none)
                    throw ParseError("more than one mode factor in one term", t.line, t.col);
                expect(Tok::lparen);
                parts.rate = signed_rate();
                expect(Tok::rparen);
                parts.mode = kw.type == Tok::kw_e     ? TermParts::Mode::ml
                             : kw.type == Tok::kw_cos ? TermParts::Mode::cos
                                                      : TermParts::Mode::sin;
                return;
            }
            default:
                fail("a coefficient, 'D', 'y', 't', 'E', 'cos', or 'sin'");
        }
    }

    TermParts term() {
        TermParts parts;
        parts.line = peek().line;
        parts.col = peek().col;
        factor(parts);
        while (true) {
            if (peek().type == Tok::star) {
                take();
                if (!starts_factor(peek().type)) fail("a factor after '*'");
                factor(parts);
                continue;
            }
            if (starts_factor(peek().type)) {
                factor(parts);
                continue;
            }
            break;
        }
        return parts;
    }

    void parse_side(bool lhs, std::map<int, double>& op_coeffs, TermSum& forcing) {
        double sign = 1.0;
        if (peek().type == Tok::plus || peek().type == Tok::minus) {
            if (take().type == Tok::minus) sign = -1.0;
        }
        while (true) {
            TermParts parts = term();
            classify(lhs, sign * parts.coeff, parts, op_coeffs, forcing);
            if (peek().type == Tok::plus || peek().type == Tok::minus) {
                sign = take().type == Tok::minus ? -1.0 : 1.0;
                continue;
            }
            break;
        }
    }

    void classify(bool lhs, double coeff, const TermParts& parts,
                  std::map<int, double>& op_coeffs, TermSum& forcing) {
        if (lhs) {
            if (!parts.has_y)
                throw ParseError("left-hand term must contain 'y'", parts.line, parts.col);
            if (parts.has_power || parts.mode != TermParts::Mode::none)
                throw ParseError("forcing factors belong right of '='", parts.line, parts.col);
            op_coeffs[parts.has_d ? parts.d_order : 0] += coeff;
            return;
        }
        if (parts.has_y || parts.has_d)
            throw ParseError("'y' and 'D' belong left of '='", parts.line, parts.col);
        int k = parts.has_power ? parts.k : 0;
        switch (parts.mode) {
            case TermParts::Mode::none:
                forcing.terms.push_back({coeff, k, 0.0});
                return;
            case TermParts::Mode::ml:
                forcing.terms.push_back({coeff, k, parts.rate});
                return;
            case TermParts::Mode::cos:
                forcing.terms.push_back({0.5 * coeff, k, cplx(0.0, parts.rate)});
                forcing.terms.push_back({0.5 * coeff, k, cplx(0.0, -parts.rate)});
                return;
            case TermParts::Mode::sin:
                forcing.terms.push_back({cplx(0.0, -0.5) * coeff, k, cplx(0.0, parts.rate)});
                forcing.terms.push_back({cplx(0.0, 0.5) * coeff, k, cplx(0.0, -parts.rate)});
                return;
        }
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    double alpha_;
    std::map<std::string, double> bindings_;
};

}  // namespace

Problem parse_equation_dsl(const std::string& text, double alpha,
                           const std::map<std::string, double>& bindings) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw ValidationError("problem: alpha must be in (0, 1]");
    return Parser(text, alpha, bindings).parse();
}

}  // namespace fracsol

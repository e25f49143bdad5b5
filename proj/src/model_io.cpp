#include "loopspace/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace loopspace {

// ------------------------------------------------------------------- Poly

namespace {

using Powers = std::vector<std::pair<std::string, int>>;

// Koszul sign of merging two name-sorted odd/even power lists, by the same
// transposition count as in the algebra core, with names as the order.
int merge_sign(const Powers& a, const Powers& b, const std::map<std::string, int>& degrees) {
    int parity = 0;
    for (const auto& [an, ae] : a) {
        if (degrees.at(an) % 2 == 0)
            continue;
        for (const auto& [bn, be] : b) {
            if (degrees.at(bn) % 2 == 0)
                continue;
            if (an > bn)
                parity += ae * be;
        }
    }
    return parity % 2 == 0 ? 1 : -1;
}

}  // namespace

Poly normalize(Poly p) {
    std::map<Powers, Rational> combined;
    for (auto& term : p) {
        std::sort(term.powers.begin(), term.powers.end());
        Powers merged;
        for (const auto& [name, exp] : term.powers) {
            if (exp == 0)
                continue;
            if (!merged.empty() && merged.back().first == name)
                merged.back().second += exp;
            else
                merged.emplace_back(name, exp);
        }
        combined[merged] += term.coefficient;
    }
    Poly out;
    for (auto& [powers, coeff] : combined)
        if (coeff != 0)
            out.push_back({coeff, powers});
    return out;
}

std::string poly_str(const Poly& p) {
    if (p.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& term : p) {
        Rational c = term.coefficient;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0)
                c = -c;
        }
        first = false;
        std::string factors;
        for (const auto& [name, exp] : term.powers) {
            if (!factors.empty())
                factors += "*";
            factors += name;
            if (exp > 1)
                factors += "^" + std::to_string(exp);
        }
        if (factors.empty()) {
            os << to_string(c);
        } else {
            if (c != 1)
                os << to_string(c) << "*";
            os << factors;
        }
    }
    return os.str();
}

int poly_degree(const Poly& p, const std::map<std::string, int>& degrees) {
    int degree = -1;
    for (const auto& term : p) {
        int d = 0;
        for (const auto& [name, exp] : term.powers)
            d += degrees.at(name) * exp;
        if (degree < 0)
            degree = d;
        else if (degree != d)
            throw AlgebraError("inhomogeneous polynomial");
    }
    return degree;
}

Element to_element(const Poly& p, const AlgebraPtr& algebra) {
    Element out = Element::zero(algebra);
    for (const auto& term : p) {
        ExpVec exps(static_cast<size_t>(algebra->generator_count()), 0);
        for (const auto& [name, exp] : term.powers) {
            int i = algebra->index_of(name);
            if (i < 0)
                throw ConstructionError("polynomial names unknown generator " + name);
            exps[static_cast<size_t>(i)] += exp;
        }
        out += monomial_element(algebra, exps, term.coefficient);
    }
    return out;
}

int ModelDescription::degree_of(const std::string& generator_name) const {
    for (const auto& [name, degree] : generators)
        if (name == generator_name)
            return degree;
    throw ConstructionError("unknown generator " + generator_name);
}

// ----------------------------------------------------------------- parser

namespace {

enum class Tok { name, number, colon, equals, caret, star, plus, minus, lparen, rparen, end };

struct Token {
    Tok kind;
    std::string text;
    long long value = 0;
    int column;
};

std::vector<Token> tokenize(const std::string& line, int line_no) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        int col = static_cast<int>(i) + 1;
        if (c == '#')
            break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j])))
                ++j;
            std::string text = line.substr(i, j - i);
            if (text.size() > 9)
                throw ParseError(line_no, col, "number too large");
            out.push_back({Tok::number, text, std::stoll(text), col});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) ||
                                       line[j] == '_'))
                ++j;
            out.push_back({Tok::name, line.substr(i, j - i), 0, col});
            i = j;
            continue;
        }
        Tok kind;
        switch (c) {
            case ':': kind = Tok::colon; break;
            case '=': kind = Tok::equals; break;
            case '^': kind = Tok::caret; break;
            case '*': kind = Tok::star; break;
            case '+': kind = Tok::plus; break;
            case '-': kind = Tok::minus; break;
            case '(': kind = Tok::lparen; break;
            case ')': kind = Tok::rparen; break;
            default:
                throw ParseError(line_no, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back({kind, std::string(1, c), 0, col});
        ++i;
    }
    out.push_back({Tok::end, "", 0, static_cast<int>(line.size()) + 1});
    return out;
}

// Recursive-descent polynomial parser over one line's tokens, carrying the
// declared degrees for graded normalization and the odd-exponent check.
class PolyParser {
  public:
    PolyParser(const std::vector<Token>& tokens, size_t pos, int line,
               const std::map<std::string, int>& degrees)
        : tokens_(tokens), pos_(pos), line_(line), degrees_(degrees) {}

    Poly parse() {
        Poly p = expression();
        return p;
    }

    size_t position() const { return pos_; }

  private:
    const std::vector<Token>& tokens_;
    size_t pos_;
    int line_;
    const std::map<std::string, int>& degrees_;

    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_, peek().column, msg);
    }

    bool starts_factor(Tok k) const {
        return k == Tok::name || k == Tok::number || k == Tok::lparen;
    }

    Poly expression() {
        bool negate = false;
        if (peek().kind == Tok::minus) {
            take();
            negate = true;
        }
        Poly p = term();
        if (negate)
            p = scale(p, Rational(-1));
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            bool minus = take().kind == Tok::minus;
            Poly rhs = term();
            if (minus)
                rhs = scale(rhs, Rational(-1));
            p.insert(p.end(), rhs.begin(), rhs.end());
            p = normalize(std::move(p));
        }
        return normalize(std::move(p));
    }

    Poly term() {
        Poly p = factor();
        while (starts_factor(peek().kind) || peek().kind == Tok::star) {
            if (peek().kind == Tok::star) {
                take();
                if (!starts_factor(peek().kind))
                    fail("expected a factor after '*'");
            }
            p = multiply(p, factor());
        }
        return p;
    }

    Poly factor() {
        Poly base = atom();
        if (peek().kind == Tok::caret) {
            take();
            if (peek().kind != Tok::number)
                fail("expected an integer exponent after '^'");
            const Token& e = take();
            if (e.value > 64)
                throw ParseError(line_, e.column, "exponent too large");
            // A written power of an odd generator beyond 1 is rejected
            // rather than silently normalized to zero.
            if (base.size() == 1 && base[0].powers.size() == 1 && e.value > 1) {
                const std::string& name = base[0].powers[0].first;
                auto it = degrees_.find(name);
                if (it != degrees_.end() && it->second % 2 != 0)
                    throw ParseError(line_, e.column,
                                     "odd generator " + name + " squares to zero");
            }
            Poly out = {{Rational(1), {}}};
            for (long long i = 0; i < e.value; ++i)
                out = multiply(out, base);
            return out;
        }
        return base;
    }

    Poly atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::number:
                take();
                return {{Rational(t.value), {}}};
            case Tok::name: {
                take();
                if (!degrees_.count(t.text))
                    throw ParseError(line_, t.column, "undeclared generator " + t.text);
                return {{Rational(1), {{t.text, 1}}}};
            }
            case Tok::lparen: {
                take();
                Poly p = expression();
                if (peek().kind != Tok::rparen)
                    fail("expected ')'");
                take();
                return p;
            }
            default:
                fail("expected a number, generator, or '('");
        }
    }

    static Poly scale(Poly p, const Rational& c) {
        for (auto& term : p)
            term.coefficient *= c;
        return p;
    }

    Poly multiply(const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& ta : a) {
            for (const auto& tb : b) {
                // Odd squares vanish.
                bool dead = false;
                for (const auto& [bn, be] : tb.powers) {
                    int total = be;
                    for (const auto& [an, ae] : ta.powers)
                        if (an == bn)
                            total += ae;
                    if (degrees_.at(bn) % 2 != 0 && total > 1) {
                        dead = true;
                        break;
                    }
                }
                if (dead)
                    continue;
                PolyTerm term;
                term.coefficient = ta.coefficient * tb.coefficient;
                if (merge_sign(ta.powers, tb.powers, degrees_) < 0)
                    term.coefficient = -term.coefficient;
                term.powers = ta.powers;
                term.powers.insert(term.powers.end(), tb.powers.begin(), tb.powers.end());
                out.push_back(std::move(term));
            }
        }
        return normalize(std::move(out));
    }
};

}  // namespace

ModelDescription parse_model(std::string_view text) {
    ModelDescription model;
    std::map<std::string, int> degrees;
    bool have_dimension = false;
    bool have_fundamental = false;
    int fundamental_line = 0, fundamental_col = 1;

    std::istringstream input{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        std::vector<Token> tokens = tokenize(line, line_no);
        if (tokens[0].kind == Tok::end)
            continue;
        if (tokens[0].kind != Tok::name)
            throw ParseError(line_no, tokens[0].column, "expected a declaration keyword");
        const std::string& keyword = tokens[0].text;

        auto expect = [&](size_t i, Tok kind, const char* what) -> const Token& {
            if (tokens[i].kind != kind)
                throw ParseError(line_no, tokens[i].column, std::string("expected ") + what);
            return tokens[i];
        };
        auto expect_end = [&](size_t i) {
            if (tokens[i].kind != Tok::end)
                throw ParseError(line_no, tokens[i].column, "trailing input after declaration");
        };

        if (keyword == "generator") {
            const Token& name = expect(1, Tok::name, "a generator name");
            expect(2, Tok::colon, "':'");
            const Token& degree = expect(3, Tok::number, "a degree");
            expect_end(4);
            if (degree.value < 1)
                throw ParseError(line_no, degree.column, "generator degree must be positive");
            if (degrees.count(name.text))
                throw ParseError(line_no, name.column, "duplicate generator " + name.text);
            degrees[name.text] = static_cast<int>(degree.value);
            model.generators.emplace_back(name.text, static_cast<int>(degree.value));
        } else if (keyword == "d") {
            const Token& name = expect(1, Tok::name, "a generator name");
            expect(2, Tok::equals, "'='");
            if (!degrees.count(name.text))
                throw ParseError(line_no, name.column, "undeclared generator " + name.text);
            if (model.differentials.count(name.text))
                throw ParseError(line_no, name.column,
                                 "duplicate differential for " + name.text);
            PolyParser parser(tokens, 3, line_no, degrees);
            Poly p = parser.parse();
            expect_end(parser.position());
            int target = degrees.at(name.text) + 1;
            for (const auto& term : p) {
                int d = 0;
                for (const auto& [n, e] : term.powers)
                    d += degrees.at(n) * e;
                if (d != target)
                    throw ParseError(line_no, tokens[3].column,
                                     "differential of " + name.text +
                                         " is not homogeneous of degree " +
                                         std::to_string(target));
            }
            if (!p.empty())
                model.differentials[name.text] = std::move(p);
        } else if (keyword == "relation") {
            const Token& name = expect(1, Tok::name, "a generator name");
            expect(2, Tok::caret, "'^'");
            const Token& bound = expect(3, Tok::number, "a power");
            expect(4, Tok::equals, "'='");
            const Token& zero = expect(5, Tok::number, "0");
            expect_end(6);
            if (zero.value != 0)
                throw ParseError(line_no, zero.column, "relations must equate a power to 0");
            if (!degrees.count(name.text))
                throw ParseError(line_no, name.column, "undeclared generator " + name.text);
            if (degrees.at(name.text) % 2 != 0)
                throw ParseError(line_no, name.column,
                                 "relations are limited to even generators");
            if (bound.value < 2)
                throw ParseError(line_no, bound.column, "relation power must be at least 2");
            if (model.truncations.count(name.text))
                throw ParseError(line_no, name.column, "duplicate relation for " + name.text);
            model.truncations[name.text] = static_cast<int>(bound.value);
        } else if (keyword == "dimension") {
            const Token& value = expect(1, Tok::number, "a dimension");
            expect_end(2);
            if (have_dimension)
                throw ParseError(line_no, tokens[0].column, "duplicate dimension declaration");
            if (value.value < 1)
                throw ParseError(line_no, value.column, "dimension must be positive");
            model.dimension = static_cast<int>(value.value);
            have_dimension = true;
        } else if (keyword == "fundamental") {
            if (have_fundamental)
                throw ParseError(line_no, tokens[0].column, "duplicate fundamental declaration");
            size_t i = 1;
            std::map<std::string, int> powers;
            while (tokens[i].kind != Tok::end) {
                if (tokens[i].kind == Tok::star) {
                    ++i;
                    continue;
                }
                const Token& name = expect(i, Tok::name, "a generator name");
                ++i;
                if (!degrees.count(name.text))
                    throw ParseError(line_no, name.column, "undeclared generator " + name.text);
                int exp = 1;
                if (tokens[i].kind == Tok::caret) {
                    ++i;
                    const Token& e = expect(i, Tok::number, "an integer exponent");
                    ++i;
                    if (e.value < 1 || e.value > 64)
                        throw ParseError(line_no, e.column, "bad exponent");
                    exp = static_cast<int>(e.value);
                    if (degrees.at(name.text) % 2 != 0 && exp > 1)
                        throw ParseError(line_no, e.column,
                                         "odd generator " + name.text + " squares to zero");
                }
                powers[name.text] += exp;
            }
            if (powers.empty())
                throw ParseError(line_no, tokens[1].column, "empty fundamental monomial");
            model.fundamental.assign(powers.begin(), powers.end());
            have_fundamental = true;
            fundamental_line = line_no;
            fundamental_col = tokens[1].column;
        } else {
            throw ParseError(line_no, tokens[0].column, "unknown declaration '" + keyword + "'");
        }
    }

    if (model.generators.empty())
        throw ParseError(line_no + 1, 1, "missing generator declarations");
    if (!have_dimension)
        throw ParseError(line_no + 1, 1, "missing dimension declaration");
    if (!have_fundamental)
        throw ParseError(line_no + 1, 1, "missing fundamental declaration");
    int fundamental_degree = 0;
    for (const auto& [name, exp] : model.fundamental)
        fundamental_degree += degrees.at(name) * exp;
    if (fundamental_degree != model.dimension)
        throw ParseError(fundamental_line, fundamental_col,
                         "fundamental monomial has degree " +
                             std::to_string(fundamental_degree) + ", expected the dimension " +
                             std::to_string(model.dimension));
    return model;
}

std::string print_model(const ModelDescription& m) {
    std::ostringstream os;
    for (const auto& [name, degree] : m.generators)
        os << "generator " << name << " : " << degree << "\n";
    for (const auto& [name, degree] : m.generators) {
        auto it = m.differentials.find(name);
        if (it != m.differentials.end())
            os << "d " << name << " = " << poly_str(it->second) << "\n";
    }
    for (const auto& [name, degree] : m.generators) {
        auto it = m.truncations.find(name);
        if (it != m.truncations.end())
            os << "relation " << name << "^" << it->second << " = 0\n";
    }
    os << "dimension " << m.dimension << "\n";
    std::string fundamental;
    for (const auto& [name, exp] : m.fundamental) {
        if (!fundamental.empty())
            fundamental += "*";
        fundamental += name;
        if (exp > 1)
            fundamental += "^" + std::to_string(exp);
    }
    os << "fundamental " << fundamental << "\n";
    return os.str();
}

}  // namespace loopspace

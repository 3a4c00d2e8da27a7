#pragma once

// Scalar generating symbols on [-pi, pi]: expression tree, parser, printer
// and pointwise evaluation.
//
// Grammar (whitespace insignificant):
//
//   expr    := term (('+' | '-') term)*
//   term    := item (('*' | '/') item)*
//   item    := 'ind' '(' const ',' const ')' | unary
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | 't' | 'pi' | '(' expr ')'
//            | ('cos' | 'sin') '(' m '*' 't' ')' | 'abs' '(' expr ')' | 'sqrt' '(' expr ')'
//
// `ind(lo,hi)` multiplies everything to its left in the same term by the
// indicator of [lo, hi]. Constant subexpressions are folded while parsing.

#include <bts/error.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace bts {

struct SymbolNode;

/// Immutable expression tree of a real-valued symbol f(theta).
class SymbolExpr {
public:
    explicit SymbolExpr(std::shared_ptr<const SymbolNode> node) : node_(std::move(node)) {}

    const SymbolNode& node() const { return *node_; }

    static SymbolExpr constant(double value);
    static SymbolExpr theta();
    static SymbolExpr cos_harmonic(int harmonic);
    static SymbolExpr sin_harmonic(int harmonic);
    static SymbolExpr abs(SymbolExpr child);
    static SymbolExpr pow(SymbolExpr base, double exponent);
    static SymbolExpr sum(std::vector<SymbolExpr> terms);
    static SymbolExpr product(std::vector<SymbolExpr> factors);
    static SymbolExpr scale(double factor, SymbolExpr child);
    static SymbolExpr indicator(double lo, double hi, SymbolExpr child);

    /// Value of a Const node, nullopt for every other node kind.
    std::optional<double> constant_value() const;

    template <class Node>
    const Node* as() const;

private:
    std::shared_ptr<const SymbolNode> node_;
};

namespace expr {

struct Const {
    double value;
};
struct Theta {};
struct Cos {
    int harmonic;
};
struct Sin {
    int harmonic;
};
struct Abs {
    SymbolExpr child;
};
struct Pow {
    SymbolExpr base;
    double exponent;
};
struct Sum {
    std::vector<SymbolExpr> terms;
};
struct Prod {
    std::vector<SymbolExpr> factors;
};
struct Scale {
    double factor;
    SymbolExpr child;
};
/// child(theta) on [lo, hi], zero elsewhere.
struct Indicator {
    double lo;
    double hi;
    SymbolExpr child;
};

}  // namespace expr

struct SymbolNode {
    std::variant<expr::Const, expr::Theta, expr::Cos, expr::Sin, expr::Abs, expr::Pow, expr::Sum,
                 expr::Prod, expr::Scale, expr::Indicator>
        value;
};

template <class Node>
const Node* SymbolExpr::as() const {
    return std::get_if<Node>(&node_->value);
}

inline SymbolExpr SymbolExpr::constant(double value) {
    return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{expr::Const{value}}));
}
inline SymbolExpr SymbolExpr::theta() {
    return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{expr::Theta{}}));
}
inline SymbolExpr SymbolExpr::cos_harmonic(int harmonic) {
    return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{expr::Cos{harmonic}}));
}
inline SymbolExpr SymbolExpr::sin_harmonic(int harmonic) {
    return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{expr::Sin{harmonic}}));
}
inline SymbolExpr SymbolExpr::abs(SymbolExpr child) {
    return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{expr::Abs{std::move(child)}}));
}
inline SymbolExpr SymbolExpr::pow(SymbolExpr base, double exponent) {
    return SymbolExpr(
        std::make_shared<const SymbolNode>(SymbolNode{expr::Pow{std::move(base), exponent}}));
}
inline SymbolExpr SymbolExpr::sum(std::vector<SymbolExpr> terms) {
    return SymbolExpr(std::make_shared<const SymbolNode>(SymbolNode{expr::Sum{std::move(terms)}}));
}
inline SymbolExpr SymbolExpr::product(std::vector<SymbolExpr> factors) {
    return SymbolExpr(
        std::make_shared<const SymbolNode>(SymbolNode{expr::Prod{std::move(factors)}}));
}
inline SymbolExpr SymbolExpr::scale(double factor, SymbolExpr child) {
    return SymbolExpr(
        std::make_shared<const SymbolNode>(SymbolNode{expr::Scale{factor, std::move(child)}}));
}
inline SymbolExpr SymbolExpr::indicator(double lo, double hi, SymbolExpr child) {
    return SymbolExpr(std::make_shared<const SymbolNode>(
        SymbolNode{expr::Indicator{lo, hi, std::move(child)}}));
}

inline std::optional<double> SymbolExpr::constant_value() const {
    if (const auto* c = as<expr::Const>()) return c->value;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Structural equality

bool operator==(const SymbolExpr& a, const SymbolExpr& b);

namespace detail {

inline bool same_children(const std::vector<SymbolExpr>& a, const std::vector<SymbolExpr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

}  // namespace detail

inline bool operator==(const SymbolExpr& a, const SymbolExpr& b) {
    const auto& va = a.node().value;
    const auto& vb = b.node().value;
    if (va.index() != vb.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(vb);
            if constexpr (std::is_same_v<T, expr::Const>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, expr::Theta>) {
                return true;
            } else if constexpr (std::is_same_v<T, expr::Cos> || std::is_same_v<T, expr::Sin>) {
                return x.harmonic == y.harmonic;
            } else if constexpr (std::is_same_v<T, expr::Abs>) {
                return x.child == y.child;
            } else if constexpr (std::is_same_v<T, expr::Pow>) {
                return x.exponent == y.exponent && x.base == y.base;
            } else if constexpr (std::is_same_v<T, expr::Sum>) {
                return detail::same_children(x.terms, y.terms);
            } else if constexpr (std::is_same_v<T, expr::Prod>) {
                return detail::same_children(x.factors, y.factors);
            } else if constexpr (std::is_same_v<T, expr::Scale>) {
                return x.factor == y.factor && x.child == y.child;
            } else {
                return x.lo == y.lo && x.hi == y.hi && x.child == y.child;
            }
        },
        va);
}

inline bool operator!=(const SymbolExpr& a, const SymbolExpr& b) { return !(a == b); }

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

inline double eval_node(const SymbolExpr& e, double theta) {
    return std::visit(
        [&](const auto& x) -> double {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, expr::Const>) {
                return x.value;
            } else if constexpr (std::is_same_v<T, expr::Theta>) {
                return theta;
            } else if constexpr (std::is_same_v<T, expr::Cos>) {
                return std::cos(x.harmonic * theta);
            } else if constexpr (std::is_same_v<T, expr::Sin>) {
                return std::sin(x.harmonic * theta);
            } else if constexpr (std::is_same_v<T, expr::Abs>) {
                return std::abs(eval_node(x.child, theta));
            } else if constexpr (std::is_same_v<T, expr::Pow>) {
                const double base = eval_node(x.base, theta);
                if (base < 0.0 && !is_integer(x.exponent))
                    throw EvaluationError("fractional power of negative value " +
                                          std::to_string(base) + " at theta=" +
                                          std::to_string(theta));
                const double v = std::pow(base, x.exponent);
                if (!std::isfinite(v))
                    throw EvaluationError("non-finite power at theta=" + std::to_string(theta));
                return v;
            } else if constexpr (std::is_same_v<T, expr::Sum>) {
                double s = 0.0;
                for (const auto& t : x.terms) s += eval_node(t, theta);
                return s;
            } else if constexpr (std::is_same_v<T, expr::Prod>) {
                double p = 1.0;
                for (const auto& f : x.factors) p *= eval_node(f, theta);
                return p;
            } else if constexpr (std::is_same_v<T, expr::Scale>) {
                return x.factor * eval_node(x.child, theta);
            } else {
                return (theta >= x.lo && theta <= x.hi) ? eval_node(x.child, theta) : 0.0;
            }
        },
        e.node().value);
}

}  // namespace detail

/// Evaluates f(theta) for theta in [-pi, pi].
inline double eval_symbol(const SymbolExpr& e, double theta) {
    constexpr double pi = std::numbers::pi;
    if (!(std::abs(theta) <= pi + 1e-12))
        throw ValidationError("theta=" + std::to_string(theta) + " outside [-pi, pi]");
    const double v = detail::eval_node(e, theta);
    if (!std::isfinite(v)) throw EvaluationError("non-finite value at theta=" + std::to_string(theta));
    return v;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

enum class PrintContext { top, sum_term, indicator_operand, factor, power_base };

inline void print_node(const SymbolExpr& e, PrintContext ctx, std::string& out);

inline void print_parenthesized(const SymbolExpr& e, std::string& out) {
    out += '(';
    print_node(e, PrintContext::top, out);
    out += ')';
}

inline void print_harmonic(const char* name, int m, std::string& out) {
    out += name;
    out += '(';
    if (m != 1) {
        out += std::to_string(m);
        out += '*';
    }
    out += "t)";
}

inline void print_node(const SymbolExpr& e, PrintContext ctx, std::string& out) {
    using C = PrintContext;
    const bool tight = ctx == C::factor || ctx == C::power_base;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, expr::Const>) {
                const std::string s = format_number(x.value);
                if (tight) {
                    out += '(' + s + ')';
                } else {
                    out += s;
                }
            } else if constexpr (std::is_same_v<T, expr::Theta>) {
                out += 't';
            } else if constexpr (std::is_same_v<T, expr::Cos>) {
                print_harmonic("cos", x.harmonic, out);
            } else if constexpr (std::is_same_v<T, expr::Sin>) {
                print_harmonic("sin", x.harmonic, out);
            } else if constexpr (std::is_same_v<T, expr::Abs>) {
                out += "abs";
                print_parenthesized(x.child, out);
            } else if constexpr (std::is_same_v<T, expr::Pow>) {
                if (x.exponent == 0.5) {
                    out += "sqrt";
                    print_parenthesized(x.base, out);
                } else if (ctx == C::power_base) {
                    print_parenthesized(e, out);
                } else {
                    print_node(x.base, C::power_base, out);
                    out += '^';
                    out += format_number(x.exponent);
                }
            } else if constexpr (std::is_same_v<T, expr::Sum>) {
                if (ctx != C::top) {
                    print_parenthesized(e, out);
                    return;
                }
                for (std::size_t i = 0; i < x.terms.size(); ++i) {
                    if (i) out += " + ";
                    print_node(x.terms[i], C::sum_term, out);
                }
            } else if constexpr (std::is_same_v<T, expr::Prod>) {
                if (tight) {
                    print_parenthesized(e, out);
                    return;
                }
                for (std::size_t i = 0; i < x.factors.size(); ++i) {
                    if (i) out += '*';
                    print_node(x.factors[i], C::factor, out);
                }
            } else if constexpr (std::is_same_v<T, expr::Scale>) {
                if (tight) {
                    print_parenthesized(e, out);
                    return;
                }
                out += format_number(x.factor);
                out += '*';
                if (x.child.template as<expr::Prod>()) {
                    print_node(x.child, C::sum_term, out);
                } else {
                    print_node(x.child, C::factor, out);
                }
            } else {
                if (tight) {
                    print_parenthesized(e, out);
                    return;
                }
                print_node(x.child, C::indicator_operand, out);
                out += "*ind(" + format_number(x.lo) + "," + format_number(x.hi) + ")";
            }
        },
        e.node().value);
}

}  // namespace detail

/// Renders an expression in the parser's grammar; parse(print(e)) == e for
/// trees the parser itself produces.
inline std::string print_symbol(const SymbolExpr& e) {
    std::string out;
    detail::print_node(e, detail::PrintContext::top, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline SymbolExpr negate(const SymbolExpr& e) {
    if (auto c = e.constant_value()) return SymbolExpr::constant(-*c);
    if (const auto* s = e.as<expr::Scale>()) {
        if (-s->factor == 1.0) return s->child;
        return SymbolExpr::scale(-s->factor, s->child);
    }
    return SymbolExpr::scale(-1.0, e);
}

class SymbolParser {
public:
    explicit SymbolParser(std::string_view text) : text_(text) {}

    SymbolExpr parse() {
        SymbolExpr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }
    [[noreturn]] void fail_at(const std::string& message, std::size_t at) const {
        throw SymbolSyntaxError(message, at);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::string_view peek_identifier() {
        skip_ws();
        std::size_t end = pos_;
        while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
        return text_.substr(pos_, end - pos_);
    }

    SymbolExpr parse_expr() {
        std::vector<SymbolExpr> terms;
        terms.push_back(parse_term());
        for (;;) {
            if (accept('+')) {
                terms.push_back(parse_term());
            } else if (accept('-')) {
                terms.push_back(negate(parse_term()));
            } else {
                break;
            }
        }
        if (terms.size() == 1) return terms.front();
        bool all_constant = true;
        double total = 0.0;
        for (const auto& t : terms) {
            if (auto c = t.constant_value()) {
                total += *c;
            } else {
                all_constant = false;
            }
        }
        if (all_constant) return SymbolExpr::constant(total);
        return SymbolExpr::sum(std::move(terms));
    }

    static SymbolExpr finish_term(double coefficient, std::vector<SymbolExpr> nodes) {
        if (nodes.empty()) return SymbolExpr::constant(coefficient);
        SymbolExpr body = nodes.size() == 1 ? nodes.front() : SymbolExpr::product(std::move(nodes));
        if (coefficient == 1.0) return body;
        return SymbolExpr::scale(coefficient, std::move(body));
    }

    SymbolExpr parse_term() {
        double coefficient = 1.0;
        std::vector<SymbolExpr> nodes;
        bool divide = false;
        for (bool first = true;; first = false) {
            if (!first) {
                if (accept('*')) {
                    divide = false;
                } else if (peek('/')) {
                    ++pos_;
                    divide = true;
                } else {
                    break;
                }
            }
            if (peek_identifier() == "ind") {
                const std::size_t at = pos_;
                if (divide) fail_at("cannot divide by an indicator", at);
                auto [lo, hi] = parse_indicator_bounds();
                SymbolExpr operand = finish_term(coefficient, std::move(nodes));
                nodes.clear();
                coefficient = 1.0;
                nodes.push_back(SymbolExpr::indicator(lo, hi, std::move(operand)));
                continue;
            }
            const std::size_t at = pos_;
            SymbolExpr item = parse_unary();
            if (auto c = item.constant_value()) {
                if (divide) {
                    if (*c == 0.0) fail_at("division by zero", at);
                    coefficient /= *c;
                } else {
                    coefficient *= *c;
                }
                continue;
            }
            if (const auto* s = item.as<expr::Scale>()) {
                coefficient = divide ? coefficient / s->factor : coefficient * s->factor;
                item = s->child;
            }
            nodes.push_back(divide ? SymbolExpr::pow(item, -1.0) : item);
        }
        return finish_term(coefficient, std::move(nodes));
    }

    std::pair<double, double> parse_indicator_bounds() {
        const std::size_t at = pos_;
        pos_ += 3;
        expect('(');
        const std::size_t lo_at = pos_;
        const double lo = parse_constant("indicator bound");
        expect(',');
        const std::size_t hi_at = pos_;
        const double hi = parse_constant("indicator bound");
        expect(')');
        constexpr double pi = std::numbers::pi;
        if (lo < -pi || lo > pi) fail_at("indicator bound outside [-pi, pi]", lo_at);
        if (hi < -pi || hi > pi) fail_at("indicator bound outside [-pi, pi]", hi_at);
        if (lo > hi) fail_at("indicator bounds out of order (lo > hi)", at);
        return {lo, hi};
    }

    double parse_constant(const char* what) {
        skip_ws();
        const std::size_t at = pos_;
        SymbolExpr e = parse_expr();
        auto c = e.constant_value();
        if (!c) fail_at(std::string(what) + " must be a constant expression", at);
        return *c;
    }

    SymbolExpr parse_unary() {
        if (accept('-')) return negate(parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    SymbolExpr parse_power() {
        SymbolExpr base = parse_primary();
        if (!accept('^')) return base;
        skip_ws();
        const std::size_t at = pos_;
        SymbolExpr exponent = parse_unary();
        auto e = exponent.constant_value();
        if (!e) fail_at("exponent must be a constant expression", at);
        if (auto b = base.constant_value()) {
            if (*b < 0.0 && !is_integer(*e)) fail_at("fractional power of a negative constant", at);
            const double v = std::pow(*b, *e);
            if (!std::isfinite(v)) fail_at("non-finite constant power", at);
            return SymbolExpr::constant(v);
        }
        return SymbolExpr::pow(std::move(base), *e);
    }

    SymbolExpr parse_number() {
        const std::size_t start = pos_;
        std::size_t end = pos_;
        auto digits = [&] {
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
        };
        digits();
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            digits();
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t exp = end + 1;
            if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
            if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
                end = exp;
                digits();
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + end, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + end) fail_at("malformed number", start);
        pos_ = end;
        return SymbolExpr::constant(value);
    }

    SymbolExpr parse_call_argument() {
        expect('(');
        SymbolExpr arg = parse_expr();
        expect(')');
        return arg;
    }

    SymbolExpr parse_harmonic(bool is_cos) {
        expect('(');
        skip_ws();
        const std::size_t at = pos_;
        SymbolExpr arg = parse_expr();
        expect(')');
        double multiplier = 0.0;
        if (arg.as<expr::Theta>()) {
            multiplier = 1.0;
        } else if (const auto* s = arg.as<expr::Scale>(); s && s->child.as<expr::Theta>()) {
            multiplier = s->factor;
        } else {
            fail_at("harmonic argument must be an integer multiple of t", at);
        }
        if (!is_integer(multiplier)) fail_at("non-integer harmonic multiplier", at);
        if (multiplier == 0.0) fail_at("harmonic multiplier must be nonzero", at);
        if (std::abs(multiplier) > 1e6) fail_at("harmonic multiplier too large", at);
        const int m = static_cast<int>(std::abs(multiplier));
        if (is_cos) return SymbolExpr::cos_harmonic(m);
        if (multiplier < 0) return SymbolExpr::scale(-1.0, SymbolExpr::sin_harmonic(m));
        return SymbolExpr::sin_harmonic(m);
    }

    SymbolExpr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (c == '(') {
            ++pos_;
            SymbolExpr inner = parse_expr();
            expect(')');
            return inner;
        }
        const std::size_t at = pos_;
        const std::string_view id = peek_identifier();
        if (id.empty()) fail("unexpected character '" + std::string(1, c) + "'");
        pos_ += id.size();
        if (id == "t") return SymbolExpr::theta();
        if (id == "pi") return SymbolExpr::constant(std::numbers::pi);
        if (id == "cos") return parse_harmonic(true);
        if (id == "sin") return parse_harmonic(false);
        if (id == "abs") {
            SymbolExpr arg = parse_call_argument();
            if (auto v = arg.constant_value()) return SymbolExpr::constant(std::abs(*v));
            return SymbolExpr::abs(std::move(arg));
        }
        if (id == "sqrt") {
            skip_ws();
            const std::size_t arg_at = pos_;
            SymbolExpr arg = parse_call_argument();
            if (auto v = arg.constant_value()) {
                if (*v < 0.0) fail_at("sqrt of a negative constant", arg_at);
                return SymbolExpr::constant(std::sqrt(*v));
            }
            return SymbolExpr::pow(std::move(arg), 0.5);
        }
        if (id == "ind") fail_at("ind(lo,hi) must follow a factor or start a term", at);
        fail_at("unknown identifier '" + std::string(id) + "'", at);
    }
};

}  // namespace detail

/// Parses a symbol expression; throws SymbolSyntaxError with the byte offset.
inline SymbolExpr parse_symbol(std::string_view text) { return detail::SymbolParser(text).parse(); }

/// True when the expression contains an indicator node.
inline bool has_indicator(const SymbolExpr& e) {
    return std::visit(
        [](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, expr::Indicator>) {
                return true;
            } else if constexpr (std::is_same_v<T, expr::Abs> || std::is_same_v<T, expr::Scale>) {
                return has_indicator(x.child);
            } else if constexpr (std::is_same_v<T, expr::Pow>) {
                return has_indicator(x.base);
            } else if constexpr (std::is_same_v<T, expr::Sum>) {
                for (const auto& t : x.terms)
                    if (has_indicator(t)) return true;
                return false;
            } else if constexpr (std::is_same_v<T, expr::Prod>) {
                for (const auto& f : x.factors)
                    if (has_indicator(f)) return true;
                return false;
            } else {
                return false;
            }
        },
        e.node().value);
}

}  // namespace bts

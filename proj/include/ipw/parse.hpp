#pragma once

#include <cctype>
#include <string>

#include "ipw/poly.hpp"

namespace ipw {

/// Syntax error with the 0-based position in the input text.
struct ParseError : std::runtime_error {
    ParseError(std::size_t pos, const std::string& what)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

namespace detail {

class PolyParser {
public:
    PolyParser(std::string_view text, ContextPtr ctx) : text_(text), ctx_(std::move(ctx)) {}

    Poly parse() {
        Poly p = expression();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
        return p;
    }

private:
    // expression := ['+'|'-'] term (('+'|'-') term)*
    Poly expression() {
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = (take() == '-');
        Poly acc = term();
        if (neg) acc = -acc;
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '+' || c == '-') {
                take();
                Poly t = term();
                acc = (c == '+') ? acc + t : acc - t;
            } else {
                return acc;
            }
        }
    }

    // term := factor ('*' factor)*
    Poly term() {
        Poly acc = factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                take();
                acc = acc * factor();
            } else {
                return acc;
            }
        }
    }

    // factor := primary ['^' integer]
    Poly factor() {
        Poly base = primary();
        skip_ws();
        if (peek() == '^') {
            take();
            skip_ws();
            std::size_t at = pos_;
            if (peek() == '-') throw ParseError(at, "negative exponent");
            unsigned long k = parse_uint();
            if (k > ctx_->exponent_cap()) throw ParseError(at, "exponent exceeds cap");
            return base.pow(static_cast<unsigned>(k));
        }
        return base;
    }

    // primary := number | name | '(' expression ')'
    Poly primary() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            take();
            Poly p = expression();
            skip_ws();
            if (peek() != ')') throw ParseError(pos_, "expected ')'");
            take();
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        throw ParseError(pos_, c == '\0' ? "unexpected end of input" : "unexpected character");
    }

    Poly number() {
        Integer num = parse_integer();
        skip_ws();
        if (peek() == '/') {
            take();
            skip_ws();
            std::size_t at = pos_;
            Integer den = parse_integer();
            if (den == 0) throw ParseError(at, "zero denominator");
            return Poly::constant(ctx_, Rational(num, den));
        }
        return Poly::constant(ctx_, Rational(num));
    }

    Poly name() {
        std::size_t at = pos_;
        std::string id;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') id += take();
        auto idx = ctx_->find(id);
        if (!idx) throw ParseError(at, "unknown variable '" + id + "'");
        return Poly::variable(ctx_, *idx);
    }

    Integer parse_integer() {
        std::size_t at = pos_;
        std::string digits;
        while (std::isdigit(static_cast<unsigned char>(peek()))) digits += take();
        if (digits.empty()) throw ParseError(at, "expected number");
        return Integer(digits);
    }

    unsigned long parse_uint() {
        Integer v = parse_integer();
        return v.convert_to<unsigned long>();
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char take() { return text_[pos_++]; }

    std::string_view text_;
    ContextPtr ctx_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parse `+ - * ^`, integer/rational literals, declared variable names and
/// parentheses into a canonical Poly. print-then-parse is the identity.
inline Poly parse_poly(std::string_view text, const ContextPtr& ctx) {
    return detail::PolyParser(text, ctx).parse();
}

} // namespace ipw

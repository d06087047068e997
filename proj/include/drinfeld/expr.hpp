#pragma once
#include "drinfeld/errors.hpp"

#include <cctype>
#include <functional>
#include <optional>
#include <string>

namespace drinfeld {

// Hooks that give meaning to the tokens of a small arithmetic grammar:
//   expr := term (('+'|'-') term)* ; term := unary (('*'|'/'| juxtaposition) unary)*
//   unary := ('+'|'-') unary | atom ('^' ['-'] digits)? ; atom := number | name | '(' expr ')'
template <class R>
struct ExprRing {
    std::function<R(long long)> integer;
    std::function<std::optional<R>(const std::string&)> variable;
    std::function<R(const R&, const R&)> add, sub, mul, div;
    std::function<R(const R&)> neg;
    std::function<R(const R&, long long)> power;
};

template <class R>
class ExprParser {
public:
    ExprParser(const std::string& s, const ExprRing<R>& ring, std::size_t line = 0, std::size_t col0 = 0)
        : s_(s), ring_(ring), line_(line), col0_(col0) {}

    R parse() {
        skip();
        if (pos_ >= s_.size()) fail("empty expression");
        R r = expr();
        skip();
        if (pos_ < s_.size()) fail(std::string("unexpected character '") + s_[pos_] + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& m) const { throw ParseError(m, line_, col0_ + pos_ + 1); }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool starts_atom() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return c == '(' || std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }
    R expr() {
        R acc = term();
        for (;;) {
            if (peek('+')) {
                ++pos_;
                acc = ring_.add(acc, term());
            } else if (peek('-')) {
                ++pos_;
                acc = ring_.sub(acc, term());
            } else {
                return acc;
            }
        }
    }
    R term() {
        R acc = unary();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                acc = ring_.mul(acc, unary());
            } else if (peek('/')) {
                ++pos_;
                std::size_t at = pos_;
                R d = unary();
                try {
                    acc = ring_.div(acc, d);
                } catch (const ParseError&) {
                    throw;
                } catch (const std::exception& e) {
                    pos_ = at;
                    fail(e.what());
                }
            } else if (starts_atom()) {
                acc = ring_.mul(acc, unary());
            } else {
                return acc;
            }
        }
    }
    R unary() {
        if (peek('-')) {
            ++pos_;
            return ring_.neg(unary());
        }
        if (peek('+')) {
            ++pos_;
            return unary();
        }
        R a = atom();
        if (peek('^')) {
            ++pos_;
            skip();
            bool negexp = false;
            if (pos_ < s_.size() && s_[pos_] == '-') {
                negexp = true;
                ++pos_;
            }
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected exponent");
            long long n = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                n = n * 10 + (s_[pos_] - '0');
                if (n > 1000000) fail("exponent too large");
                ++pos_;
            }
            std::size_t at = pos_;
            try {
                a = ring_.power(a, negexp ? -n : n);
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception& e) {
                pos_ = at;
                fail(e.what());
            }
        }
        return a;
    }
    R atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            R r = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long long n = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                n = n * 10 + (s_[pos_] - '0');
                if (n > 1000000000000000LL) fail("integer literal too large");
                ++pos_;
            }
            return ring_.integer(n);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(b, pos_ - b);
            auto v = ring_.variable(name);
            if (!v) {
                pos_ = b;
                fail("unknown symbol '" + name + "'");
            }
            return *v;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    const ExprRing<R>& ring_;
    std::size_t line_, col0_;
    std::size_t pos_ = 0;
};

template <class R>
R parse_expr(const std::string& s, const ExprRing<R>& ring, std::size_t line = 0, std::size_t col0 = 0) {
    return ExprParser<R>(s, ring, line, col0).parse();
}

}  // namespace drinfeld

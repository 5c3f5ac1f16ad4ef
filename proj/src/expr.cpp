#include "zetacorr/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "zetacorr/errors.hpp"

namespace zetacorr {

namespace {

// Recursive descent over
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
class Parser {
public:
    Parser(std::string_view s, double T) : s_(s), T_(T) {}

    double parse() {
        const double v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    double T_;

    [[noreturn]] void fail(const std::string& why) const {
        throw ConfigError("formula \"" + std::string(s_) + "\": " + why + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double expr() {
        double v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }

    double term() {
        double v = unary();
        for (;;) {
            if (eat('*'))
                v *= unary();
            else if (eat('/'))
                v /= unary();
            else
                return v;
        }
    }

    double unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    double power() {
        const double base = atom();
        if (eat('^')) return std::pow(base, unary());  // right associative
        return base;
    }

    double atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            const double v = expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (ec != std::errc()) fail("bad number");
            pos_ = static_cast<std::size_t>(ptr - s_.data());
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string_view name = s_.substr(start, pos_ - start);
            if (name == "T") return T_;
            if (name == "pi") return std::numbers::pi;
            if (name == "e") return std::numbers::e;
            if (!eat('(')) fail("unknown name '" + std::string(name) + "'");
            const double arg = expr();
            if (!eat(')')) fail("missing ')'");
            if (name == "log") return std::log(arg);
            if (name == "exp") return std::exp(arg);
            if (name == "sqrt") return std::sqrt(arg);
            if (name == "abs") return std::abs(arg);
            if (name == "loglog") return std::log(std::log(arg));
            fail("unknown function '" + std::string(name) + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace

double evaluate_formula(std::string_view text, double T) {
    const double v = Parser(text, T).parse();
    if (!std::isfinite(v)) throw ConfigError("formula \"" + std::string(text) + "\" is not finite at T = " + std::to_string(T));
    return v;
}

}  // namespace zetacorr

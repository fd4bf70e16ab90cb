#include "kahlab/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "kahlab/errors.hpp"

namespace kahlab {

namespace {

enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

}  // namespace

struct Expression::Node {
    Kind kind = Kind::Number;
    double number = 0.0;
    int variable = 0;
    Func func = Func::Sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_number(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Number;
    n->number = v;
    return n;
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

bool has_variable(const Expression::Node& n) {
    if (n.kind == Kind::Variable) return true;
    if (n.lhs && has_variable(*n.lhs)) return true;
    if (n.rhs && has_variable(*n.rhs)) return true;
    return false;
}

template <typename T>
T apply(Func f, const T& u) {
    using std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt, std::tan,
        std::tanh;
    switch (f) {
        case Func::Sin: return sin(u);
        case Func::Cos: return cos(u);
        case Func::Tan: return tan(u);
        case Func::Exp: return exp(u);
        case Func::Log: return log(u);
        case Func::Sqrt: return sqrt(u);
        case Func::Sinh: return sinh(u);
        case Func::Cosh: return cosh(u);
        case Func::Tanh: return tanh(u);
    }
    return u;
}

template <typename T>
T evaluate(const Expression::Node& n, const std::array<T, 4>& p) {
    using std::pow;
    switch (n.kind) {
        case Kind::Number: return T(n.number);
        case Kind::Variable: return p[static_cast<std::size_t>(n.variable)];
        case Kind::Negate: return -evaluate(*n.lhs, p);
        case Kind::Add: return evaluate(*n.lhs, p) + evaluate(*n.rhs, p);
        case Kind::Sub: return evaluate(*n.lhs, p) - evaluate(*n.rhs, p);
        case Kind::Mul: return evaluate(*n.lhs, p) * evaluate(*n.rhs, p);
        case Kind::Div: return evaluate(*n.lhs, p) / evaluate(*n.rhs, p);
        case Kind::Pow: return pow(evaluate(*n.lhs, p), n.rhs->number);
        case Kind::Call: return apply(n.func, evaluate(*n.lhs, p));
    }
    return T(0.0);
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr root = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ExpressionError("expression error at column " + std::to_string(pos_ + 1) + ": " +
                                  msg + " in '" + std::string(text_) + "'",
                              pos_);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(Kind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = make_binary(Kind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(Kind::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make_binary(Kind::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::Negate;
            n->lhs = unary();
            return n;
        }
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (!accept('^')) return base;
        const std::size_t at = pos_;
        NodePtr exponent = unary();
        if (has_variable(*exponent)) {
            pos_ = at;
            fail("exponent must be a numeric constant");
        }
        const double k = evaluate<double>(*exponent, {0.0, 0.0, 0.0, 0.0});
        return make_binary(Kind::Pow, base, make_number(k));
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expression();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        const std::string rest(text_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        return make_number(v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        if (name == "pi") return make_number(kPi);
        if (name.size() == 2 && name[0] == 'p' && name[1] >= '1' && name[1] <= '4') {
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::Variable;
            n->variable = name[1] - '1';
            return n;
        }
        static const std::pair<const char*, Func> table[] = {
            {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
            {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
            {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"tanh", Func::Tanh},
        };
        for (const auto& [fname, f] : table) {
            if (name == fname) {
                if (!accept('(')) fail("expected '(' after " + name);
                auto n = std::make_shared<Expression::Node>();
                n->kind = Kind::Call;
                n->func = f;
                n->lhs = expression();
                if (!accept(')')) fail("expected ')'");
                return n;
            }
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
    Parser parser(text);
    return Expression(parser.parse(), std::string(text));
}

double Expression::operator()(const Vec4& p) const {
    return evaluate<double>(*root_, {p[0], p[1], p[2], p[3]});
}

Jet2 Expression::jet(const Vec4& p) const {
    const std::array<Jet2, 4> vars = {Jet2::variable(p[0], 0), Jet2::variable(p[1], 1),
                                      Jet2::variable(p[2], 2), Jet2::variable(p[3], 3)};
    return evaluate<Jet2>(*root_, vars);
}

}  // namespace kahlab

#include "magneto/expr.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <vector>

namespace magneto {
namespace detail {

enum class Op { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Fun };

struct ExprNode {
    Op op;
    double value = 0.0;          // Num
    std::string name;            // Var / Fun
    double (*fn)(double) = nullptr;
    std::shared_ptr<const ExprNode> a, b;
};

namespace {

double safe_asin(double x) { return std::asin(x); }

const std::map<std::string, double (*)(double)>& function_table() {
    static const std::map<std::string, double (*)(double)> table = {
        {"sin", static_cast<double (*)(double)>(std::sin)},
        {"cos", static_cast<double (*)(double)>(std::cos)},
        {"tan", static_cast<double (*)(double)>(std::tan)},
        {"exp", static_cast<double (*)(double)>(std::exp)},
        {"log", static_cast<double (*)(double)>(std::log)},
        {"ln", static_cast<double (*)(double)>(std::log)},
        {"sqrt", static_cast<double (*)(double)>(std::sqrt)},
        {"abs", static_cast<double (*)(double)>(std::fabs)},
        {"asin", safe_asin},
        {"arcsin", safe_asin},
        {"acos", static_cast<double (*)(double)>(std::acos)},
        {"arccos", static_cast<double (*)(double)>(std::acos)},
        {"atan", static_cast<double (*)(double)>(std::atan)},
        {"arctan", static_cast<double (*)(double)>(std::atan)},
    };
    return table;
}

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto node = std::make_shared<ExprNode>();
    node->op = op;
    node->a = std::move(a);
    node->b = std::move(b);
    return node;
}

class Parser {
public:
    Parser(const std::string& text, std::set<std::string>& vars)
        : text_(text), vars_(vars) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    const std::string& text_;
    std::set<std::string>& vars_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression parse error at position " +
                          std::to_string(pos_) + ": " + what + " in \"" + text_ + "\"");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (accept('+')) e = make(Op::Add, e, term());
            else if (accept('-')) e = make(Op::Sub, e, term());
            else return e;
        }
    }

    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            if (accept('*')) e = make(Op::Mul, e, unary());
            else if (accept('/')) e = make(Op::Div, e, unary());
            else return e;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make(Op::Pow, base, unary());  // right associative
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        fail("unexpected character");
    }

    NodePtr number() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // not an exponent
            }
        }
        auto node = std::make_shared<ExprNode>();
        node->op = Op::Num;
        try {
            node->value = std::stod(text_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            fail("malformed number");
        }
        return node;
    }

    NodePtr ident() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (peek() == '(') {
            auto it = function_table().find(name);
            if (it == function_table().end()) fail("unknown function '" + name + "'");
            expect('(');
            NodePtr arg = expr();
            expect(')');
            auto node = std::make_shared<ExprNode>();
            node->op = Op::Fun;
            node->name = name;
            node->fn = it->second;
            node->a = arg;
            return node;
        }
        auto node = std::make_shared<ExprNode>();
        if (name == "pi") {
            node->op = Op::Num;
            node->value = pi;
            return node;
        }
        if (name == "e") {
            node->op = Op::Num;
            node->value = std::exp(1.0);
            return node;
        }
        if (name != "r" && name != "q1" && name != "q2" && name != "n" && name != "s")
            fail("unknown identifier '" + name + "'");
        node->op = Op::Var;
        node->name = name;
        vars_.insert(name);
        return node;
    }
};

double eval_node(const ExprNode& node, const ExprEnv& env) {
    switch (node.op) {
        case Op::Num: return node.value;
        case Op::Var:
            if (node.name == "r") return env.r;
            if (node.name == "q1") return env.q1;
            if (node.name == "q2") return env.q2;
            if (node.name == "n") return env.n;
            return env.s;
        case Op::Add: return eval_node(*node.a, env) + eval_node(*node.b, env);
        case Op::Sub: return eval_node(*node.a, env) - eval_node(*node.b, env);
        case Op::Mul: return eval_node(*node.a, env) * eval_node(*node.b, env);
        case Op::Div: return eval_node(*node.a, env) / eval_node(*node.b, env);
        case Op::Pow: return std::pow(eval_node(*node.a, env), eval_node(*node.b, env));
        case Op::Neg: return -eval_node(*node.a, env);
        case Op::Fun: return node.fn(eval_node(*node.a, env));
    }
    return 0.0;
}

}  // namespace
}  // namespace detail

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    detail::Parser parser(text, e.vars_);
    e.root_ = parser.run();
    return e;
}

double Expression::eval(const ExprEnv& env) const {
    return detail::eval_node(*root_, env);
}

}  // namespace magneto

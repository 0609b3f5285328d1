#include "subweyl/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace subweyl {

namespace {

enum class Kind { Lit, Sym, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log, Sqrt };

bool is_function(Kind k) { return k >= Kind::Sin; }

const char* fn_name(Kind k) {
    switch (k) {
        case Kind::Sin: return "sin";
        case Kind::Cos: return "cos";
        case Kind::Exp: return "exp";
        case Kind::Log: return "log";
        case Kind::Sqrt: return "sqrt";
        default: return "";
    }
}

} // namespace

struct Expr::Node {
    Kind kind;
    double lit = 0.0;
    int sym = -1;
    std::string sym_name;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    Parser(std::string_view text, const SymbolTable& syms)
        : text_(text), syms_(syms) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError("syntax error at offset " + std::to_string(pos_) +
                          ": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (eat('+')) e = make(Kind::Add, e, term());
            else if (eat('-')) e = make(Kind::Sub, e, term());
            else return e;
        }
    }

    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            if (eat('*')) e = make(Kind::Mul, e, unary());
            else if (eat('/')) e = make(Kind::Div, e, unary());
            else return e;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Kind::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make(Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected '") + c + "'");
    }

    NodePtr number() {
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += size_t(end - begin);
        auto n = make(Kind::Lit);
        const_cast<Expr::Node&>(*n).lit = v;
        return n;
    }

    NodePtr identifier() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (peek() == '(') {
            Kind k;
            if (name == "sin") k = Kind::Sin;
            else if (name == "cos") k = Kind::Cos;
            else if (name == "exp") k = Kind::Exp;
            else if (name == "log") k = Kind::Log;
            else if (name == "sqrt") k = Kind::Sqrt;
            else {
                pos_ = start;
                fail("unknown function '" + name + "'");
            }
            eat('(');
            NodePtr arg = expr();
            if (!eat(')')) fail("expected ')'");
            return make(k, arg);
        }
        int id = syms_.find(name);
        if (id < 0) throw UnknownSymbol("unknown symbol '" + name + "'");
        auto n = make(Kind::Sym);
        auto& m = const_cast<Expr::Node&>(*n);
        m.sym = id;
        m.sym_name = name;
        return n;
    }

    std::string_view text_;
    const SymbolTable& syms_;
    size_t pos_ = 0;
};

// Shared evaluation over doubles or jets. The scalar concept: arithmetic
// operators plus exp/log/sqrt/sin/cos/pow with the jet domain contract.
template <class T>
T eval_node(const Expr::Node& n, std::span<const T> values);

double scalar_pow_checked(double a, double q) {
    if (double ip; std::modf(q, &ip) == 0.0) {
        double r = std::pow(a, q);
        if (!std::isfinite(r)) throw DomainError("pow overflow or zero base with negative exponent");
        return r;
    }
    if (a <= 0.0) throw DomainError("pow of non-positive base with non-integral exponent");
    return std::pow(a, q);
}

template <class T>
T eval_pow(const Expr::Node& n, std::span<const T> values) {
    // literal exponents keep integral powers of negative bases in-domain
    if (n.b->kind == Kind::Lit) {
        if constexpr (std::is_same_v<T, double>)
            return scalar_pow_checked(eval_node(*n.a, values), n.b->lit);
        else
            return pow(eval_node(*n.a, values), n.b->lit);
    }
    T base = eval_node(*n.a, values);
    T ex = eval_node(*n.b, values);
    if constexpr (std::is_same_v<T, double>) {
        if (base <= 0.0) throw DomainError("pow of non-positive base");
        return std::pow(base, ex);
    } else {
        return exp(ex * log(base));
    }
}

template <class T>
T eval_node(const Expr::Node& n, std::span<const T> values) {
    switch (n.kind) {
        case Kind::Lit:
            if constexpr (std::is_same_v<T, double>) return n.lit;
            else return Jet::constant(n.lit, values[0].seeds(), values[0].order());
        case Kind::Sym: return values[n.sym];
        case Kind::Neg: return -eval_node(*n.a, values);
        case Kind::Add: return eval_node(*n.a, values) + eval_node(*n.b, values);
        case Kind::Sub: return eval_node(*n.a, values) - eval_node(*n.b, values);
        case Kind::Mul: return eval_node(*n.a, values) * eval_node(*n.b, values);
        case Kind::Div: {
            T num = eval_node(*n.a, values);
            T den = eval_node(*n.b, values);
            if constexpr (std::is_same_v<T, double>) {
                if (den == 0.0) throw DomainError("division by zero");
                return num / den;
            } else {
                return num / den;
            }
        }
        case Kind::Pow: return eval_pow(n, values);
        case Kind::Sin: {
            if constexpr (std::is_same_v<T, double>) return std::sin(eval_node(*n.a, values));
            else return sin(eval_node(*n.a, values));
        }
        case Kind::Cos: {
            if constexpr (std::is_same_v<T, double>) return std::cos(eval_node(*n.a, values));
            else return cos(eval_node(*n.a, values));
        }
        case Kind::Exp: {
            if constexpr (std::is_same_v<T, double>) return std::exp(eval_node(*n.a, values));
            else return exp(eval_node(*n.a, values));
        }
        case Kind::Log: {
            T a = eval_node(*n.a, values);
            if constexpr (std::is_same_v<T, double>) {
                if (a <= 0.0) throw DomainError("log of non-positive argument");
                return std::log(a);
            } else {
                return log(a);
            }
        }
        case Kind::Sqrt: {
            T a = eval_node(*n.a, values);
            if constexpr (std::is_same_v<T, double>) {
                if (a < 0.0) throw DomainError("sqrt of negative argument");
                return std::sqrt(a);
            } else {
                return sqrt(a);
            }
        }
    }
    throw std::logic_error("unreachable expression kind");
}

int precedence(Kind k) {
    switch (k) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

void print_node(const Expr::Node& n, int min_prec, std::string& out) {
    int prec = precedence(n.kind);
    bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (n.kind) {
        case Kind::Lit: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n.lit);
            out += buf;
            break;
        }
        case Kind::Sym: out += n.sym_name; break;
        case Kind::Neg:
            out += '-';
            print_node(*n.a, 3, out);
            break;
        case Kind::Add:
        case Kind::Sub:
            print_node(*n.a, 1, out);
            out += (n.kind == Kind::Add) ? " + " : " - ";
            print_node(*n.b, 2, out);
            break;
        case Kind::Mul:
        case Kind::Div:
            print_node(*n.a, 2, out);
            out += (n.kind == Kind::Mul) ? "*" : "/";
            print_node(*n.b, 3, out);
            break;
        case Kind::Pow:
            print_node(*n.a, 5, out);
            out += '^';
            print_node(*n.b, 4, out);
            break;
        default:
            out += fn_name(n.kind);
            out += '(';
            print_node(*n.a, 0, out);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

bool same_node(const Expr::Node& a, const Expr::Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::Lit: return a.lit == b.lit;
        case Kind::Sym: return a.sym == b.sym;
        default: break;
    }
    if (!!a.a != !!b.a || !!a.b != !!b.b) return false;
    if (a.a && !same_node(*a.a, *b.a)) return false;
    if (a.b && !same_node(*a.b, *b.b)) return false;
    return true;
}

} // namespace

Expr Expr::parse(std::string_view text, const SymbolTable& symbols) {
    return Expr(Parser(text, symbols).run());
}

double Expr::eval(std::span<const double> values) const {
    return eval_node<double>(*root_, values);
}

Jet Expr::eval(std::span<const Jet> values) const {
    return eval_node<Jet>(*root_, values);
}

std::string Expr::str() const {
    std::string out;
    print_node(*root_, 0, out);
    return out;
}

bool Expr::same_tree(const Expr& other) const {
    return same_node(*root_, *other.root_);
}

Expr Expr::literal(double v) {
    auto n = make(Kind::Lit);
    const_cast<Node&>(*n).lit = v;
    return Expr(n);
}

Expr Expr::product(const Expr& a, const Expr& b) {
    return Expr(make(Kind::Mul, a.root_, b.root_));
}

Expr Expr::exponential(const Expr& a) {
    return Expr(make(Kind::Exp, a.root_));
}

} // namespace subweyl

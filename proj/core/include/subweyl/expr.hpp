#ifndef SUBWEYL_EXPR_HPP
#define SUBWEYL_EXPR_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subweyl/jet.hpp"

namespace subweyl {

struct SymbolTable {
    std::vector<std::string> names;

    int find(std::string_view name) const {
        for (int i = 0; i < int(names.size()); ++i)
            if (names[i] == name) return i;
        return -1;
    }
};

// Immutable scalar expression over named symbols. Grammar (whitespace free):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := primary ('^' unary)?          -- right associative
//   primary:= number | symbol | fn '(' expr ')' | '(' expr ')'
//   fn     := sin | cos | exp | log | sqrt
// '^' with a literal integral exponent is evaluated by repeated
// multiplication, so negative bases stay inside the domain.
class Expr {
public:
    Expr() = default;

    static Expr parse(std::string_view text, const SymbolTable& symbols);

    bool valid() const { return root_ != nullptr; }

    double eval(std::span<const double> values) const;
    Jet eval(std::span<const Jet> values) const;

    std::string str() const;
    bool same_tree(const Expr& other) const;

    // Programmatic construction, used by gauge transforms.
    static Expr literal(double v);
    static Expr product(const Expr& a, const Expr& b);
    static Expr exponential(const Expr& a);

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

} // namespace subweyl

#endif

#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grwcert/error.hpp"
#include "grwcert/jet.hpp"

namespace grwcert {

enum class NodeKind {
    Constant,
    Coordinate,
    Parameter,
    Neg,
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

struct Node {
    NodeKind kind;
    double constant = 0.0;  // Constant
    int index = -1;         // Coordinate / Parameter slot
    std::shared_ptr<const Node> lhs, rhs;
    std::string text;       // source span, used in diagnostics
};

/// An immutable parsed expression over a fixed list of coordinates and parameters.
class Expr {
public:
    Expr() = default;

    const Node& root() const { return *root_; }
    bool empty() const { return !root_; }
    const std::string& source() const { return source_; }
    const std::vector<std::string>& coordinates() const { return *coords_; }
    const std::vector<std::string>& parameters() const { return *params_; }
    int depth() const;
    /// True when no coordinate symbol occurs in the tree.
    bool is_coordinate_free() const;

private:
    friend Expr parse(std::string_view, const std::vector<std::string>&, const std::vector<std::string>&);

    std::shared_ptr<const Node> root_;
    std::string source_;
    std::shared_ptr<const std::vector<std::string>> coords_;
    std::shared_ptr<const std::vector<std::string>> params_;
};

/// Parse with precedence ^ > unary minus > * / > + -, all binary operators left-associative.
/// Throws SyntaxError (with byte offset) or UnknownIdentifier.
Expr parse(std::string_view text, const std::vector<std::string>& coords, const std::vector<std::string>& params = {});

/// Parameter values in the order of `Expr::parameters()`.
using ParamValues = std::span<const double>;

/// Resolve a name->value map into the positional layout of `e`; throws if a parameter is unbound.
std::vector<double> bind_parameters(const Expr& e, const std::map<std::string, double>& values);

/// Value and all partials up to total order `Order` at `point`. Throws DomainError.
template <int Order>
Jet<Order> eval_jet(const Expr& e, std::span<const double> point, ParamValues params);

extern template Jet<0> eval_jet<0>(const Expr&, std::span<const double>, ParamValues);
extern template Jet<1> eval_jet<1>(const Expr&, std::span<const double>, ParamValues);
extern template Jet<2> eval_jet<2>(const Expr&, std::span<const double>, ParamValues);
extern template Jet<3> eval_jet<3>(const Expr&, std::span<const double>, ParamValues);

Jet3 eval_jet3(const Expr& e, std::span<const double> point, const std::map<std::string, double>& params = {});

double eval_value(const Expr& e, std::span<const double> point, ParamValues params = {});

}  // namespace grwcert

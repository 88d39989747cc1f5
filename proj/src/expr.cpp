#include "grwcert/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace grwcert {

namespace {

using NodePtr = std::shared_ptr<const Node>;

const std::map<std::string_view, NodeKind>& function_table()
{
    static const std::map<std::string_view, NodeKind> table{
        {"exp", NodeKind::Exp},   {"ln", NodeKind::Ln},     {"sqrt", NodeKind::Sqrt},
        {"sin", NodeKind::Sin},   {"cos", NodeKind::Cos},   {"tan", NodeKind::Tan},
        {"sinh", NodeKind::Sinh}, {"cosh", NodeKind::Cosh}, {"tanh", NodeKind::Tanh},
    };
    return table;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool mentions_coordinate(const Node& n)
{
    if (n.kind == NodeKind::Coordinate) return true;
    return (n.lhs && mentions_coordinate(*n.lhs)) || (n.rhs && mentions_coordinate(*n.rhs));
}

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& coords, const std::vector<std::string>& params)
        : text_(text), coords_(coords), params_(params)
    {}

    NodePtr parse()
    {
        auto root = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
        return root;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr make(NodeKind kind, std::size_t begin, NodePtr lhs = nullptr, NodePtr rhs = nullptr)
    {
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        n->text = span_text(begin);
        return n;
    }

    std::string span_text(std::size_t begin) const
    {
        auto s = text_.substr(begin, pos_ - begin);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return std::string(s);
    }

    NodePtr parse_sum()
    {
        skip_ws();
        const auto begin = pos_;
        auto lhs = parse_product();
        for (;;) {
            if (accept('+'))
                lhs = binary(NodeKind::Add, begin, lhs, parse_product());
            else if (accept('-'))
                lhs = binary(NodeKind::Sub, begin, lhs, parse_product());
            else
                return lhs;
        }
    }

    NodePtr parse_product()
    {
        skip_ws();
        const auto begin = pos_;
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = binary(NodeKind::Mul, begin, lhs, parse_unary());
            else if (accept('/'))
                lhs = binary(NodeKind::Div, begin, lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodePtr binary(NodeKind kind, std::size_t begin, NodePtr lhs, NodePtr rhs)
    {
        return make(kind, begin, std::move(lhs), std::move(rhs));
    }

    NodePtr parse_unary()
    {
        skip_ws();
        const auto begin = pos_;
        if (accept('-')) return make(NodeKind::Neg, begin, parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power()
    {
        skip_ws();
        const auto begin = pos_;
        auto base = parse_primary();
        while (accept('^')) {
            skip_ws();
            const auto exp_begin = pos_;
            auto exponent = parse_exponent();
            if (mentions_coordinate(*exponent))
                throw SyntaxError("exponent must not depend on coordinates", exp_begin);
            base = make(NodeKind::Pow, begin, base, exponent);
        }
        return base;
    }

    NodePtr parse_exponent()
    {
        skip_ws();
        const auto begin = pos_;
        if (accept('-')) return make(NodeKind::Neg, begin, parse_exponent());
        if (accept('+')) return parse_exponent();
        return parse_primary();
    }

    NodePtr parse_primary()
    {
        skip_ws();
        const auto begin = pos_;
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_sum();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (is_ident_start(c)) {
            while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
            const std::string name(text_.substr(begin, pos_ - begin));
            if (accept('(')) {
                auto arg = parse_sum();
                if (!accept(')')) throw SyntaxError("expected ')'", pos_);
                const auto it = function_table().find(name);
                if (it == function_table().end()) throw UnknownIdentifier(name);
                return make(it->second, begin, arg);
            }
            if (auto it = std::find(coords_.begin(), coords_.end(), name); it != coords_.end()) {
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::Coordinate;
                n->index = static_cast<int>(it - coords_.begin());
                n->text = name;
                return n;
            }
            if (auto it = std::find(params_.begin(), params_.end(), name); it != params_.end()) {
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::Parameter;
                n->index = static_cast<int>(it - params_.begin());
                n->text = name;
                return n;
            }
            throw UnknownIdentifier(name);
        }
        throw SyntaxError("unexpected '" + std::string(1, c) + "'", pos_);
    }

    NodePtr parse_number()
    {
        const auto begin = pos_;
        auto end = pos_;
        while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) ++end;
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            auto e = end + 1;
            if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
            if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
                while (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) ++e;
                end = e;
            }
        }
        double value = 0.0;
        const auto* first = text_.data() + begin;
        const auto* last = text_.data() + end;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) throw SyntaxError("malformed number", begin);
        pos_ = end;
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Constant;
        n->constant = value;
        n->text = std::string(text_.substr(begin, end - begin));
        return n;
    }

    std::string_view text_;
    const std::vector<std::string>& coords_;
    const std::vector<std::string>& params_;
    std::size_t pos_ = 0;
};

int node_depth(const Node& n)
{
    int d = 0;
    if (n.lhs) d = std::max(d, node_depth(*n.lhs));
    if (n.rhs) d = std::max(d, node_depth(*n.rhs));
    return d + 1;
}

template <int O>
struct Evaluator {
    std::span<const double> point;
    ParamValues params;
    int dim;

    Jet<O> operator()(const Node& n) const
    {
        switch (n.kind) {
        case NodeKind::Constant:
            return Jet<O>::constant(dim, n.constant);
        case NodeKind::Coordinate:
            return Jet<O>::variable(dim, n.index, point[n.index]);
        case NodeKind::Parameter:
            if (static_cast<std::size_t>(n.index) >= params.size())
                throw DomainError("unbound parameter", n.text);
            return Jet<O>::constant(dim, params[n.index]);
        case NodeKind::Neg:
            return -(*this)(*n.lhs);
        case NodeKind::Add:
            return (*this)(*n.lhs) + (*this)(*n.rhs);
        case NodeKind::Sub:
            return (*this)(*n.lhs) - (*this)(*n.rhs);
        case NodeKind::Mul:
            return (*this)(*n.lhs) * (*this)(*n.rhs);
        case NodeKind::Div: {
            auto den = (*this)(*n.rhs);
            if (den.value() == 0.0) throw DomainError("division by zero", n.text);
            return (*this)(*n.lhs) / den;
        }
        case NodeKind::Pow: {
            auto base = (*this)(*n.lhs);
            const double a = Evaluator<0>{point, params, dim}(*n.rhs).value();
            const bool integral = a == std::round(a);
            if (!integral && base.value() <= 0.0)
                throw DomainError("non-integer power of nonpositive base", n.text);
            if (integral && a < 0.0 && base.value() == 0.0) throw DomainError("negative power of zero", n.text);
            return pow(base, a);
        }
        default:
            return unary(n);
        }
    }

    Jet<O> unary(const Node& n) const
    {
        auto arg = (*this)(*n.lhs);
        switch (n.kind) {
        case NodeKind::Exp:
            return exp(arg);
        case NodeKind::Ln:
            if (arg.value() <= 0.0) throw DomainError("logarithm of nonpositive value", n.text);
            return log(arg);
        case NodeKind::Sqrt:
            if (arg.value() <= 0.0) throw DomainError("square root of nonpositive value", n.text);
            return sqrt(arg);
        case NodeKind::Sin:
            return sin(arg);
        case NodeKind::Cos:
            return cos(arg);
        case NodeKind::Tan:
            if (std::cos(arg.value()) == 0.0) throw DomainError("tangent pole", n.text);
            return tan(arg);
        case NodeKind::Sinh:
            return sinh(arg);
        case NodeKind::Cosh:
            return cosh(arg);
        case NodeKind::Tanh:
            return tanh(arg);
        default:
            throw Error("corrupt expression tree");
        }
    }
};

}  // namespace

int Expr::depth() const { return root_ ? node_depth(*root_) : 0; }

bool Expr::is_coordinate_free() const { return !root_ || !mentions_coordinate(*root_); }

Expr parse(std::string_view text, const std::vector<std::string>& coords, const std::vector<std::string>& params)
{
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) throw SyntaxError("empty expression", 0);
    Expr e;
    e.root_ = Parser(text, coords, params).parse();
    e.source_ = std::string(text);
    e.coords_ = std::make_shared<const std::vector<std::string>>(coords);
    e.params_ = std::make_shared<const std::vector<std::string>>(params);
    return e;
}

std::vector<double> bind_parameters(const Expr& e, const std::map<std::string, double>& values)
{
    std::vector<double> out;
    out.reserve(e.parameters().size());
    for (const auto& name : e.parameters()) {
        auto it = values.find(name);
        if (it == values.end()) throw Error("parameter '" + name + "' is not bound");
        out.push_back(it->second);
    }
    return out;
}

template <int Order>
Jet<Order> eval_jet(const Expr& e, std::span<const double> point, ParamValues params)
{
    const int dim = static_cast<int>(e.coordinates().size());
    if (static_cast<int>(point.size()) != dim) throw Error("point dimension does not match expression coordinates");
    auto r = Evaluator<Order>{point, params, dim}(e.root());
    if (!std::isfinite(r.value())) throw DomainError("non-finite value", e.source());
    return r;
}

template Jet<0> eval_jet<0>(const Expr&, std::span<const double>, ParamValues);
template Jet<1> eval_jet<1>(const Expr&, std::span<const double>, ParamValues);
template Jet<2> eval_jet<2>(const Expr&, std::span<const double>, ParamValues);
template Jet<3> eval_jet<3>(const Expr&, std::span<const double>, ParamValues);

Jet3 eval_jet3(const Expr& e, std::span<const double> point, const std::map<std::string, double>& params)
{
    const auto bound = bind_parameters(e, params);
    return eval_jet<3>(e, point, bound);
}

double eval_value(const Expr& e, std::span<const double> point, ParamValues params)
{
    return eval_jet<0>(e, point, params).value();
}

}  // namespace grwcert

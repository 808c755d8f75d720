#include "frontfill/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

#include "frontfill/point.hpp"

namespace frontfill::expr {

namespace {

struct FnInfo {
  Fn fn;
  int arity;
};

const std::map<std::string, FnInfo, std::less<>>& fn_table() {
  static const std::map<std::string, FnInfo, std::less<>> table = {
      {"sin", {Fn::Sin, 1}},   {"cos", {Fn::Cos, 1}},     {"tan", {Fn::Tan, 1}},
      {"tanh", {Fn::Tanh, 1}}, {"sqrt", {Fn::Sqrt, 1}},   {"abs", {Fn::Abs, 1}},
      {"exp", {Fn::Exp, 1}},   {"min", {Fn::Min, 2}},     {"max", {Fn::Max, 2}},
      {"atan2", {Fn::Atan2, 2}}, {"arg", {Fn::Arg, 2}},   {"hypot", {Fn::Hypot, 2}},
  };
  return table;
}

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Tan: return "tan";
    case Fn::Tanh: return "tanh";
    case Fn::Sqrt: return "sqrt";
    case Fn::Abs: return "abs";
    case Fn::Exp: return "exp";
    case Fn::Min: return "min";
    case Fn::Max: return "max";
    case Fn::Atan2: return "atan2";
    case Fn::Arg: return "arg";
    case Fn::Hypot: return "hypot";
  }
  return "?";
}

class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  std::unique_ptr<Node> run() {
    auto e = parse_sum();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected token '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  std::unique_ptr<Node> parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      auto node = std::make_unique<Node>();
      node->kind = NodeKind::Binary;
      node->op = c;
      node->args.push_back(std::move(lhs));
      node->args.push_back(parse_product());
      lhs = std::move(node);
    }
  }

  std::unique_ptr<Node> parse_product() {
    auto lhs = parse_unary();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      auto node = std::make_unique<Node>();
      node->kind = NodeKind::Binary;
      node->op = c;
      node->args.push_back(std::move(lhs));
      node->args.push_back(parse_unary());
      lhs = std::move(node);
    }
  }

  // Unary minus binds looser than ^, so -x^2 is -(x^2).
  std::unique_ptr<Node> parse_unary() {
    if (eat('-')) {
      auto node = std::make_unique<Node>();
      node->kind = NodeKind::Unary;
      node->op = '-';
      node->args.push_back(parse_unary());
      return node;
    }
    return parse_power();
  }

  std::unique_ptr<Node> parse_power() {
    auto base = parse_primary();
    if (eat('^')) {
      auto node = std::make_unique<Node>();
      node->kind = NodeKind::Binary;
      node->op = '^';
      node->args.push_back(std::move(base));
      node->args.push_back(parse_unary());  // right-assoc, allows 2^-3
      return node;
    }
    return base;
  }

  std::unique_ptr<Node> parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];

    if (c == '(') {
      ++pos_;
      auto e = parse_sum();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();

    throw ParseError("unexpected token '" + std::string(1, c) + "'", pos_);
  }

  std::unique_ptr<Node> parse_number() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", pos_);
    // strtod accepts a trailing exponent marker flexibly; it cannot run
    // past the view because callers hold NUL-terminated sources.
    pos_ += static_cast<std::size_t>(end - begin);
    auto node = std::make_unique<Node>();
    node->kind = NodeKind::Number;
    node->number = value;
    return node;
  }

  std::unique_ptr<Node> parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);

    if (peek() == '(') return parse_call(name, start);

    int var = -1;
    if (name == "x") var = 0;
    else if (name == "y") var = 1;
    else if (name == "z") var = 2;
    if (var < 0) throw ParseError("unknown variable '" + std::string(name) + "'", start);
    if (var >= dim_)
      throw ParseError("variable '" + std::string(name) + "' not available in " +
                           std::to_string(dim_) + "-D",
                       start);
    auto node = std::make_unique<Node>();
    node->kind = NodeKind::Variable;
    node->var = var;
    return node;
  }

  std::unique_ptr<Node> parse_call(std::string_view name, std::size_t start) {
    auto it = fn_table().find(name);
    if (it == fn_table().end())
      throw ParseError("unknown function '" + std::string(name) + "'", start);
    eat('(');
    auto node = std::make_unique<Node>();
    node->kind = NodeKind::Call;
    node->fn = it->second.fn;
    node->args.push_back(parse_sum());
    while (eat(',')) node->args.push_back(parse_sum());
    if (!eat(')')) throw ParseError("expected ')'", pos_);
    if (static_cast<int>(node->args.size()) != it->second.arity)
      throw ParseError("function '" + std::string(name) + "' expects " +
                           std::to_string(it->second.arity) + " argument(s), got " +
                           std::to_string(node->args.size()),
                       start);
    return node;
  }
};

double call_fn(Fn fn, double a, double b) {
  switch (fn) {
    case Fn::Sin: return std::sin(a);
    case Fn::Cos: return std::cos(a);
    case Fn::Tan: return std::tan(a);
    case Fn::Tanh: return std::tanh(a);
    case Fn::Sqrt: return std::sqrt(a);
    case Fn::Abs: return std::fabs(a);
    case Fn::Exp: return std::exp(a);
    case Fn::Min: return std::fmin(a, b);
    case Fn::Max: return std::fmax(a, b);
    case Fn::Atan2: return std::atan2(a, b);
    case Fn::Arg: return planar_arg(a, b);
    case Fn::Hypot: return std::hypot(a, b);
  }
  return 0;
}

void print_node(const Node* n, std::string& out) {
  switch (n->kind) {
    case NodeKind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n->number);
      out += buf;
      return;
    }
    case NodeKind::Variable:
      out += "xyz"[n->var];
      return;
    case NodeKind::Unary:
      out += "(-";
      print_node(n->args[0].get(), out);
      out += ')';
      return;
    case NodeKind::Binary:
      out += '(';
      print_node(n->args[0].get(), out);
      out += n->op;
      print_node(n->args[1].get(), out);
      out += ')';
      return;
    case NodeKind::Call:
      out += fn_name(n->fn);
      out += '(';
      for (std::size_t i = 0; i < n->args.size(); ++i) {
        if (i) out += ',';
        print_node(n->args[i].get(), out);
      }
      out += ')';
      return;
  }
}

}  // namespace

Ast::Ast(std::unique_ptr<Node> root) : root_(std::move(root)) {
  // Flatten to post-order; evaluation then runs a small stack machine
  // instead of chasing child pointers.
  std::vector<std::pair<const Node*, bool>> walk = {{root_.get(), false}};
  std::size_t depth = 0, max_depth = 0;
  while (!walk.empty()) {
    auto [node, expanded] = walk.back();
    walk.pop_back();
    if (expanded) {
      program_.push_back(Step{node->kind, node->op, node->fn, node->var, node->number});
      depth -= node->args.size();
      max_depth = std::max(max_depth, ++depth);
      continue;
    }
    walk.emplace_back(node, true);
    for (auto it = node->args.rbegin(); it != node->args.rend(); ++it)
      walk.emplace_back(it->get(), false);
  }
  if (max_depth > kStackCap) throw ParseError("expression is too deeply nested", 0);
}

double Ast::eval(const double* coords) const {
  double stack[kStackCap];
  int sp = 0;
  for (const Step& s : program_) {
    switch (s.kind) {
      case NodeKind::Number:
        stack[sp++] = s.number;
        break;
      case NodeKind::Variable:
        stack[sp++] = coords[s.var];
        break;
      case NodeKind::Unary:
        stack[sp - 1] = -stack[sp - 1];
        break;
      case NodeKind::Binary: {
        double b = stack[--sp];
        double a = stack[sp - 1];
        switch (s.op) {
          case '+': stack[sp - 1] = a + b; break;
          case '-': stack[sp - 1] = a - b; break;
          case '*': stack[sp - 1] = a * b; break;
          case '/': stack[sp - 1] = a / b; break;
          default: stack[sp - 1] = std::pow(a, b); break;
        }
        break;
      }
      case NodeKind::Call:
        if (s.fn >= Fn::Min) {
          double b = stack[--sp];
          stack[sp - 1] = call_fn(s.fn, stack[sp - 1], b);
        } else {
          stack[sp - 1] = call_fn(s.fn, stack[sp - 1], 0);
        }
        break;
    }
  }
  return stack[0];
}

std::string Ast::print() const {
  std::string out;
  print_node(root_.get(), out);
  return out;
}

Ast parse(std::string_view src, int dim) {
  if (src.empty()) throw ParseError("empty expression", 0);
  // Keep a NUL-terminated copy so strtod stays within bounds.
  std::string owned(src);
  Parser p(owned, dim);
  return Ast(p.run());
}

}  // namespace frontfill::expr

#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace frontfill::expr {

// Syntax error with the 0-based byte offset into the source string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

enum class NodeKind { Number, Variable, Unary, Binary, Call };

// Built-in functions; Arg is arg(x, y) = atan2(y, x) with arg(0,0) = 0.
// Two-argument functions start at Min.
enum class Fn { Sin, Cos, Tan, Tanh, Sqrt, Abs, Exp, Min, Max, Atan2, Arg, Hypot };

struct Node {
  NodeKind kind;
  double number = 0;      // Number
  int var = 0;            // Variable: 0=x, 1=y, 2=z
  char op = 0;            // Unary ('-') or Binary ('+','-','*','/','^')
  Fn fn = Fn::Sin;        // Call
  std::vector<std::unique_ptr<Node>> args;
};

class Ast {
 public:
  Ast() = default;
  explicit Ast(std::unique_ptr<Node> root);

  bool valid() const { return root_ != nullptr; }

  // coords points at `dim` values laid out as x[,y[,z]]. Variables beyond
  // dim were rejected at parse time. Evaluation interprets a flattened
  // postfix form of the tree.
  double eval(const double* coords) const;

  // Prints a form that parses back to an equivalent expression.
  std::string print() const;

  const Node* root() const { return root_.get(); }

 private:
  struct Step {
    NodeKind kind;
    char op = 0;
    Fn fn = Fn::Sin;
    int var = 0;
    double number = 0;
  };
  static constexpr std::size_t kStackCap = 256;

  std::unique_ptr<Node> root_;
  std::vector<Step> program_;  // post-order
};

// Recursive-descent parser. Precedence: ^ (right assoc) > unary minus
// > *,/ > +,-. Variables outside the first `dim` of {x,y,z} are errors.
Ast parse(std::string_view src, int dim = 3);

}  // namespace frontfill::expr

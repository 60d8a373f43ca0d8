#include <cctype>
#include <charconv>
#include <string>

#include "genadapt/errors.hpp"
#include "genadapt/weight_expr.hpp"
#include "text_util.hpp"

namespace genadapt {

namespace {

constexpr int kMaxNesting = 512;

const char* op_text(Symbol s) {
  switch (s) {
    case Symbol::Add: return "+";
    case Symbol::Sub: return "-";
    case Symbol::Mul: return "*";
    case Symbol::Div: return "/";
    default: return "?";
  }
}

void format_at(std::span<const ExprNode> nodes, std::size_t& i, std::string& out) {
  const ExprNode& n = nodes[i++];
  switch (n.symbol) {
    case Symbol::Const: out += detail::shortest(n.value); return;
    case Symbol::Bandwidth: out += "bw"; return;
    case Symbol::Delay: out += "dl"; return;
    case Symbol::Utilization: out += "util"; return;
    case Symbol::Threshold: out += "threshold"; return;
    default: break;
  }
  out += '(';
  format_at(nodes, i, out);
  out += ' ';
  out += op_text(n.symbol);
  out += ' ';
  format_at(nodes, i, out);
  out += ')';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  WeightExpr run() {
    operand(0);
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return WeightExpr::from_prefix(std::move(nodes_));
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && detail::is_space(text_[pos_])) ++pos_;
  }

  void operand(int nesting) {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("expected operand", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      if (nesting >= kMaxNesting) throw ParseError("nesting too deep", pos_);
      ++pos_;
      const std::size_t op_slot = nodes_.size();
      nodes_.push_back(ExprNode{});
      operand(nesting + 1);
      skip_ws();
      nodes_[op_slot].symbol = binary_operator();
      operand(nesting + 1);
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      number();
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      identifier();
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
  }

  Symbol binary_operator() {
    if (pos_ >= text_.size()) throw ParseError("expected operator", pos_);
    switch (text_[pos_]) {
      case '+': ++pos_; return Symbol::Add;
      case '-': ++pos_; return Symbol::Sub;
      case '*': ++pos_; return Symbol::Mul;
      case '/': ++pos_; return Symbol::Div;
      default: throw ParseError("expected operator", pos_);
    }
  }

  void number() {
    double v = 0.0;
    const char* begin = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
    if (ec != std::errc{}) throw ParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(ptr - begin);
    nodes_.push_back(ExprNode{Symbol::Const, v});
  }

  void identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view word = text_.substr(start, pos_ - start);
    Symbol s;
    if (word == "bw") s = Symbol::Bandwidth;
    else if (word == "dl") s = Symbol::Delay;
    else if (word == "util") s = Symbol::Utilization;
    else if (word == "threshold") s = Symbol::Threshold;
    else throw ParseError("unknown identifier '" + std::string(word) + "'", start);
    nodes_.push_back(ExprNode{s, 0.0});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<ExprNode> nodes_;
};

}  // namespace

std::string format(const WeightExpr& expr) {
  std::string out;
  std::size_t i = 0;
  format_at(expr.nodes(), i, out);
  return out;
}

WeightExpr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace genadapt

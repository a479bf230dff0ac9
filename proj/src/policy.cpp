// Copyright 2026 The MCABE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcabe/policy.hpp"

#include <cctype>
#include <sstream>

namespace mcabe {

namespace {

[[noreturn]] void parse_fail(std::size_t pos, const std::string& what) {
  std::ostringstream oss;
  oss << "at offset " << pos << ": " << what;
  throw Error(ErrorCode::PolicyParseError, oss.str());
}

struct Token {
  enum class Kind { Ident, Int, LParen, RParen, Comma, Semi, And, Or, Thresh, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':' ||
           c == '-';
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      current_ = {Token::Kind::End, "", start};
      return;
    }
    char c = text_[pos_];
    if (c == '(') { ++pos_; current_ = {Token::Kind::LParen, "(", start}; return; }
    if (c == ')') { ++pos_; current_ = {Token::Kind::RParen, ")", start}; return; }
    if (c == ',') { ++pos_; current_ = {Token::Kind::Comma, ",", start}; return; }
    if (c == ';') { ++pos_; current_ = {Token::Kind::Semi, ";", start}; return; }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      current_ = {Token::Kind::Int, std::string(text_.substr(start, pos_ - start)), start};
      return;
    }
    if (ident_start(c)) {
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      if (word == "AND") current_ = {Token::Kind::And, word, start};
      else if (word == "OR") current_ = {Token::Kind::Or, word, start};
      else if (word == "THRESH") current_ = {Token::Kind::Thresh, word, start};
      else current_ = {Token::Kind::Ident, word, start};
      return;
    }
    parse_fail(start, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{Token::Kind::End, "", 0};
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  PolicyNode parse_policy() {
    PolicyNode n = parse_or();
    if (lex_.peek().kind != Token::Kind::End)
      parse_fail(lex_.peek().pos, "trailing input after policy");
    return n;
  }

 private:
  PolicyNode parse_or() {
    std::vector<PolicyNode> terms;
    terms.push_back(parse_and());
    while (lex_.peek().kind == Token::Kind::Or) {
      lex_.take();
      terms.push_back(parse_and());
    }
    if (terms.size() == 1) return std::move(terms.front());
    return PolicyNode::gate(1, std::move(terms));
  }

  PolicyNode parse_and() {
    std::vector<PolicyNode> terms;
    terms.push_back(parse_primary());
    while (lex_.peek().kind == Token::Kind::And) {
      lex_.take();
      terms.push_back(parse_primary());
    }
    if (terms.size() == 1) return std::move(terms.front());
    int arity = static_cast<int>(terms.size());
    return PolicyNode::gate(arity, std::move(terms));
  }

  PolicyNode parse_primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::Ident:
        return PolicyNode::leaf(t.text);
      case Token::Kind::LParen: {
        PolicyNode inner = parse_or();
        expect(Token::Kind::RParen, "expected ')'");
        return inner;
      }
      case Token::Kind::Thresh: {
        expect(Token::Kind::LParen, "expected '(' after THRESH");
        Token k = lex_.take();
        if (k.kind != Token::Kind::Int) parse_fail(k.pos, "expected threshold integer");
        long threshold = std::stol(k.text);
        expect(Token::Kind::Semi, "expected ';' after threshold");
        std::vector<PolicyNode> children;
        children.push_back(parse_or());
        while (lex_.peek().kind == Token::Kind::Comma) {
          lex_.take();
          children.push_back(parse_or());
        }
        Token close = lex_.peek();
        expect(Token::Kind::RParen, "expected ')' closing THRESH");
        if (threshold < 1 || threshold > static_cast<long>(children.size()))
          parse_fail(close.pos, "threshold out of range for gate arity");
        return PolicyNode::gate(static_cast<int>(threshold), std::move(children));
      }
      default:
        parse_fail(t.pos, "expected attribute, '(' or THRESH");
    }
  }

  void expect(Token::Kind kind, const std::string& what) {
    Token t = lex_.take();
    if (t.kind != kind) parse_fail(t.pos, what);
  }

  Lexer lex_;
};

void validate_node(const PolicyNode& n) {
  if (n.kind == PolicyNode::Kind::Leaf) {
    if (n.attribute.empty())
      throw Error(ErrorCode::InvalidArgument, "empty attribute name");
    return;
  }
  if (n.children.empty()) throw Error(ErrorCode::InvalidArgument, "empty gate");
  if (n.threshold < 1 || n.threshold > static_cast<int>(n.children.size()))
    throw Error(ErrorCode::InvalidArgument, "gate threshold out of range");
  for (const auto& c : n.children) validate_node(c);
}

void assign_ids(PolicyNode& n, int& next_id) {
  n.node_id = next_id++;
  int idx = 1;
  for (auto& c : n.children) {
    c.index = idx++;
    assign_ids(c, next_id);
  }
}

void pretty_node(const PolicyNode& n, std::string& out) {
  if (n.kind == PolicyNode::Kind::Leaf) {
    out += n.attribute;
    return;
  }
  int num = static_cast<int>(n.children.size());
  if (num > 1 && (n.threshold == num || n.threshold == 1)) {
    const char* join = n.threshold == num ? " AND " : " OR ";
    out += '(';
    for (int i = 0; i < num; ++i) {
      if (i) out += join;
      pretty_node(n.children[i], out);
    }
    out += ')';
    return;
  }
  out += "THRESH(" + std::to_string(n.threshold) + "; ";
  for (int i = 0; i < num; ++i) {
    if (i) out += ", ";
    pretty_node(n.children[i], out);
  }
  out += ')';
}

void collect_leaves(const PolicyNode& n, std::vector<const PolicyNode*>& out) {
  if (n.kind == PolicyNode::Kind::Leaf) {
    out.push_back(&n);
    return;
  }
  for (const auto& c : n.children) collect_leaves(c, out);
}

bool nodes_equal(const PolicyNode& a, const PolicyNode& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == PolicyNode::Kind::Leaf) return a.attribute == b.attribute;
  if (a.threshold != b.threshold || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!nodes_equal(a.children[i], b.children[i])) return false;
  return true;
}

std::optional<SatisfyingSelection> solve(const PolicyNode& n, const std::set<std::string>& attrs) {
  if (n.kind == PolicyNode::Kind::Leaf) {
    if (!attrs.count(n.attribute)) return std::nullopt;
    SatisfyingSelection sel;
    sel.leaves.emplace_back(n.node_id, n.attribute);
    return sel;
  }
  SatisfyingSelection sel;
  std::vector<int> chosen;
  for (const PolicyNode& child : n.children) {
    if (static_cast<int>(chosen.size()) == n.threshold) break;
    auto sub = solve(child, attrs);
    if (!sub) continue;
    chosen.push_back(child.index);
    for (auto& [id, v] : sub->gate_choices) sel.gate_choices.emplace(id, std::move(v));
    for (auto& leaf : sub->leaves) sel.leaves.push_back(std::move(leaf));
  }
  if (static_cast<int>(chosen.size()) < n.threshold) return std::nullopt;
  sel.gate_choices.emplace(n.node_id, std::move(chosen));
  return sel;
}

}  // namespace

AccessTree AccessTree::parse(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::PolicyParseError, "empty policy text");
  Parser parser(text);
  return from_root(parser.parse_policy());
}

AccessTree AccessTree::from_root(PolicyNode root) {
  validate_node(root);
  AccessTree t;
  t.root_ = std::move(root);
  t.root_.index = 1;
  int next_id = 0;
  assign_ids(t.root_, next_id);
  return t;
}

std::string AccessTree::pretty() const {
  std::string out;
  pretty_node(root_, out);
  return out;
}

std::vector<const PolicyNode*> AccessTree::leaves() const {
  std::vector<const PolicyNode*> out;
  collect_leaves(root_, out);
  return out;
}

int AccessTree::leaf_count() const { return static_cast<int>(leaves().size()); }

bool operator==(const AccessTree& a, const AccessTree& b) {
  return nodes_equal(a.root_, b.root_);
}

std::optional<SatisfyingSelection> check_satisfy(const AccessTree& tree,
                                                 const std::set<std::string>& attrs) {
  return solve(tree.root(), attrs);
}

ShareMap share_secret(const AccessTree& tree, const Scalar& s, RandomSource& rng) {
  return share_secret_generic<Scalar>(tree, s, [&rng] { return Scalar::random(rng); });
}

}  // namespace mcabe

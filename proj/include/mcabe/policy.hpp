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

#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mcabe/algebra.hpp"

namespace mcabe {

// Threshold-gate access tree. Gates are k-of-n; AND is n-of-n, OR is 1-of-n.
//
// Policy grammar:
//   policy   := or_expr
//   or_expr  := and_expr ("OR" and_expr)*
//   and_expr := primary ("AND" primary)*
//   primary  := IDENT | "THRESH" "(" INT ";" policy ("," policy)* ")"
//             | "(" policy ")"
//   IDENT    := [A-Za-z_][A-Za-z0-9_.:-]*  (AND, OR, THRESH reserved)
//
// Chained AND/OR collapse into one n-ary gate; textual child order fixes
// index(y), 1-based.
struct PolicyNode {
  enum class Kind { Leaf, Gate };

  Kind kind = Kind::Leaf;
  std::string attribute;            // leaves
  int threshold = 0;                // gates
  std::vector<PolicyNode> children; // gates
  int index = 1;                    // 1-based position among siblings
  int node_id = 0;                  // preorder id, assigned on construction

  static PolicyNode leaf(std::string attr) {
    PolicyNode n;
    n.kind = Kind::Leaf;
    n.attribute = std::move(attr);
    return n;
  }

  static PolicyNode gate(int threshold, std::vector<PolicyNode> children) {
    PolicyNode n;
    n.kind = Kind::Gate;
    n.threshold = threshold;
    n.children = std::move(children);
    return n;
  }
};

class AccessTree {
 public:
  // Throws Error(PolicyParseError) with a byte offset on bad syntax.
  static AccessTree parse(std::string_view text);

  // Validates invariants and assigns node ids / sibling indices.
  static AccessTree from_root(PolicyNode root);

  const PolicyNode& root() const { return root_; }

  // Canonical textual form; parse(pretty()) reproduces the tree exactly.
  std::string pretty() const;

  std::vector<const PolicyNode*> leaves() const;
  int leaf_count() const;

  friend bool operator==(const AccessTree& a, const AccessTree& b);

 private:
  PolicyNode root_;
};

// Chosen k-subsets per gate plus the leaves they bottom out in.
struct SatisfyingSelection {
  std::map<int, std::vector<int>> gate_choices;        // gate node_id -> child indices
  std::vector<std::pair<int, std::string>> leaves;     // leaf node_id, attribute
};

// Deterministic: every gate takes its lowest-indexed satisfiable children.
std::optional<SatisfyingSelection> check_satisfy(const AccessTree& tree,
                                                 const std::set<std::string>& attrs);

// Top-down polynomial share distribution (q_R(0) = s). Gate polynomials are
// retained so tests can re-check per-gate consistency; they never leave the
// encrypting party.
template <typename F>
struct ShareMapT {
  std::map<int, F> leaf_shares;               // leaf node_id -> q_y(0)
  std::map<int, std::vector<F>> gate_polys;   // gate node_id -> coefficients, c[0] = q_x(0)
};

template <typename F>
F poly_eval(const std::vector<F>& coeffs, const F& x) {
  F acc = F::one() - F::one();
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <typename F>
void share_node(const PolicyNode& node, const F& value, const std::function<F()>& sample,
                ShareMapT<F>& out) {
  if (node.kind == PolicyNode::Kind::Leaf) {
    out.leaf_shares.emplace(node.node_id, value);
    return;
  }
  std::vector<F> coeffs{value};
  for (int i = 1; i < node.threshold; ++i) coeffs.push_back(sample());
  out.gate_polys.emplace(node.node_id, coeffs);
  for (const PolicyNode& child : node.children)
    share_node(child, poly_eval(coeffs, F::from_u64(static_cast<u64>(child.index))), sample, out);
}

template <typename F>
ShareMapT<F> share_secret_generic(const AccessTree& tree, const F& s,
                                  const std::function<F()>& sample) {
  ShareMapT<F> out;
  share_node(tree.root(), s, sample, out);
  return out;
}

using ShareMap = ShareMapT<Scalar>;

ShareMap share_secret(const AccessTree& tree, const Scalar& s, RandomSource& rng);

}  // namespace mcabe

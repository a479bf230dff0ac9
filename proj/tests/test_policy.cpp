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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mcabe/policy.hpp"
#include "support/generators.hpp"
#include "support/smallfield.hpp"

using namespace mcabe;

namespace {

// Test-side reconstruction, independent of the library's decrypt path:
// recursively Lagrange-combine the selected leaf shares.
Scalar reconstruct(const PolicyNode& node, const SatisfyingSelection& sel,
                   const std::map<int, Scalar>& leaf_shares) {
  if (node.kind == PolicyNode::Kind::Leaf) return leaf_shares.at(node.node_id);
  const auto& chosen = sel.gate_choices.at(node.node_id);
  std::vector<std::pair<Scalar, Scalar>> shares;
  for (int idx : chosen) {
    const PolicyNode& child = node.children.at(idx - 1);
    shares.emplace_back(Scalar::from_u64(idx), reconstruct(child, sel, leaf_shares));
  }
  return interpolate_at_zero(std::span<const std::pair<Scalar, Scalar>>(shares));
}

Scalar combine(const std::vector<std::pair<int, Scalar>>& parts) {
  std::vector<std::pair<Scalar, Scalar>> shares;
  for (auto& [i, v] : parts) shares.emplace_back(Scalar::from_u64(i), v);
  return interpolate_at_zero(std::span<const std::pair<Scalar, Scalar>>(shares));
}

}  // namespace

TEST_CASE("parser produces the trees the grammar forces") {
  AccessTree single = AccessTree::parse("doctor");
  CHECK(single.root().kind == PolicyNode::Kind::Leaf);
  CHECK(single.root().attribute == "doctor");
  CHECK(single.leaf_count() == 1);

  AccessTree pair = AccessTree::parse("(doctor AND cardiology)");
  REQUIRE(pair.root().kind == PolicyNode::Kind::Gate);
  CHECK(pair.root().threshold == 2);
  REQUIRE(pair.root().children.size() == 2);
  CHECK(pair.root().children[0].attribute == "doctor");
  CHECK(pair.root().children[1].attribute == "cardiology");
  CHECK(pair.root().children[0].index == 1);
  CHECK(pair.root().children[1].index == 2);

  AccessTree thresh = AccessTree::parse("THRESH(2; a, b, c)");
  REQUIRE(thresh.root().kind == PolicyNode::Kind::Gate);
  CHECK(thresh.root().threshold == 2);
  CHECK(thresh.root().children.size() == 3);

  // n-ary chains collapse into one gate
  AccessTree chain = AccessTree::parse("a AND b AND c");
  CHECK(chain.root().threshold == 3);
  CHECK(chain.root().children.size() == 3);

  // OR binds looser than AND
  AccessTree mixed = AccessTree::parse("a AND b OR c");
  CHECK(mixed.root().threshold == 1);
  REQUIRE(mixed.root().children.size() == 2);
  CHECK(mixed.root().children[0].threshold == 2);

  // node ids are assigned in preorder
  CHECK(mixed.root().node_id == 0);
  CHECK(mixed.root().children[0].node_id == 1);
  CHECK(mixed.root().children[0].children[0].node_id == 2);
  CHECK(mixed.root().children[0].children[1].node_id == 3);
  CHECK(mixed.root().children[1].node_id == 4);
}

TEST_CASE("parser rejects bad input with a position") {
  auto check_throws = [](const char* text) {
    try {
      (void)AccessTree::parse(text);
      FAIL_CHECK("no error for: " << text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PolicyParseError);
      CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
  };
  check_throws("doctor AND");
  check_throws("(doctor");
  check_throws("()");
  check_throws("doctor OR OR nurse");
  check_throws("THRESH(4; a, b)");  // k > n
  check_throws("THRESH(0; a)");
  check_throws("THRESH(; a)");
  check_throws("a b");
  check_throws("doctor)");
  CHECK_THROWS_AS((void)AccessTree::parse(""), Error);
}

TEST_CASE("pretty-printer canonical form and roundtrips") {
  CHECK(AccessTree::parse("doctor").pretty() == "doctor");
  CHECK(AccessTree::parse("( doctor AND cardiology )").pretty() == "(doctor AND cardiology)");
  CHECK(AccessTree::parse("THRESH(2;a,b)").pretty() == "(a AND b)");
  CHECK(AccessTree::parse("THRESH(1; a, b)").pretty() == "(a OR b)");
  CHECK(AccessTree::parse("THRESH(2; a, b, c)").pretty() == "THRESH(2; a, b, c)");
  CHECK(AccessTree::parse("THRESH(1; a)").pretty() == "THRESH(1; a)");

  std::mt19937 rng(4242);
  for (int i = 0; i < 200; ++i) {
    AccessTree t = testgen::random_tree(rng);
    std::string text = t.pretty();
    AccessTree back = AccessTree::parse(text);
    CHECK(back == t);              // parse . pretty-print = identity on the tree
    CHECK(back.pretty() == text);  // pretty-print . parse = canonical fixpoint
  }
}

TEST_CASE("check_satisfy examples and tie-break") {
  AccessTree t = AccessTree::parse("(A AND B)");
  auto sel = check_satisfy(t, {"A", "B"});
  REQUIRE(sel.has_value());
  CHECK(sel->leaves.size() == 2);
  CHECK(!check_satisfy(t, {"A"}).has_value());

  AccessTree th = AccessTree::parse("THRESH(2; A, B, C)");
  auto sel_all = check_satisfy(th, {"A", "B", "C"});
  REQUIRE(sel_all.has_value());
  CHECK(sel_all->gate_choices.at(0) == std::vector<int>{1, 2});  // lowest indices win

  auto sel_ac = check_satisfy(th, {"A", "C"});
  REQUIRE(sel_ac.has_value());
  CHECK(sel_ac->gate_choices.at(0) == std::vector<int>{1, 3});

  // duplicate attributes on distinct leaves are independent
  AccessTree dup = AccessTree::parse("(A AND A)");
  auto sel_dup = check_satisfy(dup, {"A"});
  REQUIRE(sel_dup.has_value());
  CHECK(sel_dup->leaves.size() == 2);
}

TEST_CASE("satisfaction is monotone in the attribute set") {
  std::mt19937 rng(77);
  for (int i = 0; i < 200; ++i) {
    AccessTree t = testgen::random_tree(rng);
    auto attrs = testgen::random_attrs(rng);
    auto bigger = attrs;
    bigger.insert("extra" + std::to_string(i % 7));
    bigger.insert("att" + std::to_string(i % 12));
    if (check_satisfy(t, attrs)) CHECK(check_satisfy(t, bigger).has_value());
  }
}

TEST_CASE("share_secret forced cases") {
  SeededRandom rng(3);
  Scalar s = Scalar::from_u64(7);

  AccessTree leaf = AccessTree::parse("A");
  ShareMap m = share_secret(leaf, s, rng);
  CHECK(m.leaf_shares.at(0) == s);

  AccessTree orr = AccessTree::parse("(A OR B)");
  ShareMap m2 = share_secret(orr, s, rng);
  CHECK(m2.leaf_shares.at(1) == s);
  CHECK(m2.leaf_shares.at(2) == s);
}

TEST_CASE("share_secret over the Z_101 test field reconstructs") {
  using F = smallfield::F101;
  std::mt19937 rng(5);
  AccessTree t = AccessTree::parse("(A AND B)");
  F s = F::from_u64(42);
  auto sample = [&rng] { return F::from_long(std::uniform_int_distribution<long>(0, 100)(rng)); };
  auto shares = share_secret_generic<F>(t, s, sample);

  // independent oracle: brute-force Lagrange over plain integers
  std::vector<std::pair<long, long>> pts{{1, shares.leaf_shares.at(1).v},
                                         {2, shares.leaf_shares.at(2).v}};
  CHECK(smallfield::lagrange_at_zero(pts, 101) == 42);
}

TEST_CASE("gate polynomial consistency: q_y(0) = q_parent(index(y))") {
  std::mt19937 struct_rng(8);
  SeededRandom rng(8);
  for (int i = 0; i < 50; ++i) {
    AccessTree t = testgen::random_tree(struct_rng);
    Scalar s = Scalar::random(rng);
    ShareMap shares = share_secret(t, s, rng);

    std::function<void(const PolicyNode&)> walk = [&](const PolicyNode& n) {
      if (n.kind == PolicyNode::Kind::Leaf) return;
      const auto& coeffs = shares.gate_polys.at(n.node_id);
      CHECK(static_cast<int>(coeffs.size()) == n.threshold);
      for (const PolicyNode& child : n.children) {
        Scalar at_index = poly_eval(coeffs, Scalar::from_u64(child.index));
        Scalar child_zero = child.kind == PolicyNode::Kind::Leaf
                                ? shares.leaf_shares.at(child.node_id)
                                : shares.gate_polys.at(child.node_id).front();
        CHECK(at_index == child_zero);
        walk(child);
      }
    };
    walk(t.root());
    Scalar root_zero = t.root().kind == PolicyNode::Kind::Leaf
                           ? shares.leaf_shares.at(0)
                           : shares.gate_polys.at(0).front();
    CHECK(root_zero == s);
  }
}

TEST_CASE("reconstruction identity over random trees") {
  std::mt19937 struct_rng(21);
  SeededRandom rng(21);
  int satisfied = 0;
  for (int i = 0; i < 600 && satisfied < 200; ++i) {
    AccessTree t = testgen::random_tree(struct_rng);
    auto attrs = testgen::random_attrs(struct_rng);
    auto sel = check_satisfy(t, attrs);
    if (!sel) continue;
    ++satisfied;
    Scalar s = Scalar::random(rng);
    ShareMap shares = share_secret(t, s, rng);
    CHECK(reconstruct(t.root(), *sel, shares.leaf_shares) == s);
  }
  CHECK(satisfied >= 200);
}

TEST_CASE("every satisfying subset reconstructs the same secret") {
  SeededRandom rng(31);
  AccessTree t = AccessTree::parse("THRESH(2; A, B, C)");
  Scalar s = Scalar::random(rng);
  ShareMap shares = share_secret(t, s, rng);

  const auto& kids = t.root().children;
  std::vector<std::pair<int, Scalar>> all;
  for (const auto& child : kids)
    all.emplace_back(child.index, shares.leaf_shares.at(child.node_id));

  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) CHECK(combine({all[a], all[b]}) == s);
}

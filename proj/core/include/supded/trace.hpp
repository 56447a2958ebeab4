#pragma once

// Proof traces: a versioned, line-oriented s-expression rendering of a closed
// tableau.
//
//   supded-trace 1
//   (problem "<fnv1a of the input formulas>")
//   (rules "<rule set fingerprint>")
//   (root "<input formula>")...
//   (witness "$w1" <node id> "<epsilon term>")...
//   (node <id> "<rule>" (principal "<f>")... (inst "<name>" "<term>")...
//         (fresh "<meta>")... (ref <n>) (prior <n>)
//     (branch (add "<f>")... (node ...))...)
//
// Nodes are numbered in pre-order. A node has one (branch ...) per child
// branch of its rule; a zero-branch node is a leaf. Formulas and terms use
// the problem syntax, with closed epsilon terms abbreviated as '$wN'. A
// witness name is introduced at the first node (in pre-order along a path)
// that mentions its term and is only visible in that node's subtree, so the
// same term reached on two branches gets two names.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "supded/proof.hpp"

namespace supded {

struct TraceWitness {
  std::string name;
  int node = -1;
  std::string term;
};

struct TraceBranch {
  std::vector<std::string> adds;
  int child = -1;  // node id, or -1 when the branch has no node (malformed)
};

struct TraceNode {
  int id = -1;
  int parent = -1;
  std::string rule;
  std::vector<std::string> principals;
  std::vector<std::pair<std::string, std::string>> inst;
  std::vector<std::string> fresh;
  int ref = -1;
  int prior = -1;
  std::vector<TraceBranch> branches;
};

struct ProofTrace {
  int version = 1;
  std::string problem;
  std::string rules_id;
  std::vector<std::string> roots;
  std::vector<TraceWitness> witnesses;
  std::vector<TraceNode> nodes;  // pre-order, nodes[i].id == i
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string problem_hash(const std::vector<Formula>& inputs);

ProofTrace emit_trace(const Proof& p);
std::string write_trace(const ProofTrace& t);
// Structural parse only; formula texts are checked by check_proof. Throws TraceError.
ProofTrace read_trace(std::string_view text);

}  // namespace supded

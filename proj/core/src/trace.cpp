#include "supded/trace.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

#include "supded/rules.hpp"
#include "supded/unify.hpp"

namespace supded {

std::string problem_hash(const std::vector<Formula>& inputs) {
  std::string all;
  for (const auto& f : inputs) {
    all += to_string(f);
    all += '\n';
  }
  return hex64(fnv1a(all));
}

namespace {

bool closed(const Term& t) { return free_vars(t).empty(); }

class Emitter {
 public:
  ProofTrace run(const Proof& p) {
    out_.problem = problem_hash(p.inputs);
    out_.rules_id = p.rules_id;
    for (const auto& f : p.inputs) out_.roots.push_back(to_string(f));
    if (p.root) visit(*p.root, -1);
    return std::move(out_);
  }

 private:
  // Names every closed outermost epsilon term of `t` (first use), then prints.
  template <class T>
  std::string render(const T& t, int node, std::vector<std::string>& introduced) {
    T cur = t;
    std::vector<std::pair<Term, std::string>> subst;
    for (const auto& e : epsilons_of(t)) {
      if (!closed(e)) continue;
      auto it = scope_.find(e.key());
      std::string name;
      if (it != scope_.end()) {
        name = it->second;
      } else {
        name = "$w" + std::to_string(++counter_);
        scope_[e.key()] = name;
        introduced.push_back(e.key());
        out_.witnesses.push_back({name, node, to_string(e)});
      }
      subst.emplace_back(e, name);
    }
    // Outer terms first so nested witnesses vanish with their host.
    std::stable_sort(subst.begin(), subst.end(),
                     [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
    for (const auto& [e, name] : subst) cur = replace_term(cur, e, Term::constant(name));
    return to_string(cur);
  }

  void visit(const ProofNode& n, int parent) {
    int id = static_cast<int>(out_.nodes.size());
    out_.nodes.emplace_back();
    std::vector<std::string> introduced;
    TraceNode tn;
    tn.id = id;
    tn.parent = parent;
    tn.rule = n.rule;
    tn.ref = n.ref;
    tn.prior = n.prior;
    for (const auto& f : n.principals) tn.principals.push_back(render(f, id, introduced));
    for (const auto& [k, v] : n.inst) tn.inst.emplace_back(k, render(v, id, introduced));
    for (const auto& m : n.fresh) tn.fresh.push_back(to_string(m));
    for (const auto& br : n.branches) {
      TraceBranch b;
      for (const auto& f : br) b.adds.push_back(render(f, id, introduced));
      tn.branches.push_back(std::move(b));
    }
    out_.nodes[id] = tn;
    for (std::size_t i = 0; i < n.children.size() && i < n.branches.size(); ++i) {
      out_.nodes[id].branches[i].child = static_cast<int>(out_.nodes.size());
      visit(*n.children[i], id);
    }
    for (const auto& k : introduced) scope_.erase(k);
  }

  ProofTrace out_;
  std::unordered_map<std::string, std::string> scope_;
  int counter_ = 0;
};

std::string quoted(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    if (c == '\n') {
      o += "\\n";
      continue;
    }
    o += c;
  }
  return o + "\"";
}

void write_node(const ProofTrace& t, int id, int depth, std::string& o) {
  const TraceNode& n = t.nodes.at(id);
  std::string pad(2 * depth, ' ');
  o += pad + "(node " + std::to_string(n.id) + " " + quoted(n.rule);
  for (const auto& p : n.principals) o += "\n" + pad + "  (principal " + quoted(p) + ")";
  for (const auto& [k, v] : n.inst) o += "\n" + pad + "  (inst " + quoted(k) + " " + quoted(v) + ")";
  for (const auto& f : n.fresh) o += "\n" + pad + "  (fresh " + quoted(f) + ")";
  if (n.ref >= 0) o += "\n" + pad + "  (ref " + std::to_string(n.ref) + ")";
  if (n.prior >= 0) o += "\n" + pad + "  (prior " + std::to_string(n.prior) + ")";
  for (const auto& b : n.branches) {
    o += "\n" + pad + "  (branch";
    for (const auto& f : b.adds) o += "\n" + pad + "    (add " + quoted(f) + ")";
    if (b.child >= 0) {
      o += "\n";
      write_node(t, b.child, depth + 2, o);
    }
    o += ")";
  }
  o += ")";
}

// ------------------------------------------------------------ reading

struct Sexp {
  bool list = false;
  bool string = false;
  std::string atom;
  std::vector<Sexp> items;
  int line = 0;
};

class SexpReader {
 public:
  explicit SexpReader(std::string_view s) : s_(s) {}

  bool done() {
    skip();
    return i_ >= s_.size();
  }

  Sexp next() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of trace");
    Sexp e;
    e.line = line_;
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      e.list = true;
      while (true) {
        skip();
        if (i_ >= s_.size()) fail("unbalanced parenthesis");
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        e.items.push_back(next());
      }
    } else if (c == ')') {
      fail("unexpected ')'");
    } else if (c == '"') {
      ++i_;
      e.string = true;
      while (true) {
        if (i_ >= s_.size()) fail("unterminated string");
        char d = s_[i_++];
        if (d == '"') break;
        if (d == '\\') {
          if (i_ >= s_.size()) fail("unterminated string");
          char x = s_[i_++];
          e.atom += x == 'n' ? '\n' : x;
        } else {
          if (d == '\n') ++line_;
          e.atom += d;
        }
      }
    } else {
      while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')' &&
             s_[i_] != '"')
        e.atom += s_[i_++];
    }
    return e;
  }

  [[noreturn]] void fail(const std::string& m) const { throw TraceError("line " + std::to_string(line_) + ": " + m); }

 private:
  void skip() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '\n') ++line_;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i_;
      } else if (c == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1;
};

[[noreturn]] void bad(const Sexp& e, const std::string& m) {
  throw TraceError("line " + std::to_string(e.line) + ": " + m);
}

const std::string& head(const Sexp& e) {
  if (!e.list || e.items.empty() || e.items[0].list || e.items[0].string) bad(e, "expected a tagged list");
  return e.items[0].atom;
}

const std::string& str(const Sexp& e) {
  if (!e.string) bad(e, "expected a string");
  return e.atom;
}

int num(const Sexp& e) {
  if (e.list || e.string || e.atom.empty() ||
      !std::all_of(e.atom.begin(), e.atom.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    bad(e, "expected a number");
  try {
    return std::stoi(e.atom);
  } catch (const std::exception&) {
    bad(e, "number out of range");
  }
}

void arity(const Sexp& e, std::size_t n) {
  if (e.items.size() != n) bad(e, "(" + head(e) + ") takes " + std::to_string(n - 1) + " field(s)");
}

void read_node(const Sexp& e, int parent, ProofTrace& t) {
  if (head(e) != "node" || e.items.size() < 3) bad(e, "malformed node");
  TraceNode n;
  n.id = num(e.items[1]);
  n.parent = parent;
  if (n.id != static_cast<int>(t.nodes.size())) bad(e, "node ids must be consecutive in pre-order");
  n.rule = str(e.items[2]);
  t.nodes.push_back(n);
  std::vector<const Sexp*> branches;
  for (std::size_t i = 3; i < e.items.size(); ++i) {
    const Sexp& f = e.items[i];
    const std::string& h = head(f);
    TraceNode& cur = t.nodes[n.id];
    if (h == "principal") {
      arity(f, 2);
      cur.principals.push_back(str(f.items[1]));
    } else if (h == "inst") {
      arity(f, 3);
      cur.inst.emplace_back(str(f.items[1]), str(f.items[2]));
    } else if (h == "fresh") {
      arity(f, 2);
      cur.fresh.push_back(str(f.items[1]));
    } else if (h == "ref") {
      arity(f, 2);
      cur.ref = num(f.items[1]);
    } else if (h == "prior") {
      arity(f, 2);
      cur.prior = num(f.items[1]);
    } else if (h == "branch") {
      branches.push_back(&f);
    } else {
      bad(f, "unknown node field '" + h + "'");
    }
  }
  for (const Sexp* b : branches) {
    TraceBranch tb;
    const Sexp* child = nullptr;
    for (std::size_t i = 1; i < b->items.size(); ++i) {
      const Sexp& f = b->items[i];
      const std::string& h = head(f);
      if (h == "add") {
        if (child) bad(f, "add after the child node");
        arity(f, 2);
        tb.adds.push_back(str(f.items[1]));
      } else if (h == "node") {
        if (child) bad(f, "a branch holds one node");
        child = &f;
      } else {
        bad(f, "unknown branch field '" + h + "'");
      }
    }
    int slot = static_cast<int>(t.nodes[n.id].branches.size());
    t.nodes[n.id].branches.push_back(std::move(tb));
    if (child) {
      t.nodes[n.id].branches[slot].child = static_cast<int>(t.nodes.size());
      read_node(*child, n.id, t);
    }
  }
}

}  // namespace

ProofTrace emit_trace(const Proof& p) { return Emitter().run(p); }

std::string write_trace(const ProofTrace& t) {
  std::string o = "supded-trace " + std::to_string(t.version) + "\n";
  o += "(problem " + quoted(t.problem) + ")\n";
  o += "(rules " + quoted(t.rules_id) + ")\n";
  for (const auto& r : t.roots) o += "(root " + quoted(r) + ")\n";
  for (const auto& w : t.witnesses)
    o += "(witness " + quoted(w.name) + " " + std::to_string(w.node) + " " + quoted(w.term) + ")\n";
  if (!t.nodes.empty()) {
    write_node(t, 0, 0, o);
    o += "\n";
  }
  return o;
}

ProofTrace read_trace(std::string_view text) {
  SexpReader r(text);
  ProofTrace t;
  if (r.done()) r.fail("empty trace");
  Sexp magic = r.next();
  if (magic.list || magic.string || magic.atom != "supded-trace") r.fail("missing supded-trace header");
  Sexp ver = r.next();
  t.version = num(ver);
  if (t.version != 1) bad(ver, "unsupported trace version " + ver.atom);
  bool have_problem = false, have_rules = false, have_node = false;
  while (!r.done()) {
    Sexp e = r.next();
    const std::string& h = head(e);
    if (have_node) bad(e, "content after the root node");
    if (h == "problem") {
      arity(e, 2);
      t.problem = str(e.items[1]);
      have_problem = true;
    } else if (h == "rules") {
      arity(e, 2);
      t.rules_id = str(e.items[1]);
      have_rules = true;
    } else if (h == "root") {
      arity(e, 2);
      t.roots.push_back(str(e.items[1]));
    } else if (h == "witness") {
      arity(e, 4);
      t.witnesses.push_back({str(e.items[1]), num(e.items[2]), str(e.items[3])});
    } else if (h == "node") {
      read_node(e, -1, t);
      have_node = true;
    } else {
      bad(e, "unknown record '" + h + "'");
    }
  }
  if (!have_problem || !have_rules) r.fail("missing problem or rules record");
  return t;
}

}  // namespace supded

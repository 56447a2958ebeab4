#include "supded/theory_file.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "supded/syntax.hpp"

namespace supded {

namespace {

std::string record_name(Parser& p) {
  const Token& t = p.peek();
  if (t.kind != Tok::LowerWord && t.kind != Tok::Quoted && t.kind != Tok::UpperWord)
    p.fail_at(t, "expected a record name");
  return p.next().text;
}

}  // namespace

Theory parse_theory(std::string_view text) {
  ParseOptions opts;
  opts.free_upper_vars = true;
  Parser p(tokenize(text), opts);
  Theory th;
  std::set<std::string> names;
  while (!p.at_end()) {
    Token kw = p.expect(Tok::LowerWord, "'rule' or 'axiom'");
    std::string name = record_name(p);
    if (!names.insert(name).second) p.fail_at(kw, "duplicate record name '" + name + "'");
    p.expect(Tok::Colon, "':'");
    if (kw.text == "rule") {
      Token at = p.peek();
      Prr r;
      r.name = name;
      r.lhs = p.formula();
      if (!r.lhs.is_literal()) p.fail_at(at, "rule '" + name + "': left-hand side must be a literal");
      if (p.accept(Tok::RewritePos)) {
        r.positive_only = true;
      } else {
        p.expect(Tok::Rewrite, "'-->' or '==>'");
      }
      r.rhs = p.formula();
      r.params = free_vars(r.lhs);
      for (const auto& v : free_vars(r.rhs))
        if (!r.params.count(v)) p.fail_at(at, "rule '" + name + "': variable " + v + " is not bound by the left-hand side");
      r.equality = literal_atom(r.lhs).is(FormulaKind::Equal);
      th.rules.push_back(std::move(r));
    } else if (kw.text == "axiom") {
      Token at = p.peek();
      Formula f = p.formula();
      if (!free_vars(f).empty()) p.fail_at(at, "axiom '" + name + "' has free variables");
      th.axioms.push_back({name, f});
    } else {
      p.fail_at(kw, "unknown record '" + kw.text + "'");
    }
    p.expect(Tok::Dot, "'.'");
  }
  return th;
}

Theory load_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read theory file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str());
}

}  // namespace supded

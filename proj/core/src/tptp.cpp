#include "supded/tptp.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "supded/syntax.hpp"

namespace supded {

const char* to_string(TptpRole r) {
  switch (r) {
    case TptpRole::Axiom: return "axiom";
    case TptpRole::Hypothesis: return "hypothesis";
    case TptpRole::Definition: return "definition";
    case TptpRole::Lemma: return "lemma";
    case TptpRole::Theorem: return "theorem";
    case TptpRole::Conjecture: return "conjecture";
    case TptpRole::NegatedConjecture: return "negated_conjecture";
  }
  return "?";
}

std::size_t TptpProblem::count(TptpRole r) const {
  std::size_t n = 0;
  for (const auto& f : formulas) n += f.role == r;
  return n;
}

namespace {

std::optional<TptpRole> role_of(const std::string& s) {
  if (s == "axiom" || s == "plain") return TptpRole::Axiom;
  if (s == "hypothesis" || s == "assumption") return TptpRole::Hypothesis;
  if (s == "definition") return TptpRole::Definition;
  if (s == "lemma") return TptpRole::Lemma;
  if (s == "theorem" || s == "corollary") return TptpRole::Theorem;
  if (s == "conjecture") return TptpRole::Conjecture;
  if (s == "negated_conjecture") return TptpRole::NegatedConjecture;
  return std::nullopt;
}

std::string decl_name(Parser& p) {
  const Token& t = p.peek();
  if (t.kind != Tok::LowerWord && t.kind != Tok::Quoted && t.kind != Tok::Number && t.kind != Tok::UpperWord)
    p.fail_at(t, "expected a formula name");
  return p.next().text;
}

// Skips one balanced annotation term up to the closing parenthesis of the declaration.
void skip_annotations(Parser& p) {
  int depth = 0;
  while (true) {
    const Token& t = p.peek();
    if (t.kind == Tok::End) p.fail_at(t, "unterminated annotation");
    if (depth == 0 && t.kind == Tok::RParen) return;
    if (t.kind == Tok::LParen || t.kind == Tok::LBracket) ++depth;
    if (t.kind == Tok::RParen || t.kind == Tok::RBracket) --depth;
    p.next();
  }
}

class Reader {
 public:
  explicit Reader(const IncludeResolver& r) : resolve_(r) {}

  void read(std::string_view text, const std::string& source, const std::set<std::string>* only) {
    Parser p(tokenize(text));
    while (!p.at_end()) {
      Token kw = p.expect(Tok::LowerWord, "a declaration");
      if (kw.text == "include") {
        include(p);
      } else if (kw.text == "fof") {
        p.expect(Tok::LParen, "'('");
        TptpFormula f;
        f.source = source;
        f.name = decl_name(p);
        p.expect(Tok::Comma, "','");
        Token rt = p.expect(Tok::LowerWord, "a role");
        auto role = role_of(rt.text);
        if (!role) p.fail_at(rt, "unsupported role '" + rt.text + "'");
        f.role = *role;
        p.expect(Tok::Comma, "','");
        f.formula = p.formula();
        if (p.accept(Tok::Comma)) skip_annotations(p);
        p.expect(Tok::RParen, "')'");
        p.expect(Tok::Dot, "'.'");
        if (!only || only->count(f.name)) out.formulas.push_back(std::move(f));
      } else if (kw.text == "cnf" || kw.text == "tff" || kw.text == "thf" || kw.text == "tcf") {
        p.fail_at(kw, "unsupported dialect '" + kw.text + "' (only fof is accepted)");
      } else {
        p.fail_at(kw, "unknown declaration '" + kw.text + "'");
      }
    }
  }

  TptpProblem out;

 private:
  void include(Parser& p) {
    p.expect(Tok::LParen, "'('");
    Token name = p.expect(Tok::Quoted, "a quoted file name");
    std::set<std::string> selection;
    bool selective = false;
    if (p.accept(Tok::Comma)) {
      selective = true;
      p.expect(Tok::LBracket, "'['");
      if (!p.accept(Tok::RBracket)) {
        do selection.insert(decl_name(p));
        while (p.accept(Tok::Comma));
        p.expect(Tok::RBracket, "']'");
      }
    }
    p.expect(Tok::RParen, "')'");
    p.expect(Tok::Dot, "'.'");
    auto got = resolve_ ? resolve_(name.text) : std::nullopt;
    if (!got) throw UnresolvedInclude("cannot resolve include '" + name.text + "'");
    const auto& [path, text] = *got;
    if (active_.count(path)) throw UnresolvedInclude("include cycle through '" + path + "'");
    if (!seen_.insert(path).second && !selective) return;
    out.includes.push_back(path);
    active_.insert(path);
    read(text, path, selective ? &selection : nullptr);
    active_.erase(path);
  }

  const IncludeResolver& resolve_;
  std::set<std::string> active_, seen_;
};

std::optional<std::string> slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TptpProblem parse_problem(std::string_view text, const IncludeResolver& resolve) {
  Reader r(resolve);
  r.read(text, "", nullptr);
  return std::move(r.out);
}

TptpProblem load_problem(const std::string& path, const std::string& include_dir) {
  auto text = slurp(path);
  if (!text) throw std::runtime_error("cannot read problem file " + path);
  namespace fs = std::filesystem;
  fs::path base = fs::path(path).parent_path();
  IncludeResolver resolve = [&](const std::string& name) -> std::optional<std::pair<std::string, std::string>> {
    std::vector<fs::path> tries;
    if (!include_dir.empty()) tries.push_back(fs::path(include_dir) / name);
    tries.push_back(base / name);
    for (const auto& t : tries)
      if (auto s = slurp(t)) return std::pair{t.lexically_normal().string(), *s};
    return std::nullopt;
  };
  TptpProblem p = parse_problem(*text, resolve);
  for (auto& f : p.formulas)
    if (f.source.empty()) f.source = path;
  return p;
}

std::vector<Formula> to_proof_obligation(const TptpProblem& p) {
  if (p.count(TptpRole::Conjecture) > 1)
    throw MultipleConjectures(std::to_string(p.count(TptpRole::Conjecture)) + " conjectures in one problem");
  std::vector<Formula> out;
  std::optional<Formula> goal;
  for (const auto& f : p.formulas) {
    if (f.role == TptpRole::Conjecture)
      goal = Formula::negate(f.formula);
    else
      out.push_back(f.formula);
  }
  if (goal) out.push_back(*goal);
  return out;
}

std::string print_problem(const TptpProblem& p) {
  std::string o;
  for (const auto& f : p.formulas) {
    bool plain = !f.name.empty() && std::islower(static_cast<unsigned char>(f.name[0])) &&
                 f.name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_") ==
                     std::string::npos;
    std::string name = plain ? f.name : "'" + f.name + "'";
    o += "fof(" + name + ", " + to_string(f.role) + ", " + to_string(f.formula) + ").\n";
  }
  return o;
}

}  // namespace supded

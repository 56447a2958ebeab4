#include "supded/syntax.hpp"

#include <algorithm>
#include <cctype>

namespace supded {

SyntaxError::SyntaxError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < s.size(); ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto emit = [&](Tok k, std::string text, int l, int c) { out.push_back(Token{k, std::move(text), l, c}); };

  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      int l = line, cc = col;
      advance(2);
      while (i + 1 < s.size() && !(s[i] == '*' && s[i + 1] == '/')) advance(1);
      if (i + 1 >= s.size()) throw SyntaxError("unterminated comment", l, cc);
      advance(2);
      continue;
    }
    int l = line, cc = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && word_char(s[j])) ++j;
      std::string w(s.substr(i, j - i));
      advance(j - i);
      emit(std::isupper(static_cast<unsigned char>(c)) ? Tok::UpperWord : Tok::LowerWord, w, l, cc);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '.' || s[j] == '/')) {
        if (s[j] == '.' && (j + 1 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[j + 1])))) break;
        ++j;
      }
      std::string w(s.substr(i, j - i));
      advance(j - i);
      emit(Tok::Number, w, l, cc);
      continue;
    }
    if (c == '$') {
      std::size_t j = i + 1;
      while (j < s.size() && (word_char(s[j]) || s[j] == '$')) ++j;
      std::string w(s.substr(i, j - i));
      advance(j - i);
      emit(Tok::DollarWord, w, l, cc);
      continue;
    }
    if (c == '\'' || c == '"') {
      std::string w;
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != c) {
        if (s[j] == '\\' && j + 1 < s.size()) ++j;
        if (s[j] == '\n') throw SyntaxError("newline in quoted token", l, cc);
        w += s[j++];
      }
      if (j >= s.size()) throw SyntaxError("unterminated quoted token", l, cc);
      advance(j + 1 - i);
      emit(c == '\'' ? Tok::Quoted : Tok::String, w, l, cc);
      continue;
    }
    if (c == '?' && i + 1 < s.size() && std::isalpha(static_cast<unsigned char>(s[i + 1]))) {
      std::size_t j = i + 1;
      while (j < s.size() && word_char(s[j])) ++j;
      std::string w(s.substr(i + 1, j - i - 1));
      advance(j - i);
      emit(Tok::Meta, w, l, cc);
      continue;
    }
    auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
    static const std::pair<std::string_view, Tok> ops[] = {
        {"-->", Tok::Rewrite}, {"==>", Tok::RewritePos},
        {"<=>", Tok::Iff}, {"<~>", Tok::Xor},    {"=>", Tok::Implies}, {"<=", Tok::RevImplies},
        {"~|", Tok::Nor},  {"~&", Tok::Nand},    {"!=", Tok::Neq},     {"(", Tok::LParen},
        {")", Tok::RParen}, {"[", Tok::LBracket}, {"]", Tok::RBracket}, {"{", Tok::LBrace},
        {"}", Tok::RBrace}, {",", Tok::Comma},    {":", Tok::Colon},    {".", Tok::Dot},
        {"&", Tok::And},   {"|", Tok::Or},       {"~", Tok::Not},      {"=", Tok::Eq},
        {"!", Tok::Bang},  {"?", Tok::Question}, {"@", Tok::At},
    };
    bool matched = false;
    for (const auto& [text, kind] : ops) {
      if (starts(text)) {
        advance(text.size());
        emit(kind, std::string(text), l, cc);
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError(std::string("unexpected character '") + c + "'", l, cc);
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

Parser::Parser(std::vector<Token> tokens, ParseOptions opts) : toks_(std::move(tokens)), opts_(std::move(opts)) {
  if (toks_.empty() || toks_.back().kind != Tok::End) toks_.push_back(Token{});
}

const Token& Parser::peek(std::size_t ahead) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

Token Parser::next() {
  Token t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

bool Parser::accept(Tok k) {
  if (peek().kind != k) return false;
  next();
  return true;
}

Token Parser::expect(Tok k, const char* what) {
  if (peek().kind != k) fail(std::string("expected ") + what);
  return next();
}

void Parser::fail(const std::string& msg) const { fail_at(peek(), msg); }

void Parser::fail_at(const Token& t, const std::string& msg) const {
  std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  throw SyntaxError(msg + ", found " + found, t.line, t.column);
}

bool Parser::bound(const std::string& name) const {
  return std::find(scope_.begin(), scope_.end(), name) != scope_.end();
}

Formula Parser::formula() {
  Formula lhs = unitary();
  switch (peek().kind) {
    case Tok::And: {
      std::vector<Formula> parts{lhs};
      while (accept(Tok::And)) parts.push_back(unitary());
      return conj_all(parts);
    }
    case Tok::Or: {
      std::vector<Formula> parts{lhs};
      while (accept(Tok::Or)) parts.push_back(unitary());
      return disj_all(parts);
    }
    case Tok::Implies: next(); return Formula::implies(lhs, unitary());
    case Tok::RevImplies: next(); return Formula::implies(unitary(), lhs);
    case Tok::Iff: next(); return Formula::iff(lhs, unitary());
    case Tok::Xor: next(); return Formula::negate(Formula::iff(lhs, unitary()));
    case Tok::Nor: next(); return Formula::negate(Formula::disj(lhs, unitary()));
    case Tok::Nand: next(); return Formula::negate(Formula::conj(lhs, unitary()));
    default: return lhs;
  }
}

std::vector<std::string> Parser::binder_list() {
  expect(Tok::LBracket, "'['");
  std::vector<std::string> names;
  do {
    Token t = next();
    if (t.kind != Tok::UpperWord && t.kind != Tok::LowerWord) fail_at(t, "expected variable");
    names.push_back(t.text);
  } while (accept(Tok::Comma));
  expect(Tok::RBracket, "']'");
  expect(Tok::Colon, "':'");
  return names;
}

Formula Parser::unitary() {
  const Token& t = peek();
  switch (t.kind) {
    case Tok::Not: next(); return Formula::negate(unitary());
    case Tok::Bang:
    case Tok::Question: {
      bool all = next().kind == Tok::Bang;
      auto names = binder_list();
      for (const auto& n : names) scope_.push_back(n);
      Formula body = unitary();
      scope_.resize(scope_.size() - names.size());
      for (std::size_t i = names.size(); i-- > 0;)
        body = all ? Formula::forall(names[i], body) : Formula::exists(names[i], body);
      return body;
    }
    case Tok::LParen: {
      next();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    default: return atomic();
  }
}

Formula Parser::atomic() {
  const Token& t = peek();
  if (t.kind == Tok::DollarWord) {
    if (t.text == "$true") {
      next();
      return Formula::top();
    }
    if (t.text == "$false") {
      next();
      return Formula::bottom();
    }
    fail("unsupported defined word");
  }
  Token start = peek();
  Term lhs = term_in_atom();
  if (accept(Tok::Eq)) return Formula::equal(lhs, term());
  if (accept(Tok::Neq)) return Formula::negate(Formula::equal(lhs, term()));
  if (!lhs.is_app()) fail_at(start, "expected atomic formula");
  return Formula::atom(lhs.name(), lhs.args());
}

// In atom position a lower-case name is a predicate even when it is a pattern variable.
Term Parser::term_in_atom() {
  const Token& t = peek();
  if ((t.kind == Tok::LowerWord || t.kind == Tok::Quoted) && peek(1).kind == Tok::LParen) {
    std::string name = next().text;
    next();
    std::vector<Term> args;
    do args.push_back(term());
    while (accept(Tok::Comma));
    expect(Tok::RParen, "')'");
    return Term::app(name, std::move(args));
  }
  if ((t.kind == Tok::LowerWord || t.kind == Tok::Quoted) && peek(1).kind != Tok::Eq && peek(1).kind != Tok::Neq) {
    return Term::constant(next().text);
  }
  return term();
}

Term Parser::term() {
  Token t = next();
  switch (t.kind) {
    case Tok::LowerWord:
    case Tok::Quoted: {
      if (peek().kind == Tok::LParen) {
        next();
        std::vector<Term> args;
        do args.push_back(term());
        while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
        return Term::app(t.text, std::move(args));
      }
      if (t.kind == Tok::LowerWord && (bound(t.text) || opts_.pattern_vars.count(t.text))) return Term::var(t.text);
      if (t.kind == Tok::Quoted && opts_.witnesses && t.text.starts_with('$')) {
        auto it = opts_.witnesses->find(t.text);
        if (it == opts_.witnesses->end()) fail_at(t, "unknown witness " + t.text);
        return it->second;
      }
      return Term::constant(t.text);
    }
    case Tok::UpperWord:
      if (bound(t.text) || opts_.free_upper_vars) return Term::var(t.text);
      fail_at(t, "unbound variable");
    case Tok::Meta: {
      auto us = t.text.rfind('_');
      if (us == std::string::npos || us + 1 >= t.text.size() ||
          !std::all_of(t.text.begin() + us + 1, t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        fail_at(t, "metavariable needs a numeric suffix");
      return Term::meta(std::stoi(t.text.substr(us + 1)), t.text.substr(0, us));
    }
    case Tok::At: {
      auto names = binder_list();
      if (names.size() != 1) fail_at(t, "epsilon binds exactly one variable");
      scope_.push_back(names[0]);
      Formula body = unitary();
      scope_.pop_back();
      return Term::epsilon(names[0], body);
    }
    case Tok::LBrace: {
      auto names = binder_list();
      for (const auto& n : names) scope_.push_back(n);
      Term pat = term();
      expect(Tok::Or, "'|'");
      Formula body = formula();
      expect(Tok::RBrace, "'}'");
      scope_.resize(scope_.size() - names.size());
      return Term::comprehension(names, pat, body);
    }
    case Tok::Number: fail_at(t, "numbers are not supported");
    case Tok::String: fail_at(t, "strings are not supported");
    case Tok::DollarWord: fail_at(t, "defined terms are not supported");
    default: fail_at(t, "expected term");
  }
}

Formula parse_formula(std::string_view text, const ParseOptions& opts) {
  Parser p(tokenize(text), opts);
  Formula f = p.formula();
  if (!p.at_end()) p.fail("trailing input");
  return f;
}

Term parse_term(std::string_view text, const ParseOptions& opts) {
  Parser p(tokenize(text), opts);
  Term t = p.term();
  if (!p.at_end()) p.fail("trailing input");
  return t;
}

}  // namespace supded

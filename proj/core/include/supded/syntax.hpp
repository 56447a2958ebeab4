#pragma once

// Reader for the formula syntax shared by TPTP problems, theory files, rule
// tables and proof traces. It is FOF extended with metavariables (?Name_id),
// epsilon terms (@[X]: phi) and comprehension terms ({[X,Y]: pat | phi}).

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "supded/logic.hpp"

namespace supded {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class Tok {
  LowerWord,
  UpperWord,
  Quoted,
  DollarWord,
  Number,
  String,
  Meta,  // ?Name_id
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Dot,
  And,
  Or,
  Not,
  Implies,
  RevImplies,
  Iff,
  Xor,
  Nor,
  Nand,
  Eq,
  Neq,
  Bang,
  Question,
  At,
  Rewrite,     // -->  (theory files)
  RewritePos,  // ==>  positive-only rewrite
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view text);

struct ParseOptions {
  // Unbound upper-case names become free variables instead of an error.
  bool free_upper_vars = false;
  // Lower-case names read as free variables (rule pattern variables).
  std::set<std::string> pattern_vars;
  // Quoted '$name' constants resolve through this table (trace witnesses).
  const std::map<std::string, Term>* witnesses = nullptr;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, ParseOptions opts = {});

  Formula formula();
  Term term();

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool accept(Tok k);
  Token expect(Tok k, const char* what);
  bool at_end() const { return peek().kind == Tok::End; }
  [[noreturn]] void fail(const std::string& msg) const;
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const;

 private:
  Formula unitary();
  Formula atomic();
  Term term_in_atom();
  std::vector<std::string> binder_list();
  bool bound(const std::string& name) const;

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions opts_;
  std::vector<std::string> scope_;
};

Formula parse_formula(std::string_view text, const ParseOptions& opts = {});
Term parse_term(std::string_view text, const ParseOptions& opts = {});

}  // namespace supded

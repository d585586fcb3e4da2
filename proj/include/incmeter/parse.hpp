#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "incmeter/model.hpp"
#include "incmeter/violations.hpp"

namespace incmeter {

struct SourceSpan {
  std::string file;
  int line = 1;       // 1-based
  int col_begin = 1;  // 1-based, inclusive
  int col_end = 1;    // 1-based, inclusive

  std::string to_string() const {
    std::string out = file.empty() ? "<input>" : file;
    out += ":" + std::to_string(line) + ":" + std::to_string(col_begin);
    if (col_end > col_begin) out += "-" + std::to_string(col_end);
    return out;
  }
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message)
      : Error(span.to_string() + ": error: " + message), span_(std::move(span)) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

struct Diagnostic {
  SourceSpan span;
  std::string message;  // warnings only; errors are thrown
};

namespace detail {

struct Token {
  enum class Kind {
    Ident,      // [A-Za-z_][A-Za-z0-9_]*
    Number,     // [0-9]+
    Quoted,     // "..." with \" and \\ escapes; text holds the unescaped value
    Directive,  // @ident; text holds the name without '@'
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Star,
    Slash,
    LBracket,
    RBracket,
    Arrow,      // ->
    BodyArrow,  // <-
    Neq,        // !=
    End,
  };
  Kind kind = Kind::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  Token next() {
    skip_trivia();
    Token tok;
    tok.span = here(1);
    if (pos_ >= text_.size()) {
      tok.kind = Token::Kind::End;
      return tok;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        advance();
      tok.kind = Token::Kind::Ident;
      tok.text = std::string(text_.substr(start, pos_ - start));
      tok.span.col_end = col_ - 1;
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        advance();
      tok.kind = Token::Kind::Number;
      tok.text = std::string(text_.substr(start, pos_ - start));
      tok.span.col_end = col_ - 1;
      return tok;
    }
    if (c == '"') {
      advance();
      std::string value;
      while (true) {
        if (pos_ >= text_.size() || text_[pos_] == '\n')
          throw ParseError(span_from(tok.span), "unterminated string");
        char d = text_[pos_];
        advance();
        if (d == '"') break;
        if (d == '\\') {
          if (pos_ >= text_.size())
            throw ParseError(span_from(tok.span), "unterminated string");
          char e = text_[pos_];
          advance();
          if (e == '"' || e == '\\')
            value.push_back(e);
          else
            throw ParseError(here(1), std::string("unknown escape \\") + e);
        } else {
          value.push_back(d);
        }
      }
      tok.kind = Token::Kind::Quoted;
      tok.text = std::move(value);
      tok.span.col_end = col_ - 1;
      return tok;
    }
    if (c == '@') {
      advance();
      if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
                                    text_[pos_] == '_'))
        throw ParseError(tok.span, "expected directive name after '@'");
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        advance();
      tok.kind = Token::Kind::Directive;
      tok.text = std::string(text_.substr(start, pos_ - start));
      tok.span.col_end = col_ - 1;
      return tok;
    }
    if (c == '<' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
      advance();
      advance();
      tok.kind = Token::Kind::BodyArrow;
      tok.span.col_end = col_ - 1;
      return tok;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      advance();
      advance();
      tok.kind = Token::Kind::Arrow;
      tok.span.col_end = col_ - 1;
      return tok;
    }
    if (c == '!' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
      advance();
      advance();
      tok.kind = Token::Kind::Neq;
      tok.span.col_end = col_ - 1;
      return tok;
    }
    advance();
    switch (c) {
      case '(': tok.kind = Token::Kind::LParen; return tok;
      case ')': tok.kind = Token::Kind::RParen; return tok;
      case ',': tok.kind = Token::Kind::Comma; return tok;
      case '.': tok.kind = Token::Kind::Dot; return tok;
      case ':': tok.kind = Token::Kind::Colon; return tok;
      case '*': tok.kind = Token::Kind::Star; return tok;
      case '/': tok.kind = Token::Kind::Slash; return tok;
      case '[': tok.kind = Token::Kind::LBracket; return tok;
      case ']': tok.kind = Token::Kind::RBracket; return tok;
      default:
        throw ParseError(tok.span, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SourceSpan here(int width) const {
    return SourceSpan{file_, line_, col_, col_ + width - 1};
  }
  SourceSpan span_from(const SourceSpan& start) const {
    SourceSpan s = start;
    s.col_end = s.line == line_ ? col_ - 1 : s.col_begin;
    return s;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class TokenStream {
 public:
  TokenStream(std::string_view text, std::string file) : lexer_(text, std::move(file)) {
    lookahead_ = lexer_.next();
  }

  const Token& peek() const { return lookahead_; }

  Token next() {
    Token tok = std::move(lookahead_);
    lookahead_ = lexer_.next();
    return tok;
  }

  Token expect(Token::Kind kind, const std::string& what) {
    if (lookahead_.kind != kind)
      throw ParseError(lookahead_.span, "expected " + what + describe(lookahead_));
    return next();
  }

 private:
  static std::string describe(const Token& tok) {
    if (tok.kind == Token::Kind::End) return ", got end of input";
    if (!tok.text.empty()) return ", got '" + tok.text + "'";
    return "";
  }

  Lexer lexer_;
  Token lookahead_;
};

// Variables are lowercase-initial identifiers; anything else that can
// appear bare (uppercase-initial identifiers, numbers) is a constant.
inline bool is_variable_token(const Token& tok) {
  return tok.kind == Token::Kind::Ident && std::islower(static_cast<unsigned char>(tok.text[0]));
}

}  // namespace detail

// Parses an instance file. Grammar, one fact per line by convention though
// the parser is newline-insensitive:
//
//   % comment until end of line
//   @schema P/3            declares P with arity 3 (optional)
//   P(c1,...,cn).          fact; constants are bare tokens or "quoted"
//   *P(c1,...,cn).         fact marked exogenous
//
// Arity is inferred from the first occurrence of each predicate unless
// declared; later occurrences must agree. Duplicate facts collapse to the
// first occurrence with a warning.
inline DatabaseInstance parse_instance(std::string_view text, const std::string& file = "",
                                       std::vector<Diagnostic>* warnings = nullptr) {
  detail::TokenStream tokens(text, file);
  using Tok = detail::Token;

  Schema schema;
  std::set<std::string> declared;
  std::map<std::string, SourceSpan> first_use;
  std::vector<RawTuple> raw;
  std::vector<SourceSpan> raw_spans;

  auto constant = [&]() -> std::string {
    const Tok& tok = tokens.peek();
    if (tok.kind == Tok::Kind::Ident || tok.kind == Tok::Kind::Number ||
        tok.kind == Tok::Kind::Quoted)
      return tokens.next().text;
    throw ParseError(tok.span, "expected constant" + std::string(tok.text.empty() ? "" : ", got '" + tok.text + "'"));
  };

  while (tokens.peek().kind != Tok::Kind::End) {
    if (tokens.peek().kind == Tok::Kind::Directive) {
      Tok directive = tokens.next();
      if (directive.text != "schema")
        throw ParseError(directive.span, "unknown directive @" + directive.text);
      Tok pred = tokens.expect(Tok::Kind::Ident, "predicate name");
      tokens.expect(Tok::Kind::Slash, "'/'");
      Tok arity = tokens.expect(Tok::Kind::Number, "arity");
      int n = std::stoi(arity.text);
      if (n < 1) throw ParseError(arity.span, "arity must be >= 1");
      if (auto existing = schema.arity(pred.text); existing && *existing != n)
        throw ParseError(pred.span, "arity conflict: " + pred.text + " already has arity " +
                                        std::to_string(*existing));
      schema.declare(pred.text, n);
      declared.insert(pred.text);
      continue;
    }

    bool exogenous = false;
    SourceSpan fact_span = tokens.peek().span;
    if (tokens.peek().kind == Tok::Kind::Star) {
      tokens.next();
      exogenous = true;
    }
    Tok pred = tokens.expect(Tok::Kind::Ident, "predicate name");
    tokens.expect(Tok::Kind::LParen, "'('");
    std::vector<std::string> args;
    args.push_back(constant());
    while (tokens.peek().kind == Tok::Kind::Comma) {
      tokens.next();
      args.push_back(constant());
    }
    tokens.expect(Tok::Kind::RParen, "')'");
    tokens.expect(Tok::Kind::Dot, "'.'");

    int n = static_cast<int>(args.size());
    if (auto existing = schema.arity(pred.text)) {
      if (*existing != n) {
        std::string origin = declared.count(pred.text)
                                 ? "declared arity " + std::to_string(*existing)
                                 : "arity " + std::to_string(*existing) + " inferred at " +
                                       first_use.at(pred.text).to_string();
        throw ParseError(pred.span, "arity conflict: " + pred.text + "/" + std::to_string(n) +
                                        " vs " + origin);
      }
    } else {
      schema.declare(pred.text, n);
      first_use.emplace(pred.text, pred.span);
    }
    raw.push_back(RawTuple{pred.text, std::move(args), exogenous});
    raw_spans.push_back(fact_span);
  }

  TidAssignment assigned = assign_tids(schema, raw);
  if (warnings) {
    for (std::size_t idx : assigned.dropped_duplicates) {
      std::string rendered = raw[idx].predicate + "(";
      for (std::size_t i = 0; i < raw[idx].args.size(); ++i) {
        if (i) rendered += ",";
        rendered += raw[idx].args[i];
      }
      rendered += ")";
      warnings->push_back(
          Diagnostic{raw_spans[idx], "duplicate fact " + rendered + " ignored"});
    }
  }
  return assigned.instance;
}

// Parses a constraint file against a schema (needed to validate atom
// arities and to expand FDs). Grammar:
//
//   dc name: <- P(x), Q(x,y).            denial constraint
//   dc name: <- P(v,z1), P(v,z2), z1 != z2.
//   fd name: R[1,2 -> 3].                FD shorthand, 1-based positions
//
// Lowercase-initial bare tokens are variables; constants must be quoted
// or non-lowercase-initial. FDs are compiled to denial form immediately.
inline ConstraintSet parse_constraints(std::string_view text, const Schema& schema,
                                       const std::string& file = "") {
  detail::TokenStream tokens(text, file);
  using Tok = detail::Token;

  ConstraintSet out;
  std::set<std::string> names;

  auto term = [&]() -> Term {
    const Tok& tok = tokens.peek();
    if (tok.kind == Tok::Kind::Quoted) return Term::constant(tokens.next().text);
    if (tok.kind == Tok::Kind::Number) return Term::constant(tokens.next().text);
    if (tok.kind == Tok::Kind::Ident) {
      Tok t = tokens.next();
      return detail::is_variable_token(t) ? Term::var(t.text) : Term::constant(t.text);
    }
    throw ParseError(tok.span, "expected term");
  };

  while (tokens.peek().kind != Tok::Kind::End) {
    Tok keyword = tokens.expect(Tok::Kind::Ident, "'dc' or 'fd'");
    if (keyword.text != "dc" && keyword.text != "fd")
      throw ParseError(keyword.span, "expected 'dc' or 'fd', got '" + keyword.text + "'");
    Tok name = tokens.expect(Tok::Kind::Ident, "constraint name");
    if (!names.insert(name.text).second)
      throw ParseError(name.span, "duplicate constraint name " + name.text);
    tokens.expect(Tok::Kind::Colon, "':'");

    if (keyword.text == "dc") {
      Tok arrow = tokens.expect(Tok::Kind::BodyArrow, "'<-'");
      DenialConstraint dc;
      dc.name = name.text;
      std::vector<std::pair<SourceSpan, std::pair<Term, Term>>> diseqs;
      if (tokens.peek().kind == Tok::Kind::Dot)
        throw ParseError(arrow.span, "empty constraint body");
      while (true) {
        const Tok& head = tokens.peek();
        if (head.kind == Tok::Kind::Ident) {
          // atom (ident followed by '(') or bare term in a disequality
          Tok first = tokens.next();
          if (tokens.peek().kind == Tok::Kind::LParen) {
            tokens.next();
            ConstraintAtom atom;
            atom.predicate = first.text;
            atom.terms.push_back(term());
            while (tokens.peek().kind == Tok::Kind::Comma) {
              tokens.next();
              atom.terms.push_back(term());
            }
            tokens.expect(Tok::Kind::RParen, "')'");
            auto arity = schema.arity(atom.predicate);
            if (!arity)
              throw ParseError(first.span, "undeclared predicate " + atom.predicate +
                                               " (declare it with @schema in the instance file)");
            if (*arity != static_cast<int>(atom.terms.size()))
              throw ParseError(first.span, "arity mismatch: " + atom.predicate + " has arity " +
                                               std::to_string(*arity) + ", atom has " +
                                               std::to_string(atom.terms.size()) + " term(s)");
            dc.atoms.push_back(std::move(atom));
          } else {
            Term lhs = detail::is_variable_token(first) ? Term::var(first.text)
                                                        : Term::constant(first.text);
            Tok neq = tokens.expect(Tok::Kind::Neq, "'!=' or '('");
            Term rhs = term();
            diseqs.push_back({neq.span, {std::move(lhs), std::move(rhs)}});
          }
        } else {
          Term lhs = term();
          Tok neq = tokens.expect(Tok::Kind::Neq, "'!='");
          Term rhs = term();
          diseqs.push_back({neq.span, {std::move(lhs), std::move(rhs)}});
        }
        if (tokens.peek().kind == Tok::Kind::Comma) {
          tokens.next();
          continue;
        }
        tokens.expect(Tok::Kind::Dot, "',' or '.'");
        break;
      }
      if (dc.atoms.empty())
        throw ParseError(name.span, "constraint " + dc.name + " has no atoms");

      std::set<std::string> atom_vars = [&] {
        DenialConstraint probe = dc;
        return probe.atom_variables();
      }();
      std::set<std::string> unsafe;
      SourceSpan unsafe_span;
      for (const auto& [span, pair] : diseqs) {
        for (const Term* t : {&pair.first, &pair.second}) {
          if (t->is_var() && !atom_vars.count(t->text)) {
            if (unsafe.empty()) unsafe_span = span;
            unsafe.insert(t->text);
          }
        }
        dc.disequalities.push_back(pair);
      }
      if (!unsafe.empty()) {
        std::string list;
        for (const std::string& v : unsafe) {
          if (!list.empty()) list += ", ";
          list += v;
        }
        throw ParseError(unsafe_span, "unsafe variable" + std::string(unsafe.size() > 1 ? "s " : " ") +
                                          list + " (must occur in an atom)");
      }
      out.dcs.push_back(std::move(dc));
    } else {
      FunctionalDependency fd;
      fd.name = name.text;
      Tok pred = tokens.expect(Tok::Kind::Ident, "predicate name");
      fd.predicate = pred.text;
      tokens.expect(Tok::Kind::LBracket, "'['");
      Tok pos = tokens.expect(Tok::Kind::Number, "attribute position");
      fd.lhs.push_back(std::stoi(pos.text));
      while (tokens.peek().kind == Tok::Kind::Comma) {
        tokens.next();
        pos = tokens.expect(Tok::Kind::Number, "attribute position");
        fd.lhs.push_back(std::stoi(pos.text));
      }
      tokens.expect(Tok::Kind::Arrow, "'->'");
      pos = tokens.expect(Tok::Kind::Number, "attribute position");
      fd.rhs = std::stoi(pos.text);
      tokens.expect(Tok::Kind::RBracket, "']'");
      tokens.expect(Tok::Kind::Dot, "'.'");

      DenialConstraint compiled;
      try {
        compiled = compile_fd_to_dc(fd, schema);
      } catch (const Error& e) {
        throw ParseError(pred.span, e.what());
      }
      out.original_fds.push_back(std::move(fd));
      out.dcs.push_back(std::move(compiled));
    }
  }
  return out;
}

}  // namespace incmeter

#pragma once

#include <charconv>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qvl/errors.hpp"
#include "qvl/kb.hpp"

namespace qvl::text {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier, punctuation, string contents or number spelling
  double number = 0.0;
  SourceSpan span;
};

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return quote(t.text);
    default: return "'" + t.text + "'";
  }
}

/// Tokenizer shared by all four text formats. `//` comments run to end of line.
/// Punctuation is single characters except `=>`.
inline std::vector<Token> tokenize(std::string_view src, const std::string& file) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  std::size_t end_line = 1, end_col = 1;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  auto is_alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    Token tok;
    tok.span = SourceSpan{file, line, col};
    if (is_alpha(c)) {
      std::size_t j = i;
      while (j < src.size() && (is_alpha(src[j]) || is_digit(src[j]))) ++j;
      tok.kind = Tok::Ident;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (is_digit(c) || (c == '-' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      std::size_t j = i + (c == '-' ? 1 : 0);
      while (j < src.size() && is_digit(src[j])) ++j;
      if (j + 1 < src.size() && src[j] == '.' && is_digit(src[j + 1])) {
        ++j;
        while (j < src.size() && is_digit(src[j])) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && is_digit(src[k])) {
          while (k < src.size() && is_digit(src[k])) ++k;
          j = k;
        }
      }
      tok.kind = Tok::Number;
      tok.text = std::string(src.substr(i, j - i));
      auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
      if (res.ec != std::errc{}) throw ParseError(tok.span, "number", "'" + tok.text + "'");
      advance(j - i);
    } else if (c == '"') {
      tok.kind = Tok::String;
      advance();
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '"') {
          advance();
          closed = true;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && i + 1 < src.size()) {
          char e = src[i + 1];
          tok.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
          advance(2);
          continue;
        }
        tok.text += d;
        advance();
      }
      if (!closed) throw ParseError(tok.span, "closing '\"'", "end of line");
    } else if (c == '=' && i + 1 < src.size() && src[i + 1] == '>') {
      tok.kind = Tok::Punct;
      tok.text = "=>";
      advance(2);
    } else if (std::string_view("{}(),:;.#=?-").find(c) != std::string_view::npos) {
      tok.kind = Tok::Punct;
      tok.text = std::string(1, c);
      advance();
    } else {
      throw ParseError(tok.span, "token", "'" + std::string(1, c) + "'");
    }
    out.push_back(std::move(tok));
    end_line = line;
    end_col = col;
  }
  // End of input is reported right after the last token, not after trailing blank lines.
  Token end;
  end.span = SourceSpan{file, end_line, end_col};
  out.push_back(std::move(end));
  return out;
}

using Keywords = std::set<std::string, std::less<>>;

/// Recursive-descent helper over a token vector. Reserved words cannot be used as unqualified
/// names; they remain available in qualified form (`ns:class`).
class Cursor {
public:
  Cursor(std::string_view src, const std::string& file, const Keywords* reserved)
      : toks_(tokenize(src, file)), reserved_(reserved) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return t.kind == Tok::Punct && t.text == p;
  }
  bool is_keyword(std::string_view k, std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return t.kind == Tok::Ident && t.text == k;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  bool accept_keyword(std::string_view k) {
    if (!is_keyword(k)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(const std::string& expected) const { throw ParseError(peek().span, expected, describe(peek())); }

  Token expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("'" + std::string(p) + "'");
    return next();
  }
  Token expect_keyword(std::string_view k) {
    if (!is_keyword(k)) fail("'" + std::string(k) + "'");
    return next();
  }
  bool is_plain_ident(std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return t.kind == Tok::Ident && !(reserved_ && reserved_->count(t.text));
  }
  Token expect_ident(const std::string& what = "identifier") {
    if (!is_plain_ident()) fail(what);
    return next();
  }
  Token expect_number() {
    if (peek().kind != Tok::Number) fail("number");
    return next();
  }
  Token expect_string() {
    if (peek().kind != Tok::String) fail("string");
    return next();
  }

  /// QNAME := [ IDENT ":" ] IDENT
  Name qname(const std::string& default_ns, const std::string& what = "name") {
    const auto& t = peek();
    if (t.kind == Tok::Ident && is_punct(":", 1) && peek(2).kind == Tok::Ident) {
      Name n{next().text, ""};
      next();
      n.local = next().text;
      return n;
    }
    return Name{default_ns, expect_ident(what).text};
  }
  bool at_qname() const {
    return is_plain_ident() || (peek().kind == Tok::Ident && is_punct(":", 1) && peek(2).kind == Tok::Ident);
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Keywords* reserved_;
};

}  // namespace qvl::text

#pragma once

#include <string>
#include <vector>

#include "ast.hpp"
#include "diagnostics.hpp"

namespace symm {

enum class TokenKind {
  Ident,
  KwCbv,
  KwCbn,
  KwData,
  KwCodata,
  KwType,
  KwWith,
  KwMatch,
  KwMain,
  KwMu,
  KwPrd,
  KwCon,
  KwDone,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Semicolon,
  Comma,
  Colon,
  Assign,     // :=
  FatArrow,   // =>
  CutOp,      // >>
  EndOfFile,
};

struct Token {
  TokenKind kind;
  std::string text;
  Span span;
};

bool is_reserved_word(const std::string& word);

/// Tokenizes `source`. Lexical errors are reported through `diagnostics`;
/// the returned stream always ends with an EndOfFile token.
std::vector<Token> lex(const std::string& source, const std::string& file,
                       std::vector<Diagnostic>& diagnostics);

}  // namespace symm

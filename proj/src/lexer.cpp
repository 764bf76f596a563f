#include "lexer.hpp"

#include <cctype>
#include <map>

namespace symm {

namespace {

const std::map<std::string, TokenKind>& keyword_table() {
  static const std::map<std::string, TokenKind> table = {
      {"cbv", TokenKind::KwCbv},       {"cbn", TokenKind::KwCbn},
      {"data", TokenKind::KwData},     {"codata", TokenKind::KwCodata},
      {"type", TokenKind::KwType},     {"with", TokenKind::KwWith},
      {"match", TokenKind::KwMatch},   {"main", TokenKind::KwMain},
      {"mu", TokenKind::KwMu},         {"prd", TokenKind::KwPrd},
      {"con", TokenKind::KwCon},       {"Done", TokenKind::KwDone},
  };
  return table;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }

bool ident_continue(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

bool is_reserved_word(const std::string& word) {
  return keyword_table().count(word) > 0;
}

std::vector<Token> lex(const std::string& source, const std::string& file,
                       std::vector<Diagnostic>& diagnostics) {
  std::vector<Token> tokens;
  size_t i = 0;
  int line = 1;
  int col = 1;

  auto here = [&](int len) {
    return Span{line, col, line, col + len - 1};
  };
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (source[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto push = [&](TokenKind kind, const std::string& text) {
    tokens.push_back(Token{kind, text, here(static_cast<int>(text.size()))});
    advance(text.size());
  };

  while (i < source.size()) {
    char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < source.size() && source[i + 1] == '-') {
      while (i < source.size() && source[i] != '\n') advance(1);
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < source.size() && ident_continue(source[j])) ++j;
      std::string word = source.substr(i, j - i);
      auto it = keyword_table().find(word);
      push(it == keyword_table().end() ? TokenKind::Ident : it->second, word);
      continue;
    }
    switch (c) {
      case '{': push(TokenKind::LBrace, "{"); continue;
      case '}': push(TokenKind::RBrace, "}"); continue;
      case '(': push(TokenKind::LParen, "("); continue;
      case ')': push(TokenKind::RParen, ")"); continue;
      case ';': push(TokenKind::Semicolon, ";"); continue;
      case ',': push(TokenKind::Comma, ","); continue;
      case ':':
        if (i + 1 < source.size() && source[i + 1] == '=') {
          push(TokenKind::Assign, ":=");
        } else {
          push(TokenKind::Colon, ":");
        }
        continue;
      case '=':
        if (i + 1 < source.size() && source[i + 1] == '>') {
          push(TokenKind::FatArrow, "=>");
          continue;
        }
        break;
      case '>':
        if (i + 1 < source.size() && source[i + 1] == '>') {
          push(TokenKind::CutOp, ">>");
          continue;
        }
        break;
      default:
        break;
    }
    diagnostics.push_back(Diagnostic{Severity::Error,
                                     std::string("unexpected character '") +
                                         c + "'",
                                     file, here(1)});
    advance(1);
  }

  tokens.push_back(Token{TokenKind::EndOfFile, "", Span{line, col, line, col}});
  return tokens;
}

}  // namespace symm

// Copyright 2026 The Cobalt Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cobalt/lexer.hpp"

#include <cctype>

namespace cobalt {

Lexer::Lexer(const std::string& text, std::string filename) : filename_(std::move(filename)) { tokenize(text); }

const Token& Lexer::peek(int ahead) const {
  size_t i = cur_ + ahead;
  if (i >= toks_.size()) i = toks_.size() - 1;
  return toks_[i];
}

Token Lexer::next() {
  Token t = peek();
  if (cur_ + 1 < toks_.size()) cur_++;
  return t;
}

void Lexer::fail(const std::string& kind, const std::string& msg) const { fail_at(kind, peek().pos, msg); }

void Lexer::fail_at(const std::string& kind, Pos p, const std::string& msg) const {
  throw ParseError(kind, p, filename_ + ":" + std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg);
}

static bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
static bool ident_char(char c) { return std::isalnum((unsigned char)c) || c == '_' || c == '\''; }

void Lexer::tokenize(const std::string& s) {
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok t, std::string text, Pos p) { toks_.push_back(Token{t, std::move(text), p}); };
  while (i < s.size()) {
    char c = s[i];
    Pos p{line, col};
    auto adv = [&](size_t n) {
      for (size_t j = 0; j < n; j++) {
        if (s[i] == '\n') {
          line++;
          col = 1;
        } else {
          col++;
        }
        i++;
      }
    };
    if (c == '\n' || std::isspace((unsigned char)c)) {
      adv(1);
      continue;
    }
    // (* comments, nested *)
    if (c == '(' && i + 1 < s.size() && s[i + 1] == '*') {
      int depth = 1;
      adv(2);
      while (i < s.size() && depth > 0) {
        if (s[i] == '(' && i + 1 < s.size() && s[i + 1] == '*') {
          depth++;
          adv(2);
        } else if (s[i] == '*' && i + 1 < s.size() && s[i + 1] == ')') {
          depth--;
          adv(2);
        } else {
          adv(1);
        }
      }
      if (depth > 0) throw ParseError("SyntaxError", p, filename_ + ":" + std::to_string(p.line) + ":" + std::to_string(p.col) + ": unterminated comment");
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < s.size() && ident_char(s[j])) j++;
      push(Tok::Ident, s.substr(i, j - i), p);
      adv(j - i);
      continue;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < s.size() && std::isdigit((unsigned char)s[j])) j++;
      if (j < s.size() && s[j] == '.' && j + 1 < s.size() && std::isdigit((unsigned char)s[j + 1])) {
        j++;
        while (j < s.size() && std::isdigit((unsigned char)s[j])) j++;
        push(Tok::Float, s.substr(i, j - i), p);
      } else {
        push(Tok::Int, s.substr(i, j - i), p);
      }
      adv(j - i);
      continue;
    }
    if (c == '"') {
      size_t j = i + 1;
      while (j < s.size() && s[j] != '"') j++;
      if (j >= s.size()) throw ParseError("SyntaxError", p, filename_ + ":" + std::to_string(p.line) + ":" + std::to_string(p.col) + ": unterminated string");
      push(Tok::Str, s.substr(i + 1, j - i - 1), p);
      adv(j - i + 1);
      continue;
    }
    auto two = i + 1 < s.size() ? s.substr(i, 2) : std::string();
    auto three = i + 2 < s.size() ? s.substr(i, 3) : std::string();
    // UTF-8 left arrow
    if (three == "\xe2\x86\x90") {
      push(Tok::Bind, "<-", p);
      adv(3);
      continue;
    }
    if (three == "<=>") {
      push(Tok::Iff, three, p);
      adv(3);
      continue;
    }
    if (two == "->") {
      push(Tok::Arrow, two, p);
      adv(2);
      continue;
    }
    if (two == "=>") {
      push(Tok::Implies, two, p);
      adv(2);
      continue;
    }
    if (two == "==") {
      push(Tok::Eq, two, p);
      adv(2);
      continue;
    }
    if (two == "/\\") {
      push(Tok::And, two, p);
      adv(2);
      continue;
    }
    if (two == "\\/") {
      push(Tok::Or, two, p);
      adv(2);
      continue;
    }
    if (two == "<-") {
      push(Tok::Bind, two, p);
      adv(2);
      continue;
    }
    if (two == "<=") {
      push(Tok::Le, two, p);
      adv(2);
      continue;
    }
    if (two == ">=") {
      push(Tok::Ge, two, p);
      adv(2);
      continue;
    }
    if (two == "??") {
      push(Tok::Hole, two, p);
      adv(2);
      continue;
    }
    switch (c) {
      case '(':
        push(Tok::LParen, "(", p);
        break;
      case ')':
        push(Tok::RParen, ")", p);
        break;
      case '[':
        push(Tok::LBrack, "[", p);
        break;
      case ']':
        push(Tok::RBrack, "]", p);
        break;
      case '{':
        push(Tok::LBrace, "{", p);
        break;
      case '}':
        push(Tok::RBrace, "}", p);
        break;
      case ':':
        push(Tok::Colon, ":", p);
        break;
      case ';':
        push(Tok::Semi, ";", p);
        break;
      case ',':
        push(Tok::Comma, ",", p);
        break;
      case '.':
        push(Tok::Dot, ".", p);
        break;
      case '|':
        push(Tok::Pipe, "|", p);
        break;
      case '\\':
        push(Tok::Backslash, "\\", p);
        break;
      case '=':
        push(Tok::Eq, "=", p);
        break;
      case '<':
        push(Tok::Lt, "<", p);
        break;
      case '>':
        push(Tok::Gt, ">", p);
        break;
      case '+':
        push(Tok::Plus, "+", p);
        break;
      case '-':
        push(Tok::Minus, "-", p);
        break;
      default:
        throw ParseError("SyntaxError", p, filename_ + ":" + std::to_string(p.line) + ":" + std::to_string(p.col) + ": unexpected character '" + std::string(1, c) + "'");
    }
    adv(1);
  }
  toks_.push_back(Token{Tok::Eof, "", Pos{line, col}});
}

}  // namespace cobalt

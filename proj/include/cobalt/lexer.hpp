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

#ifndef COBALT_LEXER_HPP
#define COBALT_LEXER_HPP

#include <string>
#include <vector>

#include "cobalt/speclang.hpp"

namespace cobalt {

enum class Tok {
  Ident,
  Int,
  Float,
  Str,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  Colon,
  Semi,
  Comma,
  Dot,
  Pipe,
  Backslash,
  Arrow,    // ->
  Implies,  // =>
  Iff,      // <=>
  And,  // conjunction connective
  Or,   // disjunction connective
  Eq,       // = or ==
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Bind,  // <- or the arrow character
  Hole,  // ??
  Eof,
};

struct Token {
  Tok t = Tok::Eof;
  std::string text;
  Pos pos;
};

// Lexes the whole input up front; parsers index into the token vector so
// backtracking is a cursor reset.
class Lexer {
 public:
  Lexer(const std::string& text, std::string filename);

  const Token& peek(int ahead = 0) const;
  Token next();
  size_t mark() const { return cur_; }
  void reset(size_t m) { cur_ = m; }
  const std::string& filename() const { return filename_; }

  [[noreturn]] void fail(const std::string& kind, const std::string& msg) const;
  [[noreturn]] void fail_at(const std::string& kind, Pos p, const std::string& msg) const;

 private:
  void tokenize(const std::string& text);

  std::vector<Token> toks_;
  size_t cur_ = 0;
  std::string filename_;
};

}  // namespace cobalt

#endif  // COBALT_LEXER_HPP

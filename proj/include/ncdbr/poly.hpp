// Copyright 2026 The ncdbr Authors
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

// Free (non-commutative) polynomials in z1..zd.
//
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := primary ('^' uint)*
//   primary := number ['i'] | 'i' | 'z' uint | '(' expr ')'
//
// Products concatenate words, so z1*z2 and z2*z1 stay distinct.

#pragma once

#include "ncdbr/nc_space.hpp"
#include "ncdbr/numerics.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ncdbr {

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t offset, const std::string& what)
      : Error(kind, what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Normal form: word -> coefficient, graded-lex ordered, no exact zeros.
struct FreePoly {
  std::map<Word, cplx, GradedLex> terms;

  bool operator==(const FreePoly& o) const { return terms == o.terms; }

  int max_variable() const {
    int mx = 0;
    for (const auto& [w, c] : terms)
      for (int l : w) mx = std::max(mx, l + 1);
    return mx;
  }

  void prune() {
    for (auto it = terms.begin(); it != terms.end();) it = it->second == cplx(0.0) ? terms.erase(it) : std::next(it);
  }

  static FreePoly constant(cplx c) {
    FreePoly p;
    p.terms[Word{}] = c;
    p.prune();
    return p;
  }

  static FreePoly variable(int letter) {
    FreePoly p;
    p.terms[Word{letter}] = 1.0;
    return p;
  }

  FreePoly operator+(const FreePoly& o) const {
    FreePoly r = *this;
    for (const auto& [w, c] : o.terms) r.terms[w] += c;
    r.prune();
    return r;
  }

  FreePoly operator-() const {
    FreePoly r = *this;
    for (auto& [w, c] : r.terms) c = -c;
    return r;
  }

  FreePoly operator-(const FreePoly& o) const { return *this + (-o); }

  FreePoly operator*(const FreePoly& o) const {
    FreePoly r;
    for (const auto& [a, ca] : terms)
      for (const auto& [b, cb] : o.terms) r.terms[concat(a, b)] += ca * cb;
    r.prune();
    return r;
  }
};

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::optional<int> d) : s_(text), d_(d) {}

  FreePoly parse() {
    FreePoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  std::string_view s_;
  std::optional<int> d_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(ErrorKind::SyntaxError, pos_, msg); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  FreePoly expr() {
    skip();
    bool negate = false;
    if (eat('-')) negate = true;
    else eat('+');
    FreePoly acc = term();
    if (negate) acc = -acc;
    while (true) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }

  FreePoly term() {
    FreePoly acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  FreePoly factor() {
    FreePoly base = primary();
    while (eat('^')) {
      skip();
      std::size_t at = pos_;
      unsigned long e = uint_literal();
      if (e > 64) throw ParseError(ErrorKind::SyntaxError, at, "exponent too large");
      FreePoly r = FreePoly::constant(1.0);
      for (unsigned long k = 0; k < e; ++k) r = r * base;
      base = r;
    }
    return base;
  }

  unsigned long uint_literal() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected unsigned integer");
    unsigned long v = 0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc()) throw ParseError(ErrorKind::SyntaxError, start, "integer out of range");
    return v;
  }

  FreePoly primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      FreePoly inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'z') {
      std::size_t at = pos_;
      ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected variable index");
      unsigned long k = uint_literal();
      if (k == 0 || (d_ && k > static_cast<unsigned long>(*d_)))
        throw ParseError(ErrorKind::UnknownVariable, at, "unknown variable z" + std::to_string(k));
      return FreePoly::variable(static_cast<int>(k - 1));
    }
    if (c == 'i') {
      ++pos_;
      return FreePoly::constant(cplx(0.0, 1.0));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    fail("unexpected character");
  }

  FreePoly number() {
    std::size_t start = pos_;
    // digits [. digits] [e [+-] digits]
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) throw ParseError(ErrorKind::SyntaxError, start, "malformed number");
    if (pos_ < s_.size() && s_[pos_] == 'i') {
      ++pos_;
      return FreePoly::constant(cplx(0.0, v));
    }
    return FreePoly::constant(v);
  }
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline FreePoly parse_poly(std::string_view text, std::optional<int> d = std::nullopt) {
  return detail::PolyParser(text, d).parse();
}

// Prints "(re+imi)*z1*z2 + ..." in graded-lex order; parse_poly inverts it exactly.
inline std::string print_poly(const FreePoly& p) {
  if (p.terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : p.terms) {
    if (!first) out += " + ";
    first = false;
    out += "(" + detail::format_double(c.real());
    out += std::signbit(c.imag()) ? "-" : "+";
    out += detail::format_double(std::abs(c.imag())) + "i)";
    for (int l : w) out += "*z" + std::to_string(l + 1);
  }
  return out;
}

inline Mat eval_poly(const FreePoly& p, const MatrixTuple& z) {
  if (p.max_variable() > z.d())
    throw Error(ErrorKind::UnknownVariable, "polynomial uses z" + std::to_string(p.max_variable()) + " but d = " +
                                                std::to_string(z.d()));
  Mat out = Mat::Zero(z.n(), z.n());
  for (const auto& [w, c] : p.terms) out += c * word_apply(z, w);
  return out;
}

}  // namespace ncdbr

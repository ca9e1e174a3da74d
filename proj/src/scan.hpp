#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "xtc/error.hpp"

namespace xtc::detail {

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Small hand-rolled cursor shared by the text grammars. '#' starts a comment.
class Scanner {
 public:
  explicit Scanner(std::string_view text, std::size_t line = 1) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char peek_raw(std::size_t off = 0) const {
    return pos_ + off < s_.size() ? s_[pos_ + off] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    for (std::size_t i = 0; i < tok.size(); ++i) advance();
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool at_ident() { return ident_start(peek()); }
  std::string ident() {
    if (!at_ident()) fail("expected identifier");
    std::size_t b = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) advance();
    return std::string(s_.substr(b, pos_ - b));
  }
  bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
  std::string digits() {
    if (!at_digit()) fail("expected number");
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) advance();
    return std::string(s_.substr(b, pos_ - b));
  }
  unsigned long long natural() {
    std::string d = digits();
    if (d.size() > 18) fail("number too large");
    return std::stoull(d);
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, line_, col_); }
  std::size_t pos() const { return pos_; }
  std::string_view rest() const { return s_.substr(pos_); }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t col_ = 1;
};

}  // namespace xtc::detail

#include "bfflab/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "bfflab/errors.hpp"

namespace bfflab {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_);
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_);
    SExpr e;
    e.line = line_;
    if (c == '(') {
      ++pos_;
      e.is_list = true;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unterminated list opened", e.line);
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';')
      ++pos_;
    e.atom = std::string(text_.substr(start, pos_ - start));
    return e;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

std::string_view SExpr::head() const {
  if (!is_list || items.empty() || items.front().is_list) return {};
  return items.front().atom;
}

std::string SExpr::to_string() const {
  if (!is_list) return atom;
  std::string s = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ' ';
    s += items[i].to_string();
  }
  return s + ")";
}

SExpr parse_sexpr(std::string_view text) {
  Reader r(text);
  SExpr e = r.read();
  if (!r.at_end()) throw ParseError("trailing content after expression");
  return e;
}

std::vector<SExpr> parse_sexprs(std::string_view text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const SExpr* keyword_arg(const SExpr& list, std::string_view key) {
  for (std::size_t i = 0; i + 1 < list.items.size(); ++i)
    if (list.items[i].is_atom(key)) return &list.items[i + 1];
  return nullptr;
}

void check_keywords(const SExpr& list, const std::vector<std::string_view>& allowed) {
  for (const SExpr& item : list.items) {
    if (!item.is_keyword()) continue;
    if (std::find(allowed.begin(), allowed.end(), item.atom) == allowed.end())
      throw ParseError("unknown keyword " + item.atom, item.line);
  }
}

}  // namespace bfflab

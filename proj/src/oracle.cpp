#include "bfflab/oracle.hpp"

#include <sstream>

#include "bfflab/errors.hpp"
#include "bfflab/sexpr.hpp"

namespace bfflab {

Oracle Oracle::identity_on(std::uint64_t lo, std::uint64_t hi, Nat default_value) {
  Oracle f(std::move(default_value));
  for (std::uint64_t x = lo; x <= hi; ++x) f.set(Nat(x), Nat(x));
  return f;
}

void Oracle::set(const Nat& x, const Nat& value) { table_[x] = value; }

const Nat& Oracle::peek(const Nat& x) const {
  auto it = table_.find(x);
  return it == table_.end() ? default_ : it->second;
}

const Nat& Oracle::query(const Nat& x) {
  log_.push_back(x);
  return peek(x);
}

Oracle Oracle::restricted_to(std::span<const Nat> points) const {
  Oracle r(0);
  for (const Nat& p : points) r.set(p, peek(p));
  return r;
}

bool Oracle::same_function(const Oracle& other) const {
  if (default_ != other.default_) return false;
  for (const auto& [k, v] : table_)
    if (other.peek(k) != v) return false;
  for (const auto& [k, v] : other.table_)
    if (peek(k) != v) return false;
  return true;
}

Oracle parse_oracle(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool have_default = false;
  Oracle f;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra)) throw ParseError("expected two fields", lineno);
    if (a == "default") {
      if (have_default) throw ParseError("duplicate default line", lineno);
      f = Oracle(parse_nat(b));
      have_default = true;
      continue;
    }
    if (!have_default) throw ParseError("oracle file must start with 'default <v>'", lineno);
    try {
      Nat key = parse_nat(a);
      if (f.table().count(key)) throw ParseError("duplicate key " + a, lineno);
      f.set(key, parse_nat(b));
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), lineno);
    }
  }
  if (!have_default) throw ParseError("oracle file must start with 'default <v>'");
  return f;
}

Oracle load_oracle(const std::string& path) { return parse_oracle(read_file(path)); }

std::string format_oracle(const Oracle& f) {
  std::string s = "default " + to_string(f.default_value()) + "\n";
  for (const auto& [k, v] : f.table()) s += to_string(k) + " " + to_string(v) + "\n";
  return s;
}

}  // namespace bfflab

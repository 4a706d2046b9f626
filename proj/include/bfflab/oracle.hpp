#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfflab/nat.hpp"

namespace bfflab {

/// A total function N -> N given by a finite table plus a constant default,
/// with an ordered log of the points queried through `query`.
///
/// `peek` reads without logging; it is what norm computations use, since
/// the norm is a property of the function and not a step of a computation.
class Oracle {
 public:
  Oracle() = default;
  explicit Oracle(Nat default_value) : default_(std::move(default_value)) {}

  /// Identity on [lo, hi], default elsewhere.
  static Oracle identity_on(std::uint64_t lo, std::uint64_t hi, Nat default_value = 0);

  void set(const Nat& x, const Nat& value);
  const Nat& peek(const Nat& x) const;
  const Nat& query(const Nat& x);

  const std::map<Nat, Nat>& table() const { return table_; }
  const Nat& default_value() const { return default_; }

  const std::vector<Nat>& log() const { return log_; }
  void clear_log() { log_.clear(); }

  /// The oracle that agrees with this one on `points` and is 0 elsewhere.
  Oracle restricted_to(std::span<const Nat> points) const;

  /// Same function, empty log.
  bool same_function(const Oracle& other) const;

 private:
  std::map<Nat, Nat> table_;
  Nat default_ = 0;
  std::vector<Nat> log_;
};

/// Oracle file: header `default <v>`, then one `key value` pair per line.
/// `#` starts a comment.
Oracle parse_oracle(std::string_view text);
Oracle load_oracle(const std::string& path);
std::string format_oracle(const Oracle& f);

}  // namespace bfflab

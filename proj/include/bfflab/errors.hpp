#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bfflab {

/// Base of every error raised by the library. `kind()` is a stable short tag
/// used in structured reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error("ParseError", line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class FuelExhausted : public Error {
 public:
  FuelExhausted() : Error("FuelExhausted", "evaluation fuel exhausted") {}
};

class ValueTooLarge : public Error {
 public:
  explicit ValueTooLarge(std::uint64_t bits)
      : Error("ValueTooLarge", "value of " + std::to_string(bits) + " bits exceeds the size limit"),
        bits_(bits) {}
  std::uint64_t bits() const noexcept { return bits_; }

 private:
  std::uint64_t bits_;
};

class NormCapExceeded : public Error {
 public:
  NormCapExceeded(std::string x, std::size_t cap)
      : Error("NormCapExceeded",
              "norm argument " + x + " exceeds brute-force cap " + std::to_string(cap)),
        cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

class BoundViolation : public Error {
 public:
  BoundViolation(std::string step, std::string value, std::string bound)
      : Error("BoundViolation",
              "bound violated at " + step + ": value " + value + " exceeds bound " + bound),
        step_(std::move(step)), value_(std::move(value)), bound_(std::move(bound)) {}
  const std::string& step() const noexcept { return step_; }
  const std::string& value() const noexcept { return value_; }
  const std::string& bound() const noexcept { return bound_; }

 private:
  std::string step_, value_, bound_;
};

class NonTermination : public Error {
 public:
  explicit NonTermination(std::uint64_t cap)
      : Error("NonTermination",
              "clock did not fire within " + std::to_string(cap) + " recursion steps") {}
};

class SearchSpaceTooLarge : public Error {
 public:
  SearchSpaceTooLarge(std::string estimate, std::uint64_t cap)
      : Error("SearchSpaceTooLarge",
              "search space of at least " + estimate + " exceeds cap " + std::to_string(cap)) {}
};

class NotRegular : public Error {
 public:
  NotRegular() : Error("NotRegular", "second-order polynomial is not regular") {}
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(std::size_t index, std::size_t length)
      : Error("IndexOutOfRange", "index " + std::to_string(index) +
                                     " out of range for sequence of length " +
                                     std::to_string(length)) {}
};

class ElementTooWide : public Error {
 public:
  ElementTooWide(std::string value, std::size_t width)
      : Error("ElementTooWide",
              "element " + value + " does not fit a block of width " + std::to_string(width)) {}
};

class RankError : public Error {
 public:
  explicit RankError(const std::string& what) : Error("RankError", what) {}
};

}  // namespace bfflab

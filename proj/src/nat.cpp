#include "bfflab/nat.hpp"

#include "bfflab/errors.hpp"

namespace bfflab {

std::size_t bit_length(const Nat& x) {
  if (sgn(x) == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

Nat pow2(std::uint64_t e) {
  Nat r;
  mpz_setbit(r.get_mpz_t(), e);
  return r;
}

Nat all_ones(std::uint64_t e) { return pow2(e) - 1; }

Nat smash(const Nat& x, const Nat& y, std::uint64_t max_bits) {
  const std::uint64_t lx = bit_length(x);
  const std::uint64_t ly = bit_length(y);
  if (lx != 0 && ly > (max_bits - 1) / lx) throw ValueTooLarge(lx * ly + 1);
  return pow2(lx * ly);
}

Nat monus(const Nat& x, const Nat& y) {
  if (x <= y) return 0;
  return x - y;
}

Nat msp(const Nat& x, const Nat& y) {
  const std::size_t lx = bit_length(x);
  if (y >= lx) return x;
  const std::size_t keep = y.get_ui();
  Nat r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(), lx - keep);
  return r;
}

Nat parse_nat(std::string_view text) {
  if (text.empty()) throw ParseError("empty natural literal");
  for (char c : text)
    if (c < '0' || c > '9') throw ParseError("not a natural literal: '" + std::string(text) + "'");
  return Nat(std::string(text), 10);
}

std::string to_string(const Nat& x) { return x.get_str(10); }

std::uint64_t to_u64(const Nat& x) {
  if (bit_length(x) > 64) throw ValueTooLarge(bit_length(x));
  if (mpz_fits_ulong_p(x.get_mpz_t())) return x.get_ui();
  Nat hi = x >> 32;
  Nat lo = x & Nat(0xffffffffUL);
  return (std::uint64_t{hi.get_ui()} << 32) | lo.get_ui();
}

}  // namespace bfflab

#include "bfflab/gen.hpp"

namespace bfflab::gen {

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Oracle table_oracle(Rng& rng, std::uint64_t lo, std::uint64_t hi, std::uint64_t max_value,
                    std::uint64_t default_value) {
  Oracle f{Nat(static_cast<unsigned long>(default_value))};
  for (std::uint64_t x = lo; x <= hi; ++x)
    f.set(Nat(static_cast<unsigned long>(x)),
          Nat(static_cast<unsigned long>(uniform(rng, 0, max_value))));
  return f;
}

Oracle nth_table(std::uint64_t index, std::uint64_t lo, std::uint64_t hi,
                 std::uint64_t max_value) {
  Oracle f;
  for (std::uint64_t x = hi + 1; x-- > lo;) {
    f.set(Nat(static_cast<unsigned long>(x)),
          Nat(static_cast<unsigned long>(index % (max_value + 1))));
    index /= max_value + 1;
  }
  return f;
}

namespace {

using namespace term;

class TermGen {
 public:
  TermGen(Rng& rng, const TermShape& shape) : rng_(rng), shape_(shape) {}

  TermPtr gen(std::size_t d, std::size_t k, std::size_t l) {
    if (d == 0 || chance(rng_, 0.25)) return leaf(l);
    switch (uniform(rng_, 0, 9)) {
      case 0: {
        static constexpr Builtin ops[] = {Builtin::Add,   Builtin::Mul, Builtin::Len,
                                          Builtin::Half,  Builtin::Msp, Builtin::Monus,
                                          Builtin::Min,   Builtin::CondLE};
        Builtin op = ops[uniform(rng_, 0, 7)];
        return call(op, args(builtin_arity(op), d, k, l));
      }
      case 1: return comp(smash(), args(2, d, k, l));
      case 2: {
        TermPtr heads[] = {s0(), s1(), zero()};
        return comp(heads[uniform(rng_, 0, 2)], args(1, d, k, l));
      }
      case 3: {
        std::size_t n = uniform(rng_, 1, 3);
        return comp(proj(n, uniform(rng_, 1, n)), args(n, d, k, l));
      }
      case 4:
      case 5:
        if (k == 0) return leaf(l);
        return apply(uniform(rng_, 0, k - 1), gen(d - 1, k, l));
      case 6: {
        std::size_t p = uniform(rng_, 0, 1);
        TermPtr r = lrn1(gen(d - 1, k, p), gen(d - 1, k, p + 2), gen(d - 1, k, p + 1));
        return comp(r, args(p + 1, d, k, l));
      }
      case 7: {
        std::size_t p = uniform(rng_, 0, 1);
        TermPtr r = lrn(gen(d - 1, k, p), gen(d - 1, k, p + 2), gen(d - 1, k, p + 2),
                        gen(d - 1, k, p + 1));
        return comp(r, args(p + 1, d, k, l));
      }
      case 8: {
        std::size_t a = k > 0 ? uniform(rng_, 0, 1) : 0;
        std::size_t inner_l = uniform(rng_, 0, 2);
        std::size_t b = uniform(rng_, 0, 1);
        TermPtr e = expand(gen(d - 1, k - a, inner_l), a, b);
        return comp(e, args(inner_l + b, d, k, l));
      }
      default: return leaf(l);
    }
  }

 private:
  TermPtr leaf(std::size_t l) {
    if (l > 0 && chance(rng_, 0.8)) return arg(uniform(rng_, 0, l - 1));
    return lit(static_cast<unsigned long>(uniform(rng_, 0, shape_.max_literal)));
  }

  std::vector<TermPtr> args(std::size_t n, std::size_t d, std::size_t k, std::size_t l) {
    std::vector<TermPtr> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(gen(d - 1, k, l));
    return out;
  }

  Rng& rng_;
  TermShape shape_;
};

class SopGen {
 public:
  SopGen(Rng& rng, const SopShape& shape) : rng_(rng), shape_(shape) {}

  /// Polynomial of depth exactly d.
  SopPtr gen(std::size_t d, std::size_t ops) {
    if (ops > 0 && chance(rng_, 0.5)) {
      std::size_t left = uniform(rng_, 0, ops - 1);
      SopPtr a = gen(d, left);
      SopPtr b = gen(chance(rng_, 0.5) ? d : uniform(rng_, 0, d), ops - 1 - left);
      if (chance(rng_, 0.5)) std::swap(a, b);
      return chance(rng_, 0.5) ? sop::plus(a, b) : sop::times(a, b);
    }
    if (d == 0) {
      if (shape_.numbers > 0 && chance(rng_, 0.6))
        return sop::len(uniform(rng_, 0, shape_.numbers - 1));
      return sop::constant(static_cast<unsigned long>(uniform(rng_, 0, shape_.max_const)));
    }
    return sop::norm(uniform(rng_, 0, shape_.functions - 1),
                     gen(d - 1, uniform(rng_, 0, shape_.max_ops)));
  }

 private:
  Rng& rng_;
  SopShape shape_;
};

}  // namespace

TermPtr random_term(Rng& rng, Rank rank, const TermShape& shape) {
  return TermGen(rng, shape).gen(shape.depth, rank.functions, rank.numbers);
}

SopPtr random_sop(Rng& rng, const SopShape& shape) {
  std::size_t d = shape.functions == 0 ? 0 : uniform(rng, 0, shape.depth);
  return SopGen(rng, shape).gen(d, uniform(rng, 0, shape.max_ops));
}

}  // namespace bfflab::gen

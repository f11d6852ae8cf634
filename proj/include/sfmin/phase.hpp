#pragma once

#include <cassert>

#include "sfmin/common.hpp"

namespace sfmin {

// One capacity-scaling phase. The scaling parameter Delta halves from
// 2^ceil(log2 U) down to 1/2 and is never a fraction in memory: we store the
// integer 2*Delta, so two_delta == 1 encodes the final Delta = 1/2 phase.
struct Phase {
  Value two_delta = 1;

  constexpr Value ceil_delta() const { return (two_delta + 1) / 2; }
  constexpr bool is_final() const { return two_delta == 1; }
  // Delta is integral (>= 1) in every phase except the final one.
  constexpr Value integral_delta() const {
    assert(two_delta >= 2);
    return two_delta / 2;
  }
  // x >= 3*Delta/2, evaluated without rationals.
  constexpr bool meets_three_half_delta(Value x) const {
    return 4 * x >= 3 * two_delta;
  }
};

}  // namespace sfmin

#pragma once

#include <type_traits>

namespace articugeo {

// Kernels on the loss path are templated on their scalar so the same code runs
// on plain doubles and on forward-mode dual numbers (see sensitivity.hpp).
// Dual types are expected to expose their primal value as `.a`.
template <class S>
inline double value_of(const S& s) {
  if constexpr (std::is_arithmetic_v<S>) {
    return static_cast<double>(s);
  } else {
    return s.a;
  }
}

}  // namespace articugeo

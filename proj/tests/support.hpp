#pragma once

#include <initializer_list>
#include <vector>

#include "indexfiber/index_oracle.hpp"

namespace indexfiber::testing {

inline IndexSpectrum exact_spectrum(std::vector<int> parts, std::initializer_list<int> m) {
  std::vector<GaussianRational> values(m.begin(), m.end());
  return IndexSpectrum::exact(MultiplicityProfile(std::move(parts)), std::move(values));
}

}  // namespace indexfiber::testing

// Copyright 2026 The wconv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WCONV_CORE_LATTICE_FFT_HPP
#define WCONV_CORE_LATTICE_FFT_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "core/algebra.hpp"

namespace wconv {

inline constexpr std::size_t kFftMaxVolume = std::size_t{1} << 23;

// Padded transform size for a dense-box product on Z^dim.
std::size_t fft_volume(std::span<const Term> f, std::span<const Term> g,
                       int dim);

struct FftProduct {
  std::vector<Term> terms;  // sorted
  double dropped_l1 = 0.0;  // truncated mass plus the roundoff allowance
};

// Coefficients below max(trunc, roundoff floor) are dropped and accounted.
FftProduct fft_convolve(std::span<const Term> f, std::span<const Term> g,
                        int dim, double trunc);

}  // namespace wconv

#endif  // WCONV_CORE_LATTICE_FFT_HPP

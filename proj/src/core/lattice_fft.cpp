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

#include "core/lattice_fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>

#include "core/error.hpp"

namespace wconv {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

std::size_t next_fast_size(std::size_t n) {
  for (;; ++n) {
    std::size_t m = n;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (m % p == 0) m /= p;
    }
    if (m == 1) return n;
  }
}

struct Box {
  std::array<std::int64_t, kMaxLatticeDim> lo{}, hi{};
};

Box bounding_box(std::span<const Term> f, int dim) {
  Box b;
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = std::numeric_limits<std::int64_t>::max();
    b.hi[i] = std::numeric_limits<std::int64_t>::min();
  }
  for (const Term& t : f) {
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = std::min(b.lo[i], t.x.c[i]);
      b.hi[i] = std::max(b.hi[i], t.x.c[i]);
    }
  }
  return b;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw Error(ErrorCode::kSizeCap, "FFT buffer allocation failed");
    std::fill_n(reinterpret_cast<double*>(data), 2 * n, 0.0);
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

void transform(fftw_complex* buf, int dim, const int* n, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(dim, n, buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

std::size_t fft_volume(std::span<const Term> f, std::span<const Term> g,
                       int dim) {
  if (f.empty() || g.empty()) return 0;
  const Box bf = bounding_box(f, dim), bg = bounding_box(g, dim);
  std::size_t vol = 1;
  for (int i = 0; i < dim; ++i) {
    const auto ext = static_cast<std::size_t>((bf.hi[i] - bf.lo[i]) +
                                              (bg.hi[i] - bg.lo[i]) + 1);
    vol *= next_fast_size(ext);
    if (vol > (std::size_t{1} << 40)) break;
  }
  return vol;
}

FftProduct fft_convolve(std::span<const Term> f, std::span<const Term> g,
                        int dim, double trunc) {
  FftProduct out;
  if (f.empty() || g.empty()) return out;
  const Box bf = bounding_box(f, dim), bg = bounding_box(g, dim);
  std::array<int, kMaxLatticeDim> n{}, ext_f{}, ext_g{}, ext_out{};
  std::size_t vol = 1;
  for (int i = 0; i < dim; ++i) {
    ext_f[i] = static_cast<int>(bf.hi[i] - bf.lo[i] + 1);
    ext_g[i] = static_cast<int>(bg.hi[i] - bg.lo[i] + 1);
    ext_out[i] = ext_f[i] + ext_g[i] - 1;
    n[i] = static_cast<int>(next_fast_size(ext_out[i]));
    vol *= n[i];
  }
  if (vol > kFftMaxVolume) {
    throw Error(ErrorCode::kSizeCap, "FFT box exceeds the volume cap");
  }
  auto linear = [&](const GroupElement& x, const Box& b) {
    std::size_t idx = 0;
    for (int i = 0; i < dim; ++i) {
      idx = idx * n[i] + static_cast<std::size_t>(x.c[i] - b.lo[i]);
    }
    return idx;
  };

  FftwBuffer a(vol), b(vol);
  double nf2 = 0, ng2 = 0;
  for (const Term& t : f) {
    const std::size_t i = linear(t.x, bf);
    a.data[i][0] = t.c.real();
    a.data[i][1] = t.c.imag();
    nf2 += std::norm(t.c);
  }
  for (const Term& t : g) {
    const std::size_t i = linear(t.x, bg);
    b.data[i][0] = t.c.real();
    b.data[i][1] = t.c.imag();
    ng2 += std::norm(t.c);
  }
  transform(a.data, dim, n.data(), FFTW_FORWARD);
  transform(b.data, dim, n.data(), FFTW_FORWARD);
  for (std::size_t i = 0; i < vol; ++i) {
    const double re = a.data[i][0] * b.data[i][0] - a.data[i][1] * b.data[i][1];
    const double im = a.data[i][0] * b.data[i][1] + a.data[i][1] * b.data[i][0];
    a.data[i][0] = re;
    a.data[i][1] = im;
  }
  transform(a.data, dim, n.data(), FFTW_BACKWARD);

  // Roundoff allowance per coefficient, scaled by the Cauchy-Schwarz bound.
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() *
                       std::log2(static_cast<double>(vol) + 1.0) *
                       std::sqrt(nf2 * ng2);
  const double cut = std::max(trunc, floor);
  const double scale = 1.0 / static_cast<double>(vol);

  GroupElement z;
  z.family = Family::kLattice;
  z.dim = static_cast<std::uint8_t>(dim);
  std::array<int, kMaxLatticeDim> idx{};
  std::size_t kept = 0;
  for (;;) {
    std::size_t lin = 0;
    for (int i = 0; i < dim; ++i) lin = lin * n[i] + idx[i];
    const Complex v(a.data[lin][0] * scale, a.data[lin][1] * scale);
    const double mag = magnitude(v);
    if (mag >= cut) {
      for (int i = 0; i < dim; ++i) z.c[i] = bf.lo[i] + bg.lo[i] + idx[i];
      out.terms.push_back({z, v});
      ++kept;
    } else {
      out.dropped_l1 += mag;
    }
    int i = dim - 1;
    while (i >= 0 && ++idx[i] == ext_out[i]) idx[i--] = 0;
    if (i < 0) break;
  }
  out.dropped_l1 += static_cast<double>(kept) * floor;
  return out;
}

}  // namespace wconv

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

#ifndef WCONV_CORE_ALGEBRA_HPP
#define WCONV_CORE_ALGEBRA_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "core/groups.hpp"
#include "core/weights.hpp"
#include "json.hpp"

namespace wconv {

using Complex = std::complex<double>;

// |c| without hypot; coefficients never approach overflow.
inline double magnitude(Complex c) { return std::sqrt(std::norm(c)); }

struct Term {
  GroupElement x;
  Complex c;
};

// Finitely supported function on G. Terms are kept sorted by element and
// never hold an exact zero. eps is the l1 mass discarded by truncation.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(GroupModel g) : group_(std::move(g)) {}

  static AlgebraElement delta(const GroupModel& g, const GroupElement& x,
                              Complex c = 1.0);
  static AlgebraElement identity(const GroupModel& g);
  // Duplicates are summed; zero coefficients dropped.
  static AlgebraElement from_terms(const GroupModel& g, std::vector<Term> terms);
  // Caller guarantees sorted, unique, nonzero.
  static AlgebraElement from_sorted(const GroupModel& g, std::vector<Term> terms,
                                    double eps);

  const GroupModel& group() const { return group_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  double eps() const { return eps_; }
  Complex coefficient(const GroupElement& x) const;

  double norm1() const;
  double norm2() const;

  AlgebraElement scaled(Complex s) const;
  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;

 private:
  GroupModel group_;
  std::vector<Term> terms_;
  double eps_ = 0.0;
};

struct ConvolutionOptions {
  double trunc = 0.0;
  std::size_t support_cap = 1'000'000;
  // Lattice products with |f||g| above this use the FFT path.
  double fft_min_work = 4e6;
  bool allow_fft = true;
};

AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g,
                        const ConvolutionOptions& opt = {});
AlgebraElement involute(const AlgebraElement& f);
bool is_hermitian(const AlgebraElement& f, double tol = 0.0);

double norm_p_omega(const AlgebraElement& f, const Weight& w, double p);
double norm_1_sigma(const AlgebraElement& f, const AuxiliaryFunction& aux);

struct NormInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
  bool flagged = false;
  int k_reached = 0;

  nlohmann::json to_json() const;
};

struct PowerOptions {
  double trunc = 1e-14;  // relative to unit l1 mass
  std::size_t support_cap = 1'000'000;
  double work_cap = 5e8;  // |g|^2 for a direct squaring step
};

// Norms of f^(2^k), k = 0..k_max, by repeated squaring of a normalized copy.
struct DyadicTrace {
  std::vector<double> log_l1_upper;  // log(||f^(2^k)||_1 + eps)
  std::vector<double> log_l2_lower;  // log(max(||.||_2 - eps, 0))
  std::vector<double> log_l2;        // log ||.||_2 of the computed power
  std::vector<double> log_weighted;  // log ||.||_{p,w}, when requested
  int k_reached = 0;
  bool flagged = false;
  std::string flag_reason;
};

DyadicTrace dyadic_powers(const AlgebraElement& f, int k_max,
                          const PowerOptions& opt, const Weight* w = nullptr,
                          double p = 1.0);

// For hermitian h: lower from ||h^n||_2^(1/n), upper from (||h^n||_1 + eps)^(1/n).
NormInterval hermitian_norm_bounds(const AlgebraElement& h, int k_max,
                                   const PowerOptions& opt = {});

NormInterval opnorm_estimate(const AlgebraElement& f, int k_max,
                             const PowerOptions& opt = {});

enum class NormKind { kWeighted, kOperator };

struct SpectralRadiusEstimate {
  double value = 0.0;
  std::vector<double> sequence;
  int k_reached = 0;
  bool flagged = false;
};

// kWeighted uses ||.||_{p,w}; kOperator uses the delta_e proxy ||.||_2.
SpectralRadiusEstimate spectral_radius_estimate(const AlgebraElement& f,
                                                NormKind kind, int k_max,
                                                const Weight* w = nullptr,
                                                double p = 1.0,
                                                const PowerOptions& opt = {});

}  // namespace wconv

#endif  // WCONV_CORE_ALGEBRA_HPP

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

#ifndef WCONV_CORE_INVERSION_HPP
#define WCONV_CORE_INVERSION_HPP

#include <optional>
#include <string>
#include <vector>

#include "core/algebra.hpp"
#include "core/analysis.hpp"
#include "core/weights.hpp"
#include "json.hpp"

namespace wconv {

struct ResidualReport {
  double left = 0.0;   // ||a*x - e||_1
  double right = 0.0;  // ||x*a - e||_1
  double max() const { return left > right ? left : right; }
  nlohmann::json to_json() const;
};

ResidualReport verify_inverse(const AlgebraElement& a, const AlgebraElement& x);

struct ProductBoundInputs {
  double norm_a_A = 1.0;
  double norm_a_B_lower = 1.0;
  double norm_a_B_upper = 1.0;
  double inv_norm_B_upper = 1.0;
};

struct ProductBound {
  bool finite = false;
  double value = 0.0;  // +inf when not finite
  double log_value = 0.0;
  int k_cut = 0;        // last factor evaluated explicitly
  double tail = 0.0;    // bound on sum of log-factors beyond k_cut
  double v = 0.0;
  double c_used = 1.0;
  std::string variant = "C";
  nlohmann::json to_json() const;
};

// Infinite product bound; factors in log-space, 0^0 = 1, C clamped to >= 1.
// Factors are evaluated at least through k_cut and then until the tail
// becomes geometric.
ProductBound bound_product(const ProductBoundInputs& in,
                           const HolderCertificate& cert, int k_cut = 64,
                           bool two_c_variant = false);

struct AsymptoticBound {
  bool applicable = false;
  std::string reason;
  double value = 0.0;
  double log_value = 0.0;
  double nu = 0.0;
  double v = 0.0;
  double log_u = 0.0;
  double gamma = 0.0;
  double c_tilde = 0.0;
  double k_m = 0.0;
  double max_exponent = 0.0;          // closed form for max_k f(k)
  double max_exponent_numeric = 0.0;  // f(k_m)
  double k0 = 0.0;
  int n_finite = 0;                   // N = floor(k0)
  double log_finite_part = 0.0;
  double infinite_part_exponent = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c_hat = 0.0;
  double k_const = 0.0;
  double e_exp = 0.0;
  double closed_form_log = 0.0;
  nlohmann::json to_json() const;
};

AsymptoticBound asymptotic_bound(double nu, double norm_a_A,
                                 double inv_norm_B_upper,
                                 const HolderCertificate& cert);

struct InversionOptions {
  double tol = 1e-13;
  int n_max = 20000;
  int k_max = 10;        // depth of the dyadic B-norm bounds
  int k_cut = 64;
  double trunc = 1e-16;  // per Neumann term
  bool two_c_variant = false;
  PowerOptions power;
};

struct InversionReport {
  AlgebraElement inverse;
  double norm_a_A = 0.0;
  NormInterval norm_a_B;
  NormInterval inv_norm_B;
  NormInterval c_norm_B;
  double c_norm_formula_lower = 0.0;  // 1 - 1/(||a^-1||_B^2 ||a||_B^2)
  double c_norm_formula_upper = 0.0;
  double h_upper = 0.0;               // certified upper end of ||a*a||_B
  double nu = 0.0;
  std::optional<ProductBound> product;
  std::optional<AsymptoticBound> asymptotic;
  std::string asymptotic_note;
  double actual = 0.0;  // ||x||_{p,w}
  int terms = 0;
  ResidualReport residual;
  std::vector<double> neumann_trace;  // computed ||c^n||_1
  bool certificate_valid = false;

  nlohmann::json to_json() const;
};

InversionReport neumann_invert(const AlgebraElement& a, const Weight& w,
                               double p, const HolderCertificate* cert,
                               const InversionOptions& opt = {});

}  // namespace wconv

#endif  // WCONV_CORE_INVERSION_HPP

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

#ifndef WCONV_CORE_WEIGHTS_HPP
#define WCONV_CORE_WEIGHTS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/groups.hpp"
#include "core/report.hpp"
#include "json.hpp"

namespace wconv {

enum class WeightFamily {
  kPolynomial,     // (1 + tau)^beta
  kSubexpPower,    // exp(C tau^alpha)
  kSubexpLog,      // exp(C tau / ln(1 + tau)^gamma)
  kLocallyFinite,  // 1 + n_{tau_chain - 1}
  kCustomProfile,  // exp(rho(tau)) for a user profile
};

const char* weight_family_name(WeightFamily f);

// A radial weight: the value depends on the element only through its length.
class Weight {
 public:
  static Weight polynomial(GroupModel g, double beta);
  static Weight subexp_power(GroupModel g, double alpha, double c);
  static Weight subexp_log(GroupModel g, double gamma, double c);
  // n_1 < n_2 < ... given explicitly.
  static Weight locally_finite(GroupModel g, std::vector<double> n_seq,
                               double d = 1.0);
  // n_i = base^i
  static Weight locally_finite_geometric(GroupModel g, double base,
                                         double d = 1.0);
  static Weight custom_profile(GroupModel g, std::function<double(double)> rho,
                               std::string label = "custom");
  // rho(0), rho(1), ..., rho(N); lengths beyond N are rejected.
  static Weight custom_table(GroupModel g, std::vector<double> rho_table,
                             std::string label = "custom_table");

  WeightFamily family() const;
  const GroupModel& group() const;
  bool is_profile() const;
  std::string label() const;
  nlohmann::json describe() const;

  // Profile families only.
  double rho(double n) const;
  // Largest length the weight is defined at; nullopt when unbounded.
  std::optional<std::int64_t> length_domain() const;
  // lim rho(2n)/rho(n) when known in closed form.
  std::optional<double> ratio_limit() const;

  // D in w(xy) <= D (w(x) + w(y)); locally finite weights only.
  double subadditivity_constant() const;

  double log_at_length(std::int64_t tau) const;
  double log_eval(const GroupElement& x) const;
  double operator()(const GroupElement& x) const;

 private:
  struct Impl;
  explicit Weight(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

enum class AuxMode { kWeaklySubadditive, kRhoProfile };

const char* aux_mode_name(AuxMode m);

// u with w(xy) / (w(x) w(y)) <= u(x) + u(y), and sigma = w u.
class AuxiliaryFunction {
 public:
  static AuxiliaryFunction build(const Weight& w, double p);

  AuxMode mode() const { return mode_; }
  const Weight& weight() const { return weight_; }
  double p() const { return p_; }
  double sup_u() const;
  std::optional<std::int64_t> length_domain() const;

  double log_u_at_length(std::int64_t tau) const;
  double log_sigma_at_length(std::int64_t tau) const;
  double u(const GroupElement& x) const;
  double sigma(const GroupElement& x) const;

 private:
  AuxiliaryFunction(Weight w, AuxMode mode, double p)
      : weight_(std::move(w)), mode_(mode), p_(p) {}
  Weight weight_;
  AuxMode mode_;
  double p_;
};

ConditionReport check_weight_axioms(const Weight& w, int radius, int samples,
                                    std::uint64_t seed);

// The auxiliary-function inequality on all pairs of ball(pair_radius) plus
// random pairs from ball(radius).
ConditionReport check_aux_inequality(const AuxiliaryFunction& aux, int radius,
                                     int pair_radius, int samples,
                                     std::uint64_t seed);

ConditionReport check_growth_condition(const Weight& w, std::int64_t n_max,
                                       double margin = 0.05);

ConditionReport check_summability(const AuxiliaryFunction& aux, double s,
                                  double r, int n_max = 1000,
                                  double margin = 0.05);

}  // namespace wconv

#endif  // WCONV_CORE_WEIGHTS_HPP

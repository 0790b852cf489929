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

#ifndef WCONV_CORE_ANALYSIS_HPP
#define WCONV_CORE_ANALYSIS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "core/algebra.hpp"
#include "core/report.hpp"
#include "core/weights.hpp"
#include "json.hpp"

namespace wconv {

double conjugate_index(double p);                // q, +inf for p = 1
double holder_exponent(double p, double theta);  // alpha

// Constants (theta, C) for ||f*f||_{p,w} <= C ||f||_{p,w}^{1+theta} ||f||_2^{1-theta}.
struct HolderCertificate {
  double theta = 0.5;
  double alpha = 2.0;
  double holder_constant = 1.0;  // C_H
  double constant = 2.0;         // C = 2 C_H
  double p = 1.0;
  double q = 0.0;
  double s = 0.0;
  double r = 0.0;
  std::string provenance = "manual";  // weakly_subadditive | rho_profile | manual
  std::string sum_route = "manual";   // direct | dominated | manual
  int verified_radius = 0;
  nlohmann::json sum_evidence = nlohmann::json::object();

  static HolderCertificate manual(double theta, double constant);
  double gamma() const;  // log2(1 + theta)
  nlohmann::json to_json() const;
};

struct ThetaOptions {
  int grid_points = 512;
  double grid_min = 1e-4;
  double constraint_margin = 1e-3;
  int sum_n_max = 1000;
  double sum_margin = 0.05;
};

std::vector<double> theta_grid(const ThetaOptions& opt);

HolderCertificate estimate_theta(const Weight& w, const AuxiliaryFunction& aux,
                                 double p, double s, double r,
                                 const ThetaOptions& opt = {});

struct RandomElementOptions {
  int max_terms = 8;
  double sigma = 1.0;  // complex Gaussian scale per component
};

AlgebraElement random_element(const GroupModel& g,
                              const std::vector<GroupElement>& ball,
                              std::mt19937_64& rng,
                              const RandomElementOptions& opt = {});

// Per-trial generator so any trial can be replayed from (seed, trial).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

ConditionReport check_diff_norm(const HolderCertificate& cert, const Weight& w,
                                double p, int trials, int support_radius,
                                std::uint64_t seed, double slack = 1e-9,
                                const RandomElementOptions& opt = {});

// ||f*g||_{p,w} <= ||f||_{1,sigma} ||g||_{p,w} + ||f||_{p,w} ||g||_{1,sigma}
// on random pairs supported in ball(support_radius).
ConditionReport check_convolution_inequality(const AuxiliaryFunction& aux,
                                             int trials, int support_radius,
                                             std::uint64_t seed,
                                             double slack = 1e-9,
                                             const RandomElementOptions& opt = {});

ConditionReport necessary_condition_probe(const Weight& w,
                                          const HolderCertificate& cert,
                                          int n_max);

}  // namespace wconv

#endif  // WCONV_CORE_ANALYSIS_HPP

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

#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/numeric.hpp"
#include "core/radial_sum.hpp"

namespace wconv {

double conjugate_index(double p) {
  require(p >= 1 && std::isfinite(p), "p must lie in [1, inf)");
  return p == 1.0 ? kInf : p / (p - 1.0);
}

double holder_exponent(double p, double theta) {
  return 2.0 * p / (p + theta * (p - 2.0));
}

HolderCertificate HolderCertificate::manual(double theta, double constant) {
  require(theta > 0 && theta < 1, "theta must lie in (0, 1)");
  require(constant > 0, "C must be positive");
  HolderCertificate c;
  c.theta = theta;
  c.constant = constant;
  c.holder_constant = constant / 2;
  return c;
}

double HolderCertificate::gamma() const { return std::log2(1.0 + theta); }

nlohmann::json HolderCertificate::to_json() const {
  return {{"theta", theta},
          {"alpha", alpha},
          {"gamma", gamma()},
          {"holder_constant", holder_constant},
          {"C", constant},
          {"p", p},
          {"q", std::isfinite(q) ? nlohmann::json(q) : nlohmann::json("inf")},
          {"s", s},
          {"r", r},
          {"provenance", provenance},
          {"sum_route", sum_route},
          {"verified_radius", verified_radius},
          {"sum_evidence", sum_evidence}};
}

std::vector<double> theta_grid(const ThetaOptions& opt) {
  require(opt.grid_points >= 2, "theta grid needs two points");
  require(opt.grid_min > 0 && opt.grid_min < 0.5, "grid_min must lie in (0, 0.5)");
  std::vector<double> grid;
  const double a = std::log(opt.grid_min), b = std::log1p(-opt.grid_min);
  for (int j = 0; j < opt.grid_points; ++j) {
    grid.push_back(std::exp(a + (b - a) * j / (opt.grid_points - 1)));
  }
  return grid;
}

HolderCertificate estimate_theta(const Weight& w, const AuxiliaryFunction& aux,
                                 double p, double s, double r,
                                 const ThetaOptions& opt) {
  const double q = conjugate_index(p);
  require(s > 0, "s must be positive");
  require(r >= 0, "r must be nonnegative");
  require(s < q, "s must be below the conjugate index q");

  const double m = opt.constraint_margin;
  double theta = -1.0;
  for (double t : theta_grid(opt)) {
    const double a = holder_exponent(p, t);
    if (a - s >= m && r - (1.0 - t) * a >= m) {
      theta = t;
      break;
    }
  }
  if (theta < 0) {
    throw Error(ErrorCode::kNoFeasibleTheta,
                "no grid theta satisfies s < alpha and (1-theta) alpha < r",
                {{"p", p}, {"s", s}, {"r", r}});
  }

  HolderCertificate cert;
  cert.theta = theta;
  cert.alpha = holder_exponent(p, theta);
  cert.p = p;
  cert.q = q;
  cert.s = s;
  cert.r = r;
  cert.provenance = aux_mode_name(aux.mode());

  int n_max = opt.sum_n_max;
  if (auto dom = aux.length_domain()) {
    n_max = static_cast<int>(std::min<std::int64_t>(n_max, *dom));
  }
  // u and sigma bounds are checked on every length the sums touch.
  const double log_sup_u = std::log(aux.sup_u());
  for (int n = 0; n <= n_max; ++n) {
    if (aux.log_u_at_length(n) > log_sup_u + 1e-12 ||
        (aux.mode() == AuxMode::kRhoProfile && aux.log_sigma_at_length(n) < -1e-12)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "auxiliary bounds fail at length " + std::to_string(n) +
                      "; the profile is not concave and increasing");
    }
  }
  cert.verified_radius = n_max;

  const double alpha = cert.alpha;
  const RadialSum direct = radial_sum(
      w.group(),
      [&](std::int64_t n) {
        return alpha * aux.log_u_at_length(n) +
               (1.0 - theta) * alpha * w.log_at_length(n);
      },
      n_max, opt.sum_margin);
  double log_ch = kInf;
  if (direct.status == Status::kVerified) {
    log_ch = direct.log_total / alpha;
    cert.sum_route = "direct";
    cert.sum_evidence = direct.to_json();
  }
  // u^alpha w^((1-theta)alpha) <= sup_u^(alpha-s) u^s w^r since w >= 1.
  const ConditionReport dominated = check_summability(aux, s, r, n_max, opt.sum_margin);
  if (dominated.status == Status::kVerified) {
    const double l = ((alpha - s) * log_sup_u +
                      dominated.evidence["log_total"].get<double>()) / alpha;
    if (l < log_ch) {
      log_ch = l;
      cert.sum_route = "dominated";
      cert.sum_evidence = dominated.evidence;
    }
  }
  if (!std::isfinite(log_ch)) {
    throw Error(ErrorCode::kSumInconclusive,
                "neither the Holder sum nor the summability sum is certified",
                {{"direct", direct.to_json()}, {"summability", dominated.to_json()}});
  }
  cert.holder_constant = std::exp(log_ch);
  cert.constant = 2.0 * cert.holder_constant;
  return cert;
}

AlgebraElement random_element(const GroupModel& g,
                              const std::vector<GroupElement>& ball,
                              std::mt19937_64& rng,
                              const RandomElementOptions& opt) {
  require(!ball.empty(), "empty support ball");
  require(opt.max_terms >= 1, "max_terms must be >= 1");
  std::uniform_int_distribution<int> count(1, opt.max_terms);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  std::normal_distribution<double> gauss(0.0, opt.sigma);
  const int k = count(rng);
  std::vector<Term> terms;
  for (int i = 0; i < k; ++i) {
    const GroupElement& x = ball[pick(rng)];
    const double re = gauss(rng);
    const double im = gauss(rng);
    terms.push_back({x, Complex(re, im)});
  }
  return AlgebraElement::from_terms(g, std::move(terms));
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

ConditionReport check_diff_norm(const HolderCertificate& cert, const Weight& w,
                                double p, int trials, int support_radius,
                                std::uint64_t seed, double slack,
                                const RandomElementOptions& opt) {
  require(trials >= 0, "trials must be >= 0");
  ConditionReport rep;
  rep.condition = "differential_norm";
  rep.params = {{"weight", w.describe()},
                {"p", p},
                {"theta", cert.theta},
                {"C", cert.constant},
                {"trials", trials},
                {"support_radius", support_radius},
                {"seed", seed},
                {"slack", slack},
                {"max_terms", opt.max_terms}};
  const GroupModel& g = w.group();
  const AuxiliaryFunction aux = AuxiliaryFunction::build(w, p);
  const std::vector<GroupElement> ball = g.ball(support_radius);
  const double th = cert.theta;
  int violations = 0, holder_violations = 0;
  double max_ratio = 0, max_holder_ratio = 0;
  nlohmann::json first = nullptr;
  for (int i = 0; i < trials; ++i) {
    std::mt19937_64 rng = trial_rng(seed, static_cast<std::uint64_t>(i));
    const AlgebraElement f = random_element(g, ball, rng, opt);
    const double a = norm_p_omega(f, w, p);
    const double b = f.norm2();
    const double lhs = norm_p_omega(convolve(f, f), w, p);
    const double base = std::pow(a, 1.0 + th) * std::pow(b, 1.0 - th);
    max_ratio = std::max(max_ratio, lhs / base);
    if (lhs > cert.constant * base + slack) {
      if (violations++ == 0) first = {{"trial", i}, {"seed", seed}, {"kind", "eq"}};
    }
    const double hbase = std::pow(b, 1.0 - th) * std::pow(a, th);
    const double hs = norm_1_sigma(f, aux);
    max_holder_ratio = std::max(max_holder_ratio, hs / hbase);
    if (hs > cert.holder_constant * hbase + slack) {
      if (holder_violations++ == 0 && first.is_null()) {
        first = {{"trial", i}, {"seed", seed}, {"kind", "holder"}};
      }
    }
  }
  rep.status = violations + holder_violations == 0 ? Status::kVerified
                                                   : Status::kRefuted;
  rep.evidence = {{"violations", violations},
                  {"holder_violations", holder_violations},
                  {"max_ratio", max_ratio},
                  {"max_holder_ratio", max_holder_ratio},
                  {"first_violation", first}};
  return rep;
}

ConditionReport check_convolution_inequality(const AuxiliaryFunction& aux,
                                             int trials, int support_radius,
                                             std::uint64_t seed, double slack,
                                             const RandomElementOptions& opt) {
  require(trials >= 0, "trials must be >= 0");
  const Weight& w = aux.weight();
  const double p = aux.p();
  ConditionReport rep;
  rep.condition = "convolution_inequality";
  rep.params = {{"weight", w.describe()},
                {"p", p},
                {"mode", aux_mode_name(aux.mode())},
                {"trials", trials},
                {"support_radius", support_radius},
                {"seed", seed},
                {"slack", slack}};
  const GroupModel& g = w.group();
  const std::vector<GroupElement> ball = g.ball(support_radius);
  int violations = 0;
  double max_ratio = 0;
  nlohmann::json first = nullptr;
  for (int i = 0; i < trials; ++i) {
    std::mt19937_64 rng = trial_rng(seed, static_cast<std::uint64_t>(i));
    const AlgebraElement f = random_element(g, ball, rng, opt);
    const AlgebraElement h = random_element(g, ball, rng, opt);
    const double lhs = norm_p_omega(convolve(f, h), w, p);
    const double rhs = norm_1_sigma(f, aux) * norm_p_omega(h, w, p) +
                       norm_p_omega(f, w, p) * norm_1_sigma(h, aux);
    max_ratio = std::max(max_ratio, lhs / rhs);
    if (lhs > rhs + slack && violations++ == 0) first = {{"trial", i}, {"seed", seed}};
  }
  rep.status = violations == 0 ? Status::kVerified : Status::kRefuted;
  rep.evidence = {{"violations", violations},
                  {"max_ratio", max_ratio},
                  {"first_violation", first}};
  return rep;
}

ConditionReport necessary_condition_probe(const Weight& w,
                                          const HolderCertificate& cert,
                                          int n_max) {
  const GroupModel& g = w.group();
  require(g.family() == Family::kLattice && g.dimension() == 1,
          "the probe is defined on Z");
  require(cert.theta > 0 && cert.theta < 1, "theta must lie in (0, 1)");
  require(n_max >= 16, "n_max must be >= 16");
  ConditionReport rep;
  rep.condition = "necessary_condition";
  rep.params = {{"weight", w.describe()},
                {"theta", cert.theta},
                {"C", cert.constant},
                {"n_max", n_max}};
  const double log_c = std::log(std::max(cert.constant, 1e-300));
  const double th = cert.theta;
  std::vector<double> l(n_max + 1, 0.0);
  int first_bad = 0;
  nlohmann::json samples = nlohmann::json::array();
  for (int n = 1; n <= n_max; ++n) {
    l[n] = w.log_at_length(2 * n) - (1.0 + th) * w.log_at_length(n);
    if (l[n] > log_c + 1e-12 && first_bad == 0) first_bad = n;
    if ((n & (n - 1)) == 0 || n == n_max) {
      nlohmann::json row = {{"n", n}, {"log_ratio", l[n]}};
      if (w.is_profile()) {
        const double rho = w.rho(n);
        row["rho_ratio"] = w.rho(2.0 * n) / rho;
        row["threshold"] = 1.0 + th + log_c / rho;
      }
      samples.push_back(row);
    }
  }
  const int w0 = (2 * n_max) / 3;
  double m1 = 0, m2 = 0;
  const int mid = (w0 + n_max) / 2;
  for (int n = w0; n < mid; ++n) m1 += l[n] / (mid - w0);
  for (int n = mid; n <= n_max; ++n) m2 += l[n] / (n_max - mid + 1);
  const bool increasing = m2 > m1 + 1e-12;
  rep.evidence = {{"samples", samples},
                  {"max_log_ratio", *std::max_element(l.begin() + 1, l.end())},
                  {"log_C", log_c},
                  {"trend", increasing ? "increasing" : "nonincreasing"},
                  {"first_violation_n", first_bad}};
  if (first_bad != 0) {
    rep.status = Status::kRefuted;
  } else {
    rep.status = increasing ? Status::kInconclusive : Status::kVerified;
  }
  return rep;
}

}  // namespace wconv

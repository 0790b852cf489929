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

#include "core/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/numeric.hpp"
#include "core/radial_sum.hpp"

namespace wconv {

const char* weight_family_name(WeightFamily f) {
  switch (f) {
    case WeightFamily::kPolynomial: return "polynomial";
    case WeightFamily::kSubexpPower: return "subexp_power";
    case WeightFamily::kSubexpLog: return "subexp_log";
    case WeightFamily::kLocallyFinite: return "locally_finite";
    case WeightFamily::kCustomProfile: return "custom_profile";
  }
  return "unknown";
}

const char* aux_mode_name(AuxMode m) {
  return m == AuxMode::kWeaklySubadditive ? "weakly_subadditive"
                                          : "rho_profile";
}

struct Weight::Impl {
  WeightFamily family = WeightFamily::kPolynomial;
  GroupModel group;
  double beta = 0, alpha = 0, c = 1, gamma = 1, d = 1;
  // locally finite: log n_i at index i-1, or log(base) for n_i = base^i
  std::vector<double> log_n;
  double log_base = 0;
  std::function<double(double)> rho_fn;
  std::vector<double> table;
  std::string label;
};

Weight::Weight(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Weight Weight::polynomial(GroupModel g, double beta) {
  require(g.family() != Family::kLocallyFinite,
          "profile weights need a finitely generated group");
  require(std::isfinite(beta) && beta >= 0, "beta must be >= 0");
  auto impl = std::make_shared<Impl>();
  impl->family = WeightFamily::kPolynomial;
  impl->group = std::move(g);
  impl->beta = beta;
  return Weight(std::move(impl));
}

Weight Weight::subexp_power(GroupModel g, double alpha, double c) {
  require(g.family() != Family::kLocallyFinite,
          "profile weights need a finitely generated group");
  require(alpha > 0 && alpha < 1, "alpha must lie in (0, 1)");
  require(c > 0 && std::isfinite(c), "C must be positive");
  auto impl = std::make_shared<Impl>();
  impl->family = WeightFamily::kSubexpPower;
  impl->group = std::move(g);
  impl->alpha = alpha;
  impl->c = c;
  return Weight(std::move(impl));
}

Weight Weight::subexp_log(GroupModel g, double gamma, double c) {
  require(g.family() != Family::kLocallyFinite,
          "profile weights need a finitely generated group");
  require(gamma > 0 && std::isfinite(gamma), "gamma must be positive");
  require(c > 0 && std::isfinite(c), "C must be positive");
  auto impl = std::make_shared<Impl>();
  impl->family = WeightFamily::kSubexpLog;
  impl->group = std::move(g);
  impl->gamma = gamma;
  impl->c = c;
  return Weight(std::move(impl));
}

Weight Weight::locally_finite(GroupModel g, std::vector<double> n_seq,
                              double d) {
  require(g.family() == Family::kLocallyFinite,
          "locally finite weights need the locally finite group");
  require(d > 0, "D must be positive");
  require(n_seq.size() + 1 >= static_cast<std::size_t>(g.chain_length()),
          "need n_1..n_{L-1} for a chain of length L");
  auto impl = std::make_shared<Impl>();
  for (std::size_t i = 0; i < n_seq.size(); ++i) {
    require(n_seq[i] >= 1 && std::isfinite(n_seq[i]), "n_i must be >= 1");
    require(i == 0 || n_seq[i] > n_seq[i - 1], "n_i must increase");
    impl->log_n.push_back(std::log(n_seq[i]));
  }
  impl->family = WeightFamily::kLocallyFinite;
  impl->group = std::move(g);
  impl->d = d;
  return Weight(std::move(impl));
}

Weight Weight::locally_finite_geometric(GroupModel g, double base, double d) {
  require(g.family() == Family::kLocallyFinite,
          "locally finite weights need the locally finite group");
  require(base > 1 && std::isfinite(base), "base must exceed 1");
  require(d > 0, "D must be positive");
  auto impl = std::make_shared<Impl>();
  impl->family = WeightFamily::kLocallyFinite;
  impl->group = std::move(g);
  impl->log_base = std::log(base);
  impl->d = d;
  return Weight(std::move(impl));
}

Weight Weight::custom_profile(GroupModel g, std::function<double(double)> rho,
                              std::string label) {
  require(g.family() != Family::kLocallyFinite,
          "profile weights need a finitely generated group");
  require(static_cast<bool>(rho), "profile callable is empty");
  require(std::fabs(rho(0.0)) <= 1e-12, "profile must satisfy rho(0) = 0");
  auto impl = std::make_shared<Impl>();
  impl->family = WeightFamily::kCustomProfile;
  impl->group = std::move(g);
  impl->rho_fn = std::move(rho);
  impl->label = std::move(label);
  return Weight(std::move(impl));
}

Weight Weight::custom_table(GroupModel g, std::vector<double> rho_table,
                           std::string label) {
  require(g.family() != Family::kLocallyFinite,
          "profile weights need a finitely generated group");
  require(rho_table.size() >= 2, "profile table needs rho(0) and rho(1)");
  require(std::fabs(rho_table[0]) <= 1e-12, "profile must satisfy rho(0) = 0");
  for (double v : rho_table) require(std::isfinite(v), "profile value not finite");
  auto impl = std::make_shared<Impl>();
  impl->family = WeightFamily::kCustomProfile;
  impl->group = std::move(g);
  impl->table = std::move(rho_table);
  impl->label = std::move(label);
  return Weight(std::move(impl));
}

WeightFamily Weight::family() const { return impl_->family; }
const GroupModel& Weight::group() const { return impl_->group; }
bool Weight::is_profile() const {
  return impl_->family != WeightFamily::kLocallyFinite;
}

std::string Weight::label() const {
  char buf[160];
  switch (impl_->family) {
    case WeightFamily::kPolynomial:
      std::snprintf(buf, sizeof buf, "poly(beta=%g)", impl_->beta);
      return buf;
    case WeightFamily::kSubexpPower:
      std::snprintf(buf, sizeof buf, "sigma(alpha=%g,C=%g)", impl_->alpha,
                    impl_->c);
      return buf;
    case WeightFamily::kSubexpLog:
      std::snprintf(buf, sizeof buf, "nu(gamma=%g,C=%g)", impl_->gamma,
                    impl_->c);
      return buf;
    case WeightFamily::kLocallyFinite:
      if (impl_->log_n.empty()) {
        std::snprintf(buf, sizeof buf, "lf(base=%g,D=%g)",
                      std::exp(impl_->log_base), impl_->d);
      } else {
        std::snprintf(buf, sizeof buf, "lf(explicit,D=%g)", impl_->d);
      }
      return buf;
    case WeightFamily::kCustomProfile:
      return impl_->label;
  }
  return "?";
}

nlohmann::json Weight::describe() const {
  nlohmann::json j = {{"family", weight_family_name(impl_->family)},
                      {"group", impl_->group.name()},
                      {"label", label()}};
  switch (impl_->family) {
    case WeightFamily::kPolynomial:
      j["beta"] = impl_->beta;
      break;
    case WeightFamily::kSubexpPower:
      j["alpha"] = impl_->alpha;
      j["C"] = impl_->c;
      break;
    case WeightFamily::kSubexpLog:
      j["gamma"] = impl_->gamma;
      j["C"] = impl_->c;
      break;
    case WeightFamily::kLocallyFinite:
      j["D"] = impl_->d;
      if (impl_->log_n.empty()) j["base"] = std::exp(impl_->log_base);
      break;
    case WeightFamily::kCustomProfile:
      if (!impl_->table.empty()) j["table_size"] = impl_->table.size();
      break;
  }
  return j;
}

double Weight::rho(double n) const {
  const Impl& m = *impl_;
  switch (m.family) {
    case WeightFamily::kPolynomial:
      return m.beta * std::log1p(n);
    case WeightFamily::kSubexpPower:
      return m.c * std::pow(n, m.alpha);
    case WeightFamily::kSubexpLog:
      return n == 0 ? 0.0 : m.c * n / std::pow(std::log1p(n), m.gamma);
    case WeightFamily::kCustomProfile: {
      if (m.rho_fn) return m.rho_fn(n);
      const double k = std::round(n);
      require(k == n && k >= 0, "tabulated profiles take integer lengths");
      require(k < static_cast<double>(m.table.size()),
              "length beyond the tabulated profile");
      return m.table[static_cast<std::size_t>(k)];
    }
    case WeightFamily::kLocallyFinite:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "locally finite weights have no rho profile");
}

std::optional<std::int64_t> Weight::length_domain() const {
  if (!impl_->table.empty()) {
    return static_cast<std::int64_t>(impl_->table.size()) - 1;
  }
  if (impl_->family == WeightFamily::kLocallyFinite && !impl_->log_n.empty()) {
    return static_cast<std::int64_t>(impl_->log_n.size()) + 1;
  }
  return std::nullopt;
}

std::optional<double> Weight::ratio_limit() const {
  switch (impl_->family) {
    case WeightFamily::kPolynomial:
      if (impl_->beta > 0) return 1.0;
      return std::nullopt;
    case WeightFamily::kSubexpPower:
      return std::pow(2.0, impl_->alpha);
    case WeightFamily::kSubexpLog:
      return 2.0;
    default:
      return std::nullopt;
  }
}

double Weight::subadditivity_constant() const {
  require(impl_->family == WeightFamily::kLocallyFinite,
          "only locally finite weights carry a subadditivity constant");
  return impl_->d;
}

double Weight::log_at_length(std::int64_t tau) const {
  if (impl_->family != WeightFamily::kLocallyFinite) {
    return rho(static_cast<double>(tau));
  }
  if (tau <= 1) return 0.0;
  const std::int64_t i = tau - 1;
  if (impl_->log_n.empty()) {
    return log1p_exp(static_cast<double>(i) * impl_->log_base);
  }
  require(i <= static_cast<std::int64_t>(impl_->log_n.size()),
          "length beyond the given n_i sequence");
  return log1p_exp(impl_->log_n[i - 1]);
}

double Weight::log_eval(const GroupElement& x) const {
  return log_at_length(impl_->group.length(x));
}

double Weight::operator()(const GroupElement& x) const {
  return std::exp(log_eval(x));
}

AuxiliaryFunction AuxiliaryFunction::build(const Weight& w, double p) {
  require(p >= 1 && std::isfinite(p), "p must lie in [1, inf)");
  if (w.family() == WeightFamily::kLocallyFinite) {
    return AuxiliaryFunction(w, AuxMode::kWeaklySubadditive, p);
  }
  return AuxiliaryFunction(w, AuxMode::kRhoProfile, p);
}

double AuxiliaryFunction::sup_u() const {
  return mode_ == AuxMode::kWeaklySubadditive
             ? std::max(1.0, weight_.subadditivity_constant())
             : 1.0;
}

std::optional<std::int64_t> AuxiliaryFunction::length_domain() const {
  auto d = weight_.length_domain();
  if (d && mode_ == AuxMode::kRhoProfile) return *d / 2;
  return d;
}

double AuxiliaryFunction::log_u_at_length(std::int64_t tau) const {
  if (mode_ == AuxMode::kWeaklySubadditive) {
    return std::log(weight_.subadditivity_constant()) -
           weight_.log_at_length(tau);
  }
  const double t = static_cast<double>(tau);
  return weight_.rho(2 * t) - 2 * weight_.rho(t);
}

double AuxiliaryFunction::log_sigma_at_length(std::int64_t tau) const {
  if (mode_ == AuxMode::kWeaklySubadditive) {
    return std::log(weight_.subadditivity_constant());
  }
  const double t = static_cast<double>(tau);
  return weight_.rho(2 * t) - weight_.rho(t);
}

double AuxiliaryFunction::u(const GroupElement& x) const {
  return std::exp(log_u_at_length(weight_.group().length(x)));
}

double AuxiliaryFunction::sigma(const GroupElement& x) const {
  return std::exp(log_sigma_at_length(weight_.group().length(x)));
}

namespace {

nlohmann::json pair_json(const GroupElement& x, const GroupElement& y) {
  return {x.to_string(), y.to_string()};
}

// Visits all pairs of `small`, then `samples` random pairs from `big`.
template <typename F>
void for_each_pair(const std::vector<GroupElement>& small,
                   const std::vector<GroupElement>& big, int samples,
                   std::uint64_t seed, F&& f) {
  for (const GroupElement& x : small) {
    for (const GroupElement& y : small) f(x, y);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, big.size() - 1);
  for (int i = 0; i < samples; ++i) {
    const GroupElement& x = big[pick(rng)];
    const GroupElement& y = big[pick(rng)];
    f(x, y);
  }
}

}  // namespace

ConditionReport check_weight_axioms(const Weight& w, int radius, int samples,
                                    std::uint64_t seed) {
  require(radius >= 1, "radius must be >= 1");
  require(samples >= 0, "samples must be >= 0");
  ConditionReport rep;
  rep.condition = "weight_axioms";
  rep.params = {{"weight", w.describe()},
                {"radius", radius},
                {"samples", samples},
                {"seed", seed}};
  const GroupModel& g = w.group();
  constexpr double kTol = 1e-12;

  nlohmann::json failures = nlohmann::json::array();
  auto fail = [&](const std::string& what, nlohmann::json where) {
    if (failures.size() < 8) failures.push_back({{"axiom", what}, {"at", where}});
  };

  const double log_e = w.log_eval(g.identity());
  if (std::fabs(log_e) > kTol) fail("identity", g.identity().to_string());

  const std::vector<GroupElement> big = g.ball(radius);
  const std::vector<GroupElement> small = g.ball(std::min(radius, 3));
  std::size_t sym_checked = 0;
  for (const GroupElement& x : big) {
    const double lx = w.log_eval(x);
    if (lx < -kTol) fail("at_least_one", x.to_string());
    if (std::fabs(lx - w.log_eval(inverse(x))) > kTol * std::max(1.0, lx)) {
      fail("symmetry", x.to_string());
    }
    ++sym_checked;
  }

  const bool lf = w.family() == WeightFamily::kLocallyFinite;
  const double log_d = lf ? std::log(w.subadditivity_constant()) : 0.0;
  std::size_t pairs = 0;
  double max_excess = -kInf;
  for_each_pair(small, big, samples, seed,
                [&](const GroupElement& x, const GroupElement& y) {
                  const double lx = w.log_eval(x), ly = w.log_eval(y);
                  const double lxy = w.log_eval(multiply(x, y));
                  const double excess = lxy - lx - ly;
                  max_excess = std::max(max_excess, excess);
                  if (excess > kTol * std::max(1.0, lxy)) {
                    fail("submultiplicative", pair_json(x, y));
                  }
                  if (lf) {
                    if (lxy > std::max(lx, ly)) {
                      fail("ultrametric", pair_json(x, y));
                    }
                    if (lxy > log_d + log_add(lx, ly) + kTol) {
                      fail("weakly_subadditive", pair_json(x, y));
                    }
                  }
                  ++pairs;
                });

  rep.status = failures.empty() ? Status::kVerified : Status::kRefuted;
  rep.evidence = {{"elements_checked", sym_checked},
                  {"pairs_checked", pairs},
                  {"max_log_excess", max_excess},
                  {"failures", failures}};
  return rep;
}

ConditionReport check_aux_inequality(const AuxiliaryFunction& aux, int radius,
                                     int pair_radius, int samples,
                                     std::uint64_t seed) {
  const Weight& w = aux.weight();
  const GroupModel& g = w.group();
  ConditionReport rep;
  rep.condition = "aux_inequality";
  rep.params = {{"mode", aux_mode_name(aux.mode())},
                {"radius", radius},
                {"pair_radius", pair_radius},
                {"samples", samples},
                {"seed", seed}};
  const std::vector<GroupElement> big = g.ball(radius);
  const std::vector<GroupElement> small = g.ball(std::min(radius, pair_radius));
  std::size_t pairs = 0, violations = 0;
  double worst = -kInf;
  nlohmann::json first = nullptr;
  for_each_pair(small, big, samples, seed,
                [&](const GroupElement& x, const GroupElement& y) {
                  const int tx = g.length(x), ty = g.length(y);
                  const double lhs = w.log_eval(multiply(x, y)) -
                                     w.log_at_length(tx) - w.log_at_length(ty);
                  const double rhs = log_add(aux.log_u_at_length(tx),
                                             aux.log_u_at_length(ty));
                  worst = std::max(worst, lhs - rhs);
                  if (lhs > rhs + 1e-12) {
                    if (violations++ == 0) first = pair_json(x, y);
                  }
                  ++pairs;
                });
  rep.status = violations == 0 ? Status::kVerified : Status::kRefuted;
  rep.evidence = {{"pairs_checked", pairs},
                  {"violations", violations},
                  {"max_log_gap", worst},
                  {"first_violation", first}};
  return rep;
}

ConditionReport check_growth_condition(const Weight& w, std::int64_t n_max,
                                       double margin) {
  require(w.is_profile(), "growth condition applies to profile weights");
  require(margin > 0 && margin < 1, "margin must lie in (0, 1)");
  ConditionReport rep;
  rep.condition = "growth_condition";
  std::int64_t n_eff = n_max;
  if (auto dom = w.length_domain()) n_eff = std::min<std::int64_t>(n_eff, *dom / 2);
  require(n_eff >= 64, "growth condition needs n_max >= 64 within the profile domain");
  rep.params = {{"weight", w.describe()},
                {"n_max", n_max},
                {"n_evaluated", n_eff},
                {"margin", margin}};

  const std::int64_t n_lo = static_cast<std::int64_t>(
      std::ceil(std::pow(static_cast<double>(n_eff), 2.0 / 3.0)));
  nlohmann::json samples = nlohmann::json::array();
  double window_max = -kInf;
  std::int64_t first_bad = 0;
  for (std::int64_t n = 1; n <= n_eff; ++n) {
    const double rn = w.rho(static_cast<double>(n));
    if (!(rn > 0)) {
      rep.status = Status::kInconclusive;
      rep.evidence = {{"note", "profile is not positive"}, {"n", n}};
      return rep;
    }
    const double r = w.rho(2.0 * static_cast<double>(n)) / rn;
    if (r > 2.0 + 1e-12 && first_bad == 0) first_bad = n;
    if (n >= n_lo) window_max = std::max(window_max, r);
    if ((n & (n - 1)) == 0 || n == n_eff) samples.push_back({n, r});
  }
  rep.evidence["ratios"] = samples;
  if (first_bad != 0) {
    rep.status = Status::kRefuted;
    rep.evidence["note"] = "rho(2n) > 2 rho(n): profile is not concave";
    rep.evidence["first_violation_n"] = first_bad;
    return rep;
  }

  // Log-spaced points of the window; fit r_n = A + B / ln n.
  std::vector<double> xs, ys;
  const double a = std::log(static_cast<double>(n_lo));
  const double b = std::log(static_cast<double>(n_eff));
  std::int64_t last = 0;
  for (int j = 0; j < 256; ++j) {
    const auto n = static_cast<std::int64_t>(std::llround(std::exp(a + (b - a) * j / 255.0)));
    if (n == last) continue;
    last = n;
    const double nd = static_cast<double>(n);
    xs.push_back(1.0 / std::log(nd));
    ys.push_back(w.rho(2 * nd) / w.rho(nd));
  }
  const LineFit fit = fit_line(xs, ys);
  const std::size_t half = ys.size() / 2;
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < half; ++i) m1 += ys[i] / half;
  for (std::size_t i = half; i < ys.size(); ++i) m2 += ys[i] / (ys.size() - half);
  const bool increasing = m2 > m1 + 1e-12;
  const double limit = fit.intercept;
  const double bound = 2.0 - margin;

  rep.evidence["window"] = {n_lo, n_eff};
  rep.evidence["window_max"] = window_max;
  rep.evidence["trend"] = increasing ? "increasing" : "nonincreasing";
  rep.evidence["extrapolated_limit"] = limit;
  if (auto lim = w.ratio_limit()) {
    rep.evidence["closed_form_limit"] = *lim;
    // Only meaningful when the trend is still moving toward the limit.
    rep.evidence["closed_form_consistent"] =
        std::fabs(limit - *lim) <= 0.05 || std::fabs(window_max - *lim) <= 0.05;
  }

  if (!increasing) {
    rep.status = window_max <= bound ? Status::kVerified : Status::kInconclusive;
  } else if (limit >= bound) {
    rep.status = Status::kRefuted;
  } else {
    rep.status = std::max(window_max, limit) <= bound ? Status::kVerified
                                                      : Status::kInconclusive;
  }
  return rep;
}

ConditionReport check_summability(const AuxiliaryFunction& aux, double s,
                                  double r, int n_max, double margin) {
  require(s > 0 && r > 0, "s and r must be positive");
  ConditionReport rep;
  rep.condition = "summability";
  int n_eff = n_max;
  if (auto dom = aux.length_domain()) {
    n_eff = static_cast<int>(std::min<std::int64_t>(n_eff, *dom));
  }
  rep.params = {{"weight", aux.weight().describe()},
                {"mode", aux_mode_name(aux.mode())},
                {"s", s},
                {"r", r},
                {"n_max", n_max},
                {"n_evaluated", n_eff},
                {"margin", margin}};
  const Weight& w = aux.weight();
  const RadialSum sum = radial_sum(
      w.group(),
      [&](std::int64_t n) {
        return s * aux.log_u_at_length(n) + r * w.log_at_length(n);
      },
      n_eff, margin);
  rep.status = sum.status;
  rep.evidence = sum.to_json();
  return rep;
}

}  // namespace wconv

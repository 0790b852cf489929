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

#include "core/inversion.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/numeric.hpp"

namespace wconv {

namespace {

// JSON has no infinities; overflowed values are spelled out.
nlohmann::json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json ResidualReport::to_json() const {
  return {{"left", left}, {"right", right}};
}

ResidualReport verify_inverse(const AlgebraElement& a, const AlgebraElement& x) {
  const AlgebraElement e = AlgebraElement::identity(a.group());
  ResidualReport r;
  r.left = (convolve(a, x) - e).norm1();
  r.right = (convolve(x, a) - e).norm1();
  return r;
}

nlohmann::json ProductBound::to_json() const {
  return {{"finite", finite},
          {"value", number_json(value)},
          {"log_value", number_json(log_value)},
          {"k_cut", k_cut},
          {"tail", number_json(tail)},
          {"v", v},
          {"C_used", c_used},
          {"variant", variant}};
}

ProductBound bound_product(const ProductBoundInputs& in,
                           const HolderCertificate& cert, int k_cut,
                           bool two_c_variant) {
  require(in.norm_a_A > 0 && in.norm_a_B_lower > 0 && in.inv_norm_B_upper > 0,
          "norms must be positive");
  require(in.norm_a_B_lower <= in.norm_a_B_upper,
          "||a||_B interval has lower > upper");
  require(cert.theta > 0 && cert.theta < 1, "theta must lie in (0, 1)");
  require(k_cut >= 0, "k_cut must be >= 0");
  const double th = cert.theta;
  ProductBound pb;
  pb.c_used = std::max(cert.constant, 1.0) * (two_c_variant ? 2.0 : 1.0);
  pb.variant = two_c_variant ? "2C" : "C";

  const double prod = in.norm_a_B_upper * in.inv_norm_B_upper;
  double v = 1.0 - 1.0 / (prod * prod);
  if (v < 0 && v > -1e-12) v = 0;
  require(v >= 0, "||a||_B ||a^-1||_B < 1 is impossible");
  require(v < 1, "v must lie in [0, 1)");
  pb.v = v;

  const double ln_base = std::log(2.0 * in.norm_a_A * in.norm_a_A /
                                  (in.norm_a_B_lower * in.norm_a_B_lower));
  const double ln_c = std::log(pb.c_used);
  const double ln_v = v > 0 ? std::log(v) : -kInf;
  // t_k = C^(-1/theta) a_k with log a_k = f(k) = (1+theta)^k lnU + 2^k ln v.
  const double ln_u = ln_base + ln_c / th - ln_v;

  // With rho = (1+theta)/2: f(k) = 2^k (rho^k lnU + ln v), which stays
  // representable long after (1+theta)^k and 2^k overflow separately.
  const double rho = (1.0 + th) / 2.0;
  double sum = 0.0;
  constexpr int kHardStop = 4096;
  pb.finite = false;
  for (int k = 0; k <= kHardStop; ++k) {
    double log_t;
    if (v > 0) {
      log_t = std::ldexp(std::pow(rho, k) * ln_u + ln_v, k) - ln_c / th;
    } else {
      const double e1 = std::pow(1.0 + th, k);
      log_t = std::ldexp(1.0, k) > e1 ? -kInf : e1 * ln_base + (e1 - 1.0) / th * ln_c;
    }
    sum += log1p_exp(log_t);
    pb.k_cut = k;
    if (!std::isfinite(sum)) break;
    if (k < k_cut) continue;
    if (v == 0) {
      pb.tail = 0.0;
      pb.finite = true;
      break;
    }
    const int K = k + 1;
    const double rK = std::pow(rho, K);
    // f(K+1) - f(K); it only decreases further once negative. The bound
    // log(1+t) <= t is only useful once the factors are small.
    const double d = std::ldexp(th * rK * ln_u + ln_v, K);
    const double f = std::ldexp(rK * ln_u + ln_v, K);
    if (d < 0 && f - ln_c / th < 0) {
      pb.tail = std::exp(f - ln_c / th) / (-std::expm1(d));
      pb.finite = std::isfinite(pb.tail);
      break;
    }
  }
  if (!pb.finite) {
    pb.value = kInf;
    pb.log_value = kInf;
    pb.tail = kInf;
    return pb;
  }
  pb.log_value = std::log(in.norm_a_A) - 2.0 * std::log(in.norm_a_B_lower) +
                 sum + pb.tail;
  pb.value = std::exp(pb.log_value);
  return pb;
}

nlohmann::json AsymptoticBound::to_json() const {
  if (!applicable) return {{"applicable", false}, {"reason", reason}};
  return {{"applicable", true},
          {"value", number_json(value)},
          {"log_value", log_value},
          {"nu", nu},
          {"v", v},
          {"log_u", log_u},
          {"gamma", gamma},
          {"C_tilde", c_tilde},
          {"k_m", k_m},
          {"max_exponent", max_exponent},
          {"max_exponent_numeric", max_exponent_numeric},
          {"k0", k0},
          {"N", n_finite},
          {"log_finite_part", log_finite_part},
          {"infinite_part_exponent", infinite_part_exponent},
          {"C1", c1},
          {"C2", c2},
          {"C_hat", c_hat},
          {"K", k_const},
          {"E", e_exp},
          {"closed_form_log", closed_form_log}};
}

AsymptoticBound asymptotic_bound(double nu, double norm_a_A,
                                 double inv_norm_B_upper,
                                 const HolderCertificate& cert) {
  require(cert.theta > 0 && cert.theta < 1, "theta must lie in (0, 1)");
  require(norm_a_A > 0 && inv_norm_B_upper > 0, "norms must be positive");
  AsymptoticBound ab;
  ab.nu = nu;
  if (!(nu >= 2.0)) {
    ab.applicable = false;
    ab.reason = "nu < 2";
    return ab;
  }
  ab.applicable = true;
  const double th = cert.theta;
  const double c = std::max(cert.constant, 1.0);
  const double ln_c = std::log(c);
  const double ln2 = std::log(2.0);
  const double ln_nu = std::log(nu);

  ab.v = 1.0 - 1.0 / (nu * nu);
  const double lv = -std::log1p(-1.0 / (nu * nu));  // ln(1/v)
  // u = 2 C^(1/theta) / (v (1 - v))
  ab.log_u = ln2 + ln_c / th + lv + 2.0 * ln_nu;
  const double lu = ab.log_u;
  const double g = std::log2(1.0 + th);
  ab.gamma = g;
  ab.c_tilde = (1.0 - g) * std::pow(g, g / (1.0 - g));
  const double q = std::log(2.0 / (1.0 + th));

  ab.k_m = std::log(std::log1p(th) * lu / (ln2 * lv)) / q;
  ab.max_exponent = ab.c_tilde * std::pow(lu, 1.0 / (1.0 - g)) *
                    std::pow(lv, -g / (1.0 - g));
  ab.max_exponent_numeric =
      std::pow(1.0 + th, ab.k_m) * lu - std::pow(2.0, ab.k_m) * lv;
  ab.k0 = std::log(lu / lv) / q;
  ab.n_finite = static_cast<int>(std::floor(ab.k0));
  ab.log_finite_part =
      (ab.n_finite + 1) * log1p_exp(ab.max_exponent - ln_c / th);
  ab.infinite_part_exponent = 1.0 / (1.0 - std::pow(8.0, -(1.0 - th)));
  ab.c1 = std::exp(ab.infinite_part_exponent);

  const double log_pref = std::log(norm_a_A) + 2.0 * std::log(inv_norm_B_upper);
  ab.log_value = log_pref + ab.log_finite_part + ab.infinite_part_exponent;
  ab.value = std::exp(ab.log_value);

  // ln u / ln(1/v) <= C_hat nu^2 ln nu and k0 + 1 <= K ln nu for nu >= 2.
  ab.c_hat = 1.0 / (4.0 * ln2) + (ln2 + ln_c / th) / ln2 + 2.0;
  ab.k_const = (std::max(std::log(ab.c_hat), 0.0) / ln2 + 2.0 + 1.0 / M_E) / q +
               1.0 / ln2;
  ab.e_exp = (2.0 - g) / (1.0 - g);
  ab.c2 = ab.k_const * (ab.c_tilde * std::pow(ab.c_hat, 1.0 / (1.0 - g)) * 4.0 / 3.0 +
                        std::pow(ln2, 2.0 - ab.e_exp));
  ab.closed_form_log = log_pref + ab.infinite_part_exponent +
                       ab.c2 * std::pow(nu, 2.0 * g / (1.0 - g)) *
                           std::pow(ln_nu, ab.e_exp);
  return ab;
}

nlohmann::json InversionReport::to_json() const {
  nlohmann::json trace = nlohmann::json::array();
  for (std::size_t n = 1; n <= neumann_trace.size(); n *= 2) {
    trace.push_back({{"n", n}, {"l1", neumann_trace[n - 1]}});
  }
  if (!neumann_trace.empty()) {
    trace.push_back({{"n", neumann_trace.size()}, {"l1", neumann_trace.back()}});
  }
  nlohmann::json j = {
      {"norm_a_A", norm_a_A},
      {"norm_a_B", norm_a_B.to_json()},
      {"inv_norm_B", inv_norm_B.to_json()},
      {"c_norm_B", c_norm_B.to_json()},
      {"c_norm_formula", {c_norm_formula_lower, c_norm_formula_upper}},
      {"h_upper", h_upper},
      {"nu", nu},
      {"actual", actual},
      {"terms", terms},
      {"residual", residual.to_json()},
      {"inverse_support", inverse.support_size()},
      {"inverse_eps", inverse.eps()},
      {"neumann_trace", trace},
      {"certificate_valid", certificate_valid}};
  j["product_bound"] = product ? product->to_json() : nlohmann::json(nullptr);
  if (asymptotic) {
    j["asymptotic_bound"] = asymptotic->to_json();
    if (!asymptotic_note.empty()) j["asymptotic_bound"]["note"] = asymptotic_note;
  } else {
    j["asymptotic_bound"] = {{"applicable", false}, {"reason", asymptotic_note}};
  }
  return j;
}

InversionReport neumann_invert(const AlgebraElement& a, const Weight& w,
                               double p, const HolderCertificate* cert,
                               const InversionOptions& opt) {
  require(opt.tol > 0, "tol must be positive");
  require(opt.n_max >= 1, "n_max must be >= 1");
  require(!a.empty(), "cannot invert the zero element");
  if (!a.group().same_group(w.group())) {
    throw Error(ErrorCode::kFamilyMismatch, "element and weight live on different groups");
  }
  const GroupModel& G = a.group();
  InversionReport rep;
  rep.norm_a_A = norm_p_omega(a, w, p);

  ConvolutionOptions exact;
  exact.support_cap = opt.power.support_cap;
  const AlgebraElement a_star = involute(a);
  const AlgebraElement h = convolve(a_star, a, exact);
  const NormInterval hb = hermitian_norm_bounds(h, opt.k_max, opt.power);
  rep.h_upper = hb.upper;
  rep.norm_a_B.lower = std::max(std::sqrt(hb.lower), a.norm2());
  rep.norm_a_B.upper = std::min(std::sqrt(hb.upper), a.norm1() + a.eps());
  rep.norm_a_B.method = "dyadic_powers(a*a)";
  rep.norm_a_B.flagged = hb.flagged;
  rep.norm_a_B.k_reached = hb.k_reached;

  const AlgebraElement e = AlgebraElement::identity(G);
  const AlgebraElement c = e - h.scaled(1.0 / hb.upper);
  rep.c_norm_B = hermitian_norm_bounds(c, opt.k_max, opt.power);
  const double uc = rep.c_norm_B.upper;
  nlohmann::json diag = {{"c_norm_B", rep.c_norm_B.to_json()},
                         {"h_upper", hb.upper},
                         {"norm_a_A", rep.norm_a_A}};
  if (!(uc < 1.0)) {
    throw Error(ErrorCode::kNotInvertible,
                "not certified invertible: no route gives ||c||_B < 1", diag);
  }

  // ||a^-1||_B^2 = 1 / lambda_min(a*a) and lambda_min >= U_h (1 - ||c||_B).
  rep.inv_norm_B.upper = 1.0 / std::sqrt(hb.upper * (1.0 - uc));
  rep.inv_norm_B.lower = 1.0 / std::sqrt(hb.upper * (1.0 - rep.c_norm_B.lower));
  rep.inv_norm_B.lower = std::max(rep.inv_norm_B.lower, 1.0 / rep.norm_a_B.upper);
  rep.inv_norm_B.lower = std::min(rep.inv_norm_B.lower, rep.inv_norm_B.upper);
  rep.inv_norm_B.method = "spectral_gap(c)";
  rep.inv_norm_B.flagged = rep.c_norm_B.flagged;
  rep.inv_norm_B.k_reached = rep.c_norm_B.k_reached;
  // ||a||_B >= 1 / ||a^-1||_B
  rep.norm_a_B.lower = std::max(rep.norm_a_B.lower, 1.0 / rep.inv_norm_B.upper);
  rep.norm_a_B.lower = std::min(rep.norm_a_B.lower, rep.norm_a_B.upper);

  auto c_formula = [](double ia, double na) { return 1.0 - 1.0 / (ia * ia * na * na); };
  rep.c_norm_formula_lower = c_formula(rep.inv_norm_B.lower, rep.norm_a_B.lower);
  rep.c_norm_formula_upper = c_formula(rep.inv_norm_B.upper, rep.norm_a_B.upper);

  // Neumann series; x_N a - e = -c^(N+1) exactly, so ||c^(N+1)|| is the
  // one-sided residual of the partial sum.
  ConvolutionOptions copt;
  copt.trunc = opt.trunc;
  copt.support_cap = opt.power.support_cap;
  AlgebraElement sum = e;
  AlgebraElement term = e;
  int n = 0;
  for (;;) {
    term = convolve(term, c, copt);
    ++n;
    // The eps bound grows like ||c||_1^n; the final residual is recomputed
    // from x directly, so the stopping rule uses the computed norm.
    const double r = term.norm1();
    rep.neumann_trace.push_back(r);
    if (r < opt.tol) break;
    if (n >= opt.n_max) {
      diag["terms"] = n;
      diag["last_term_l1"] = r;
      throw Error(ErrorCode::kNotConverged,
                  "Neumann series did not reach tol within n_max terms", diag);
    }
    sum = sum + term;
  }
  rep.terms = n;
  rep.inverse = convolve(sum, a_star, exact).scaled(1.0 / hb.upper);
  rep.residual = verify_inverse(a, rep.inverse);
  rep.actual = norm_p_omega(rep.inverse, w, p);
  rep.nu = rep.norm_a_A * rep.inv_norm_B.upper;

  if (cert != nullptr) {
    rep.certificate_valid = true;
    ProductBoundInputs in;
    in.norm_a_A = rep.norm_a_A;
    in.norm_a_B_lower = rep.norm_a_B.lower;
    in.norm_a_B_upper = rep.norm_a_B.upper;
    in.inv_norm_B_upper = rep.inv_norm_B.upper;
    rep.product = bound_product(in, *cert, opt.k_cut, opt.two_c_variant);
    // The chain needs v <= 1 - 1/nu^2, i.e. ||a||_B <= ||a||_A. Otherwise it
    // is evaluated at ||a||_B ||a^-1||_B, which keeps every step valid.
    const double nu_eval = std::max(rep.nu, rep.norm_a_B.upper * rep.inv_norm_B.upper);
    if (rep.nu < 2.0) {
      rep.asymptotic_note = "nu < 2";
    } else {
      rep.asymptotic = asymptotic_bound(nu_eval, rep.norm_a_A, rep.inv_norm_B.upper, *cert);
      if (nu_eval > rep.nu) {
        rep.asymptotic_note = "evaluated at ||a||_B ||a^-1||_B since ||a||_B > ||a||_A";
      }
    }
  } else {
    rep.asymptotic_note = "no certificate";
  }
  return rep;
}

}  // namespace wconv

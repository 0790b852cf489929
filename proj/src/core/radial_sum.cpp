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

#include "core/radial_sum.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/numeric.hpp"

namespace wconv {

double RadialSum::total() const { return std::exp(log_total); }

nlohmann::json RadialSum::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (int n = 1; n <= n_max; n *= 2) {
    terms.push_back({{"n", n}, {"log_shell_term", log_shell_terms[n]}});
  }
  terms.push_back({{"n", n_max}, {"log_shell_term", log_shell_terms[n_max]}});
  return {{"status", status_name(status)},
          {"certificate", certificate},
          {"n_max", n_max},
          {"window_from", window_from},
          {"rate", rate},
          {"log_partial", log_partial},
          {"log_tail", log_tail},
          {"log_total", log_total},
          {"total", std::isfinite(log_total) ? total() : -1.0},
          {"majorant_used", majorant_used},
          {"exact_through", exact_through},
          {"shell_terms", terms}};
}

namespace {

double mean(const std::vector<double>& v, std::size_t from, std::size_t to) {
  double s = 0;
  for (std::size_t i = from; i < to; ++i) s += v[i];
  return s / static_cast<double>(to - from);
}

}  // namespace

RadialSum radial_sum(const GroupModel& g,
                     const std::function<double(std::int64_t)>& log_term,
                     int n_max, double margin) {
  require(n_max >= 12, "radial sums need n_max >= 12");
  RadialSum out;
  out.n_max = n_max;
  out.log_shell_terms.resize(n_max + 1);
  out.exact_through = n_max;
  double partial = -kInf;
  for (int n = 0; n <= n_max; ++n) {
    const ShellCount sc = g.log_shell_count(n);
    if (!sc.exact && !out.majorant_used) {
      out.majorant_used = true;
      out.exact_through = n - 1;
    }
    const double lt = log_term(n);
    const double l = lt == -kInf ? -kInf : sc.log_count + lt;
    out.log_shell_terms[n] = l;
    partial = log_add(partial, l);
  }
  out.log_partial = partial;

  const int w0 = (2 * n_max + 2) / 3;
  out.window_from = w0;
  const std::vector<double>& L = out.log_shell_terms;
  if (L[n_max] == -kInf) {
    out.status = Status::kVerified;
    out.certificate = "geometric";
    out.log_tail = -kInf;
    out.log_total = partial;
    return out;
  }

  // Shell ratios S_{n+1}/S_n over the window, in log form.
  std::vector<double> lr;
  for (int n = w0; n < n_max; ++n) lr.push_back(L[n + 1] - L[n]);
  const double max_lr = *std::max_element(lr.begin(), lr.end());
  const std::size_t half = lr.size() / 2;
  const bool ratio_nonincreasing =
      mean(lr, half, lr.size()) <= mean(lr, 0, half) + 1e-12;

  // Decay exponent of S_n ~ n^(-kappa) on each half of the window.
  auto slope = [&](int from, int to) {
    std::vector<double> xs, ys;
    for (int n = from; n <= to; ++n) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(L[n]);
    }
    return -fit_line(xs, ys).slope;
  };
  const int mid = (w0 + n_max) / 2;
  const double k1 = slope(w0, mid);
  const double k2 = slope(mid, n_max);
  const double kappa = std::min(k1, k2);

  const double lN = L[n_max];
  if (max_lr < 0.0 && ratio_nonincreasing) {
    const double rho = std::exp(max_lr);
    out.status = Status::kVerified;
    out.certificate = "geometric";
    out.rate = rho;
    out.log_tail = lN + std::log(rho) - std::log1p(-rho);
  } else if (kappa > 1.0 + margin && k2 >= 0.9 * k1) {
    // sum_{n>N} S_N (n/N)^-kappa <= S_N N / (kappa - 1)
    out.status = Status::kVerified;
    out.certificate = "power_law";
    out.rate = kappa;
    out.log_tail = lN + std::log(static_cast<double>(n_max)) -
                   std::log(kappa - 1.0);
  } else {
    bool nondecreasing = true;
    for (double v : lr) nondecreasing = nondecreasing && v >= -1e-12;
    // A majorant growing says nothing about the true sum.
    const bool exact_window = out.exact_through >= n_max;
    out.status = nondecreasing && exact_window ? Status::kRefuted
                                               : Status::kInconclusive;
    out.rate = kappa;
    out.log_tail = kInf;
  }
  out.log_total = log_add(partial, out.log_tail);
  return out;
}

}  // namespace wconv

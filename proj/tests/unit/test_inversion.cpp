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

#include <cmath>

#include "core/algebra.hpp"
#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/inversion.hpp"
#include "doctest.h"

using namespace wconv;

namespace {

const GroupModel kZ = GroupModel::lattice(1);

AlgebraElement geometric() {
  return AlgebraElement::identity(kZ) -
         AlgebraElement::delta(kZ, GroupElement::lattice({1}), 0.5);
}

HolderCertificate cert_for(const Weight& w, double p, double s, double r) {
  return estimate_theta(w, AuxiliaryFunction::build(w, p), p, s, r);
}

ProductBoundInputs inputs(double a, double bl, double bu, double ib) {
  ProductBoundInputs in;
  in.norm_a_A = a;
  in.norm_a_B_lower = bl;
  in.norm_a_B_upper = bu;
  in.inv_norm_B_upper = ib;
  return in;
}

}  // namespace

TEST_CASE("verify_inverse") {
  const AlgebraElement e = AlgebraElement::identity(kZ);
  CHECK(verify_inverse(e, e).max() == 0.0);
  const ResidualReport r = verify_inverse(geometric(), e);
  CHECK(r.left == doctest::Approx(0.5));
  CHECK(r.right == doctest::Approx(0.5));
}

TEST_CASE("inverting the identity") {
  const Weight w = Weight::polynomial(kZ, 0.0);
  const InversionReport r = neumann_invert(AlgebraElement::identity(kZ), w, 1.0, nullptr);
  CHECK(r.terms == 1);
  CHECK(r.residual.max() == 0.0);
  CHECK(r.inverse.support_size() == 1);
  CHECK(r.inverse.coefficient(kZ.identity()) == Complex(1.0));
}

TEST_CASE("geometric inverse on Z, unweighted") {
  const Weight w = Weight::polynomial(kZ, 0.0);
  const InversionReport r = neumann_invert(geometric(), w, 1.0, nullptr);
  CHECK(r.residual.max() < 1e-10);
  CHECK(r.actual == doctest::Approx(2.0).epsilon(1e-9));
  for (int n = 0; n <= 80; ++n) {
    CHECK(std::abs(r.inverse.coefficient(GroupElement::lattice({n})) - std::ldexp(1.0, -n)) <
          1e-10);
  }
  for (const Term& t : r.inverse.terms()) {
    if (t.x.c[0] < 0) CHECK(std::abs(t.c) < 1e-10);
  }
  CHECK(!r.product.has_value());
  CHECK(r.asymptotic_note == "no certificate");
}

TEST_CASE("unweighted norm is bounded through the beta = 1 certificate") {
  // ||x||_1 <= ||x||_{1,w1} <= product bound for w1
  const Weight w1 = Weight::polynomial(kZ, 1.0);
  const HolderCertificate c = cert_for(w1, 1.0, 4.0, 2.5);
  const InversionReport r = neumann_invert(geometric(), w1, 1.0, &c);
  REQUIRE(r.product.has_value());
  CHECK(r.inverse.norm1() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::log(2.0) <= r.product->log_value);
  CHECK(std::log(r.actual) <= r.product->log_value + 1e-9);
}

TEST_CASE("weighted geometric inverse, beta = 2") {
  double oracle = 0.0;
  for (int n = 0; n < 200; ++n) oracle += std::ldexp((1.0 + n) * (1.0 + n), -n);
  CHECK(oracle == doctest::Approx(12.0).epsilon(1e-15));
  const Weight w = Weight::polynomial(kZ, 2.0);
  const HolderCertificate c = cert_for(w, 1.0, 4.0, 2.5);
  const InversionReport r = neumann_invert(geometric(), w, 1.0, &c);
  CHECK(std::abs(r.actual - oracle) < 1e-8);
  REQUIRE(r.product.has_value());
  CHECK(std::log(r.actual) <= r.product->log_value + 1e-9);
}

TEST_CASE("residual decreases along the Neumann trace") {
  const Weight w = Weight::polynomial(kZ, 0.0);
  const InversionReport r = neumann_invert(geometric(), w, 1.0, nullptr);
  for (std::size_t i = 1; i < r.neumann_trace.size(); ++i) {
    CHECK(r.neumann_trace[i] <= r.neumann_trace[i - 1] * (1 + 1e-12));
  }
}

TEST_CASE("non-invertible and non-converging inputs") {
  const Weight w = Weight::polynomial(kZ, 0.0);
  const AlgebraElement d = AlgebraElement::identity(kZ) -
                           AlgebraElement::delta(kZ, GroupElement::lattice({1}));
  try {
    neumann_invert(d, w, 1.0, nullptr);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotInvertible);
    CHECK(e.diagnostics().contains("c_norm_B"));
  }
  InversionOptions opt;
  opt.n_max = 5;
  try {
    neumann_invert(geometric(), w, 1.0, nullptr, opt);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotConverged);
  }
}

TEST_CASE("bound_product examples") {
  const HolderCertificate c1 = HolderCertificate::manual(0.5, 1.0);
  const ProductBound a = bound_product(inputs(1, 1, 1, 1), c1);
  CHECK(a.finite);
  CHECK(a.value == doctest::Approx(3.0));
  const ProductBound b = bound_product(inputs(2, 1, 1, 1), c1);
  CHECK(b.value == doctest::Approx(18.0));
  // C below 1 is clamped
  CHECK(bound_product(inputs(2, 1, 1, 1), HolderCertificate::manual(0.5, 0.25)).value ==
        doctest::Approx(18.0));
  CHECK_THROWS_AS(bound_product(inputs(1, 2, 1, 1), c1), Error);
  CHECK_THROWS_AS(bound_product(inputs(1, 0.5, 0.5, 1), c1), Error);
}

TEST_CASE("bound_product matches a direct evaluation of the factors") {
  const HolderCertificate c = HolderCertificate::manual(0.4, 3.0);
  const double A = 1.3, B = 1.1, I = 1.2;
  const double v = 1.0 - 1.0 / (B * B * I * I);
  double log_direct = std::log(A / (B * B));
  for (int k = 0; k < 200; ++k) {
    const double e1 = std::pow(1.4, k), e2 = std::ldexp(1.0, k) - e1;
    const double lt = e1 * std::log(2 * A * A / (B * B)) + (e1 - 1) / 0.4 * std::log(3.0) +
                      e2 * std::log(v);
    if (lt < -800) break;
    log_direct += std::log1p(std::exp(lt));
  }
  const ProductBound pb = bound_product(inputs(A, B, B, I), c);
  REQUIRE(pb.finite);
  CHECK(pb.log_value >= log_direct - 1e-12);
  CHECK(pb.log_value == doctest::Approx(log_direct).epsilon(1e-9));
}

TEST_CASE("bound_product is monotone in ||a||_A and ||a^-1||_B") {
  const HolderCertificate c = HolderCertificate::manual(0.5, 2.0);
  double prev_a = -1e300;
  for (double a = 1.0; a <= 3.0; a += 0.25) {
    const double l = bound_product(inputs(a, 1.0, 1.0, 1.3), c).log_value;
    CHECK(l >= prev_a);
    prev_a = l;
    double prev_i = -1e300;
    for (double i = 1.0; i <= 2.0; i += 0.125) {
      const double li = bound_product(inputs(a, 1.0, 1.0, i), c).log_value;
      CHECK(li >= prev_i);
      prev_i = li;
    }
  }
}

TEST_CASE("asymptotic bound") {
  const HolderCertificate c = HolderCertificate::manual(0.5, 1.0);
  const AsymptoticBound a2 = asymptotic_bound(2.0, 2.0, 1.0, c);
  REQUIRE(a2.applicable);
  CHECK(std::isfinite(a2.log_value));
  CHECK(a2.value > 0);
  CHECK(a2.log_value > bound_product(inputs(2, 1, 1, 1), c).log_value);
  CHECK(a2.log_value > bound_product(inputs(2, 2, 2, 1), c).log_value);
  CHECK(a2.log_value <= a2.closed_form_log);
  CHECK(a2.gamma == doctest::Approx(std::log2(1.5)));
  CHECK(a2.max_exponent_numeric <= a2.max_exponent * (1 + 1e-12));

  const AsymptoticBound a4 = asymptotic_bound(4.0, 2.0, 1.0, c);
  CHECK(a4.log_value > a2.log_value);
  const AsymptoticBound low = asymptotic_bound(1.9, 2.0, 1.0, c);
  CHECK(!low.applicable);
  CHECK(low.reason == "nu < 2");
}

TEST_CASE("asymptotic bound dominates the product bound over a grid") {
  for (double th : {0.1, 0.5, 0.9}) {
    for (double C : {1.0, 4.0, 50.0}) {
      const HolderCertificate c = HolderCertificate::manual(th, C);
      for (double A : {1.0, 2.0, 5.0}) {
        for (double I : {1.0, 2.0, 5.0}) {
          const double nu = A * I;
          if (nu < 2.0) continue;
          // any ||a||_B in [1/I, A]
          for (double B : {1.0 / I, std::sqrt(A / I), A}) {
            const ProductBound pb = bound_product(inputs(A, B, B, I), c);
            const AsymptoticBound ab = asymptotic_bound(nu, A, I, c);
            INFO("theta=" << th << " C=" << C << " A=" << A << " I=" << I << " B=" << B);
            CHECK(pb.log_value <= ab.log_value + 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("dyadic chain for powers of c") {
  // ||c^(2^k)||_A <= C^(((1+t)^k - 1)/t) ||c||_A^((1+t)^k) ||c||_B^(2^k - (1+t)^k)
  const Weight w = Weight::polynomial(kZ, 3.0);
  const HolderCertificate cert = cert_for(w, 1.0, 3.5, 2.5);
  const AlgebraElement a = geometric();
  const AlgebraElement h = convolve(involute(a), a);
  const NormInterval hb = hermitian_norm_bounds(h, 10);
  const AlgebraElement c = AlgebraElement::identity(kZ) - h.scaled(1.0 / hb.upper);
  const NormInterval cb = hermitian_norm_bounds(c, 10);
  REQUIRE(cb.upper < 1.0);
  const double th = cert.theta, ln_ca = std::log(norm_p_omega(c, w, 1.0));
  AlgebraElement pw = c;
  for (int k = 1; k <= 6; ++k) {
    pw = convolve(pw, pw);
    const double g = std::pow(1 + th, k);
    const double bound = (g - 1) / th * std::log(cert.constant) + g * ln_ca +
                         (std::ldexp(1.0, k) - g) * std::log(cb.upper);
    CHECK(std::log(norm_p_omega(pw, w, 1.0)) <= bound + 1e-9);
  }
}

TEST_CASE("soundness and ordering across families") {
  struct Case {
    const char* name;
    AlgebraElement a;
    Weight w;
    double p, s, r;
  };
  const GroupModel z2 = GroupModel::lattice(2), h = GroupModel::heisenberg(),
                   lf = GroupModel::locally_finite(24);
  auto z2e = AlgebraElement::identity(z2) -
             AlgebraElement::delta(z2, GroupElement::lattice({1, 0}), 0.3) -
             AlgebraElement::delta(z2, GroupElement::lattice({0, 1}), 0.2);
  auto he = AlgebraElement::identity(h) -
            AlgebraElement::delta(h, GroupElement::heisenberg(1, 0, 0), 0.2) -
            AlgebraElement::delta(h, GroupElement::heisenberg(0, 1, 0), 0.1);
  auto lfe = AlgebraElement::identity(lf) -
             AlgebraElement::delta(lf, GroupElement::subset({1}), 0.4) -
             AlgebraElement::delta(lf, GroupElement::subset({2}), 0.2);
  const std::vector<Case> cases = {
      {"Z beta2 p1", geometric(), Weight::polynomial(kZ, 2.0), 1.0, 4.0, 2.5},
      {"Z sigma p1", geometric(), Weight::subexp_power(kZ, 0.5, 1.0), 1.0, 5.0, 2.5},
      {"Z sigma p2", geometric(), Weight::subexp_power(kZ, 0.5, 1.0), 2.0, 1.5, 0.5},
      {"Z2 beta3 p1", z2e, Weight::polynomial(z2, 3.0), 1.0, 3.5, 2.5},
      {"H sigma p1", he, Weight::subexp_power(h, 0.5, 1.0), 1.0, 5.0, 2.5},
      {"LF p1", lfe, Weight::locally_finite_geometric(lf, 4.0), 1.0, 4.0, 2.5},
  };
  for (const Case& k : cases) {
    INFO(k.name);
    const HolderCertificate c = cert_for(k.w, k.p, k.s, k.r);
    const InversionReport r = neumann_invert(k.a, k.w, k.p, &c);
    CHECK(r.residual.max() < 1e-9);
    REQUIRE(r.product.has_value());
    CHECK(std::log(r.actual) <= r.product->log_value + 1e-9);
    CHECK(r.inv_norm_B.lower <= r.inv_norm_B.upper);
    CHECK(r.norm_a_B.lower <= r.norm_a_B.upper);
    if (r.asymptotic) CHECK(r.product->log_value <= r.asymptotic->log_value + 1e-9);
    if (r.nu < 2.0) CHECK(!r.asymptotic);
  }
}

TEST_CASE("asymptotic bound when ||a||_B exceeds ||a||_A") {
  // p = 2: ||a||_{2,sigma} = 1.53 is below ||a||_op = 1.6
  const Weight w = Weight::subexp_power(kZ, 0.5, 1.0);
  const AlgebraElement a = AlgebraElement::identity(kZ) +
                           AlgebraElement::delta(kZ, GroupElement::lattice({1}), 0.3) +
                           AlgebraElement::delta(kZ, GroupElement::lattice({-1}), 0.3);
  const HolderCertificate c = cert_for(w, 2.0, 1.9, 0.5);
  const InversionReport r = neumann_invert(a, w, 2.0, &c);
  REQUIRE(r.norm_a_B.upper > r.norm_a_A);
  REQUIRE(r.asymptotic.has_value());
  CHECK(r.asymptotic->nu == doctest::Approx(r.norm_a_B.upper * r.inv_norm_B.upper));
  CHECK(r.asymptotic->nu > r.nu);
  CHECK(!r.asymptotic_note.empty());
  CHECK(r.to_json()["asymptotic_bound"].contains("note"));
  CHECK(r.product->log_value <= r.asymptotic->log_value);
}

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

#include "core/algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "absl/container/flat_hash_map.h"
#include "core/error.hpp"
#include "core/lattice_fft.hpp"
#include "core/numeric.hpp"

namespace wconv {

namespace {

bool less_x(const Term& a, const Term& b) { return a.x < b.x; }

constexpr std::size_t kMergeMaxFactor = 64;

void check_same(const AlgebraElement& f, const AlgebraElement& g) {
  if (!f.group().same_group(g.group())) {
    throw Error(ErrorCode::kFamilyMismatch,
                "elements live on different groups: " + f.group().name() +
                    " and " + g.group().name());
  }
}

constexpr std::size_t kDenseMax = std::size_t{1} << 22;

// Lexicographic dense box over the result coordinates, so a linear scan
// yields terms already sorted.
struct DenseBox {
  int rank = 0;
  std::array<std::int64_t, kMaxLatticeDim> lo{}, ext{};
  std::size_t volume = 0;

  std::size_t index(const GroupElement& z) const {
    std::size_t i = 0;
    for (int k = 0; k < rank; ++k) {
      i = i * static_cast<std::size_t>(ext[k]) +
          static_cast<std::size_t>(z.c[k] - lo[k]);
    }
    return i;
  }
};

struct Range {
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  void add(std::int64_t v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

// Empty optional-like result when the box is too large to be worthwhile.
bool make_box(const AlgebraElement& f, const AlgebraElement& g, DenseBox* box) {
  const Family fam = f.group().family();
  const double work = static_cast<double>(f.support_size()) *
                      static_cast<double>(g.support_size());
  const double limit = std::min<double>(kDenseMax, 16.0 * work + 4096.0);
  if (fam == Family::kLocallyFinite) {
    std::uint64_t bits = 0;
    for (const Term& t : f.terms()) bits |= t.x.mask();
    for (const Term& t : g.terms()) bits |= t.x.mask();
    const int width = 64 - std::countl_zero(bits);
    if (width > 30) return false;
    box->rank = 1;
    box->lo[0] = 0;
    box->ext[0] = std::int64_t{1} << width;
    box->volume = static_cast<std::size_t>(box->ext[0]);
    return static_cast<double>(box->volume) <= limit;
  }
  const int dim = f.group().dimension();
  std::array<Range, kMaxLatticeDim> rf, rg;
  for (const Term& t : f.terms()) {
    for (int k = 0; k < dim; ++k) rf[k].add(t.x.c[k]);
  }
  for (const Term& t : g.terms()) {
    for (int k = 0; k < dim; ++k) rg[k].add(t.x.c[k]);
  }
  box->rank = dim;
  for (int k = 0; k < dim; ++k) {
    box->lo[k] = rf[k].lo + rg[k].lo;
    box->ext[k] = rf[k].hi + rg[k].hi - box->lo[k] + 1;
  }
  if (fam == Family::kHeisenberg) {
    // c = c_f + c_g + a_f * b_g
    Range prod;
    for (std::int64_t a : {rf[0].lo, rf[0].hi}) {
      for (std::int64_t b : {rg[1].lo, rg[1].hi}) prod.add(a * b);
    }
    box->lo[2] = rf[2].lo + rg[2].lo + prod.lo;
    box->ext[2] = rf[2].hi + rg[2].hi + prod.hi - box->lo[2] + 1;
  }
  double vol = 1;
  for (int k = 0; k < dim; ++k) vol *= static_cast<double>(box->ext[k]);
  if (vol > limit) return false;
  box->volume = static_cast<std::size_t>(vol);
  return true;
}

GroupElement element_at(const DenseBox& box, std::size_t i, Family fam,
                        int dim) {
  GroupElement z;
  z.family = fam;
  if (fam == Family::kLocallyFinite) {
    z.c[0] = static_cast<std::int64_t>(i);
    return z;
  }
  z.dim = static_cast<std::uint8_t>(dim);
  for (int k = box.rank - 1; k >= 0; --k) {
    const auto e = static_cast<std::size_t>(box.ext[k]);
    z.c[k] = box.lo[k] + static_cast<std::int64_t>(i % e);
    i /= e;
  }
  return z;
}

bool fft_eligible(const AlgebraElement& f, const AlgebraElement& g,
                  const ConvolutionOptions& opt) {
  if (!opt.allow_fft || f.group().family() != Family::kLattice) return false;
  const double work = static_cast<double>(f.support_size()) *
                      static_cast<double>(g.support_size());
  if (work < opt.fft_min_work) return false;
  return fft_volume(f.terms(), g.terms(), f.group().dimension()) <=
         kFftMaxVolume;
}

}  // namespace

AlgebraElement AlgebraElement::delta(const GroupModel& g, const GroupElement& x,
                                     Complex c) {
  g.check_member(x);
  AlgebraElement f(g);
  if (c != Complex(0.0)) f.terms_.push_back({x, c});
  return f;
}

AlgebraElement AlgebraElement::identity(const GroupModel& g) {
  return delta(g, g.identity(), 1.0);
}

AlgebraElement AlgebraElement::from_terms(const GroupModel& g,
                                          std::vector<Term> terms) {
  for (const Term& t : terms) {
    g.check_member(t.x);
    require(std::isfinite(t.c.real()) && std::isfinite(t.c.imag()),
            "coefficient is not finite");
  }
  std::stable_sort(terms.begin(), terms.end(), less_x);
  AlgebraElement f(g);
  for (const Term& t : terms) {
    if (!f.terms_.empty() && f.terms_.back().x == t.x) {
      f.terms_.back().c += t.c;
    } else {
      f.terms_.push_back(t);
    }
  }
  std::erase_if(f.terms_, [](const Term& t) { return t.c == Complex(0.0); });
  return f;
}

AlgebraElement AlgebraElement::from_sorted(const GroupModel& g,
                                           std::vector<Term> terms,
                                           double eps) {
  AlgebraElement f(g);
  f.terms_ = std::move(terms);
  f.eps_ = eps;
  return f;
}

Complex AlgebraElement::coefficient(const GroupElement& x) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{x, 0.0}, less_x);
  if (it != terms_.end() && it->x == x) return it->c;
  return 0.0;
}

double AlgebraElement::norm1() const {
  double s = 0;
  for (const Term& t : terms_) s += magnitude(t.c);
  return s;
}

double AlgebraElement::norm2() const {
  double s = 0;
  for (const Term& t : terms_) s += std::norm(t.c);
  return std::sqrt(s);
}

AlgebraElement AlgebraElement::scaled(Complex s) const {
  AlgebraElement f(group_);
  if (s == Complex(0.0)) return f;
  f.terms_.reserve(terms_.size());
  for (const Term& t : terms_) {
    const Complex v = t.c * s;
    if (v != Complex(0.0)) f.terms_.push_back({t.x, v});
  }
  f.eps_ = eps_ * std::abs(s);
  return f;
}

namespace {

AlgebraElement merge(const AlgebraElement& f, const AlgebraElement& g,
                     double sign) {
  check_same(f, g);
  std::vector<Term> out;
  out.reserve(f.support_size() + g.support_size());
  auto a = f.terms().begin(), ae = f.terms().end();
  auto b = g.terms().begin(), be = g.terms().end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && a->x < b->x)) {
      out.push_back(*a++);
    } else if (a == ae || b->x < a->x) {
      out.push_back({b->x, sign * b->c});
      ++b;
    } else {
      const Complex v = a->c + sign * b->c;
      if (v != Complex(0.0)) out.push_back({a->x, v});
      ++a;
      ++b;
    }
  }
  return AlgebraElement::from_sorted(f.group(), std::move(out), f.eps() + g.eps());
}

}  // namespace

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  return merge(*this, o, 1.0);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  return merge(*this, o, -1.0);
}

AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g,
                        const ConvolutionOptions& opt) {
  check_same(f, g);
  require(opt.trunc >= 0, "trunc must be >= 0");
  const GroupModel& G = f.group();
  const Family fam = G.family();
  const int dim = G.dimension();
  double eps = f.eps() * (g.norm1() + g.eps()) + g.eps() * f.norm1();
  if (f.empty() || g.empty()) return AlgebraElement::from_sorted(G, {}, eps);

  std::vector<Term> out;
  double dropped = 0.0;
  auto keep = [&](const GroupElement& z, Complex v) {
    if (v == Complex(0.0)) return;
    const double m = magnitude(v);
    if (m < opt.trunc) {
      dropped += m;
    } else {
      out.push_back({z, v});
    }
  };

  DenseBox box;
  if (fft_eligible(f, g, opt)) {
    FftProduct p = fft_convolve(f.terms(), g.terms(), dim, opt.trunc);
    out = std::move(p.terms);
    dropped = p.dropped_l1;
  } else if (make_box(f, g, &box)) {
    std::vector<Complex> acc(box.volume);
    if (fam == Family::kLocallyFinite) {
      for (const Term& s : f.terms()) {
        for (const Term& t : g.terms()) {
          acc[s.x.mask() ^ t.x.mask()] += s.c * t.c;
        }
      }
    } else if (fam == Family::kHeisenberg) {
      GroupElement z = G.identity();
      for (const Term& s : f.terms()) {
        for (const Term& t : g.terms()) {
          z.c[0] = s.x.c[0] + t.x.c[0];
          z.c[1] = s.x.c[1] + t.x.c[1];
          z.c[2] = s.x.c[2] + t.x.c[2] + s.x.c[0] * t.x.c[1];
          acc[box.index(z)] += s.c * t.c;
        }
      }
    } else {
      GroupElement z = G.identity();
      for (const Term& s : f.terms()) {
        for (const Term& t : g.terms()) {
          for (int k = 0; k < dim; ++k) z.c[k] = s.x.c[k] + t.x.c[k];
          acc[box.index(z)] += s.c * t.c;
        }
      }
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (acc[i] != Complex(0.0)) keep(element_at(box, i, fam, dim), acc[i]);
    }
  } else if (fam != Family::kLocallyFinite &&
             std::min(f.support_size(), g.support_size()) <= kMergeMaxFactor) {
    // Right translation preserves the lexicographic order on Z^d and H3(Z),
    // so f * g is a k-way merge of the sorted lists f * delta_y. On Z^d the
    // product commutes, so either factor can play the small role.
    const bool swap = g.support_size() > kMergeMaxFactor;
    const std::span<const Term> big = swap ? g.terms() : f.terms();
    const std::span<const Term> small = swap ? f.terms() : g.terms();
    struct Head {
      GroupElement z;
      std::size_t i, j;
    };
    auto later = [](const Head& a, const Head& b) { return b.z < a.z; };
    std::vector<Head> heap;
    heap.reserve(small.size());
    for (std::size_t j = 0; j < small.size(); ++j) {
      heap.push_back({multiply(big[0].x, small[j].x), 0, j});
    }
    std::make_heap(heap.begin(), heap.end(), later);
    out.reserve(big.size() + small.size());
    GroupElement pending_x = heap.front().z;
    Complex pending_c = 0.0;
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), later);
      Head& h = heap.back();
      if (h.z != pending_x) {
        keep(pending_x, pending_c);
        pending_x = h.z;
        pending_c = 0.0;
      }
      pending_c += big[h.i].c * small[h.j].c;
      if (++h.i < big.size()) {
        h.z = multiply(big[h.i].x, small[h.j].x);
        std::push_heap(heap.begin(), heap.end(), later);
      } else {
        heap.pop_back();
      }
    }
    keep(pending_x, pending_c);
  } else {
    absl::flat_hash_map<GroupElement, Complex> acc;
    acc.reserve(std::min<std::size_t>(f.support_size() * g.support_size(),
                                      opt.support_cap + 1));
    for (const Term& s : f.terms()) {
      for (const Term& t : g.terms()) acc[multiply(s.x, t.x)] += s.c * t.c;
      if (acc.size() > 4 * opt.support_cap) {
        throw Error(ErrorCode::kSizeCap, "convolution support exceeds the cap");
      }
    }
    out.reserve(acc.size());
    for (const auto& [z, v] : acc) keep(z, v);
    std::sort(out.begin(), out.end(), less_x);
  }
  if (out.size() > opt.support_cap) {
    throw Error(ErrorCode::kSizeCap,
                "convolution support " + std::to_string(out.size()) +
                    " exceeds the cap " + std::to_string(opt.support_cap));
  }
  return AlgebraElement::from_sorted(G, std::move(out), eps + dropped);
}

AlgebraElement involute(const AlgebraElement& f) {
  std::vector<Term> out;
  out.reserve(f.support_size());
  for (const Term& t : f.terms()) out.push_back({inverse(t.x), std::conj(t.c)});
  std::sort(out.begin(), out.end(), less_x);
  return AlgebraElement::from_sorted(f.group(), std::move(out), f.eps());
}

bool is_hermitian(const AlgebraElement& f, double tol) {
  const AlgebraElement s = involute(f);
  if (s.support_size() != f.support_size()) return false;
  for (std::size_t i = 0; i < s.support_size(); ++i) {
    if (!(s.terms()[i].x == f.terms()[i].x)) return false;
    if (std::abs(s.terms()[i].c - f.terms()[i].c) > tol) return false;
  }
  return true;
}

double norm_p_omega(const AlgebraElement& f, const Weight& w, double p) {
  require(p >= 1 && std::isfinite(p), "p must lie in [1, inf)");
  if (f.empty()) return 0.0;
  std::vector<double> logs;
  logs.reserve(f.support_size());
  double m = -kInf;
  for (const Term& t : f.terms()) {
    const double l = std::log(magnitude(t.c)) + w.log_eval(t.x);
    logs.push_back(l);
    m = std::max(m, l);
  }
  double s = 0;
  for (double l : logs) s += std::exp(p * (l - m));
  return std::exp(m + std::log(s) / p);
}

double norm_1_sigma(const AlgebraElement& f, const AuxiliaryFunction& aux) {
  double s = 0;
  const GroupModel& g = f.group();
  for (const Term& t : f.terms()) {
    s += magnitude(t.c) * std::exp(aux.log_sigma_at_length(g.length(t.x)));
  }
  return s;
}

nlohmann::json NormInterval::to_json() const {
  return {{"lower", lower},
          {"upper", upper},
          {"method", method},
          {"flagged", flagged},
          {"k_reached", k_reached}};
}

DyadicTrace dyadic_powers(const AlgebraElement& f, int k_max,
                          const PowerOptions& opt, const Weight* w, double p) {
  require(k_max >= 0 && k_max <= 30, "k_max must lie in [0, 30]");
  DyadicTrace tr;
  const double n1 = f.norm1();
  if (n1 == 0.0) {
    // Only truncation mass remains.
    const double le = f.eps() > 0 ? std::log(f.eps()) : -kInf;
    for (int k = 0; k <= k_max; ++k) {
      tr.log_l1_upper.push_back(std::ldexp(le, k));
      tr.log_l2_lower.push_back(-kInf);
      tr.log_l2.push_back(-kInf);
      if (w) tr.log_weighted.push_back(-kInf);
    }
    tr.k_reached = k_max;
    return tr;
  }
  AlgebraElement g = f.scaled(1.0 / n1);
  double log_scale = std::log(n1);
  ConvolutionOptions copt;
  copt.trunc = opt.trunc;
  copt.support_cap = opt.support_cap;
  for (int k = 0;; ++k) {
    const double l1 = g.norm1(), l2 = g.norm2();
    tr.log_l1_upper.push_back(log_scale + std::log(l1 + g.eps()));
    tr.log_l2.push_back(log_scale + std::log(l2));
    tr.log_l2_lower.push_back(log_scale + std::log(std::max(l2 - g.eps(), 0.0)));
    if (w) tr.log_weighted.push_back(log_scale + std::log(norm_p_omega(g, *w, p)));
    tr.k_reached = k;
    if (k == k_max) break;

    const double work = static_cast<double>(g.support_size()) *
                        static_cast<double>(g.support_size());
    if (!fft_eligible(g, g, copt) && work > opt.work_cap) {
      tr.flagged = true;
      tr.flag_reason = "work cap reached at k=" + std::to_string(k + 1);
      break;
    }
    AlgebraElement sq;
    try {
      sq = convolve(g, g, copt);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSizeCap) throw;
      tr.flagged = true;
      tr.flag_reason = e.what();
      break;
    }
    const double s = sq.norm1();
    log_scale *= 2;
    if (s == 0.0) {
      // Everything fell below the truncation threshold.
      tr.flagged = true;
      tr.flag_reason = "power vanished under truncation at k=" + std::to_string(k + 1);
      tr.log_l1_upper.push_back(log_scale + std::log(sq.eps()));
      tr.log_l2.push_back(-kInf);
      tr.log_l2_lower.push_back(-kInf);
      if (w) tr.log_weighted.push_back(-kInf);
      tr.k_reached = k + 1;
      break;
    }
    g = sq.scaled(1.0 / s);
    log_scale += std::log(s);
  }
  return tr;
}

NormInterval hermitian_norm_bounds(const AlgebraElement& h, int k_max,
                                   const PowerOptions& opt) {
  const DyadicTrace tr = dyadic_powers(h, k_max, opt);
  NormInterval iv;
  iv.method = "dyadic_powers";
  iv.lower = 0.0;
  iv.upper = kInf;
  for (std::size_t k = 0; k < tr.log_l1_upper.size(); ++k) {
    const double n = std::ldexp(1.0, static_cast<int>(k));
    iv.upper = std::min(iv.upper, std::exp(tr.log_l1_upper[k] / n));
    iv.lower = std::max(iv.lower, std::exp(tr.log_l2_lower[k] / n));
  }
  iv.lower = std::min(iv.lower, iv.upper);
  iv.flagged = tr.flagged;
  iv.k_reached = tr.k_reached;
  return iv;
}

NormInterval opnorm_estimate(const AlgebraElement& f, int k_max,
                             const PowerOptions& opt) {
  ConvolutionOptions copt;
  copt.support_cap = opt.support_cap;
  const AlgebraElement h = convolve(involute(f), f, copt);
  const NormInterval hb = hermitian_norm_bounds(h, k_max, opt);
  NormInterval iv;
  iv.method = "dyadic_powers(f*f)";
  iv.upper = std::min(f.norm1() + f.eps(), std::sqrt(hb.upper));
  iv.lower = std::max(std::sqrt(hb.lower), f.norm2() - f.eps());
  iv.lower = std::min(std::max(iv.lower, 0.0), iv.upper);
  iv.flagged = hb.flagged;
  iv.k_reached = hb.k_reached;
  return iv;
}

SpectralRadiusEstimate spectral_radius_estimate(const AlgebraElement& f,
                                                NormKind kind, int k_max,
                                                const Weight* w, double p,
                                                const PowerOptions& opt) {
  require(kind == NormKind::kOperator || w != nullptr,
          "weighted spectral radius needs a weight");
  const DyadicTrace tr = dyadic_powers(
      f, k_max, opt, kind == NormKind::kWeighted ? w : nullptr, p);
  const std::vector<double>& logs =
      kind == NormKind::kWeighted ? tr.log_weighted : tr.log_l2;
  SpectralRadiusEstimate est;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    est.sequence.push_back(std::exp(logs[k] / std::ldexp(1.0, static_cast<int>(k))));
  }
  est.value = est.sequence.back();
  est.k_reached = tr.k_reached;
  est.flagged = tr.flagged;
  return est;
}

}  // namespace wconv

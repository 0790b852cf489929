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

#include "core/groups.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>

#include "absl/container/flat_hash_map.h"
#include "core/error.hpp"
#include "core/numeric.hpp"

namespace wconv {

const char* family_name(Family f) {
  switch (f) {
    case Family::kLattice: return "lattice";
    case Family::kHeisenberg: return "heisenberg";
    case Family::kLocallyFinite: return "locally_finite";
  }
  return "unknown";
}

GroupElement GroupElement::lattice(std::initializer_list<std::int64_t> coords) {
  return lattice(std::vector<std::int64_t>(coords));
}

GroupElement GroupElement::lattice(const std::vector<std::int64_t>& coords) {
  require(!coords.empty() && coords.size() <= kMaxLatticeDim,
          "lattice element needs 1..4 coordinates");
  GroupElement x;
  x.family = Family::kLattice;
  x.dim = static_cast<std::uint8_t>(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) x.c[i] = coords[i];
  return x;
}

GroupElement GroupElement::heisenberg(std::int64_t a, std::int64_t b,
                                      std::int64_t c) {
  GroupElement x;
  x.family = Family::kHeisenberg;
  x.dim = 3;
  x.c = {a, b, c, 0};
  return x;
}

GroupElement GroupElement::subset(const std::vector<int>& indices) {
  std::uint64_t m = 0;
  for (int i : indices) {
    require(i >= 1 && i <= kMaxChainLength, "generator index out of range");
    m ^= std::uint64_t{1} << (i - 1);
  }
  return from_mask(m);
}

GroupElement GroupElement::from_mask(std::uint64_t mask) {
  GroupElement x;
  x.family = Family::kLocallyFinite;
  x.c[0] = static_cast<std::int64_t>(mask);
  return x;
}

std::string GroupElement::to_string() const {
  std::ostringstream os;
  if (family == Family::kLocallyFinite) {
    os << "{";
    bool first = true;
    for (int i = 0; i < 64; ++i) {
      if (mask() >> i & 1) {
        os << (first ? "" : ",") << (i + 1);
        first = false;
      }
    }
    os << "}";
    return os.str();
  }
  os << "(";
  for (int i = 0; i < dim; ++i) os << (i ? "," : "") << c[i];
  os << ")";
  return os.str();
}

GroupElement multiply(const GroupElement& x, const GroupElement& y) {
  if (x.family != y.family || x.dim != y.dim) {
    throw Error(ErrorCode::kFamilyMismatch,
                "cannot multiply elements of different groups");
  }
  GroupElement z = x;
  switch (x.family) {
    case Family::kLattice:
      for (int i = 0; i < x.dim; ++i) z.c[i] = x.c[i] + y.c[i];
      break;
    case Family::kHeisenberg:
      z.c[0] = x.c[0] + y.c[0];
      z.c[1] = x.c[1] + y.c[1];
      z.c[2] = x.c[2] + y.c[2] + x.c[0] * y.c[1];
      break;
    case Family::kLocallyFinite:
      z.c[0] = x.c[0] ^ y.c[0];
      break;
  }
  return z;
}

GroupElement inverse(const GroupElement& x) {
  GroupElement z = x;
  switch (x.family) {
    case Family::kLattice:
      for (int i = 0; i < x.dim; ++i) z.c[i] = -x.c[i];
      break;
    case Family::kHeisenberg:
      z.c[0] = -x.c[0];
      z.c[1] = -x.c[1];
      z.c[2] = -x.c[2] + x.c[0] * x.c[1];
      break;
    case Family::kLocallyFinite:
      break;
  }
  return z;
}

struct GroupModel::Impl {
  Family family = Family::kLattice;
  int dim = 1;
  int chain = 0;
  GroupCaps caps;
  std::vector<GroupElement> gens;
  GroupElement id;

  // BFS layers for the finitely generated families, grown on demand.
  mutable std::mutex mu;
  mutable absl::flat_hash_map<GroupElement, int> dist;
  mutable std::vector<std::vector<GroupElement>> layers;
  mutable std::size_t enumerated = 0;

  void extend_locked(int n) const {
    if (layers.empty()) {
      layers.push_back({id});
      dist.emplace(id, 0);
      enumerated = 1;
    }
    while (static_cast<int>(layers.size()) <= n) {
      const int k = static_cast<int>(layers.size());
      std::vector<GroupElement> next;
      for (const GroupElement& x : layers.back()) {
        for (const GroupElement& s : gens) {
          GroupElement y = multiply(x, s);
          if (dist.try_emplace(y, k).second) next.push_back(y);
        }
      }
      enumerated += next.size();
      if (enumerated > caps.elements) {
        throw Error(ErrorCode::kSizeCap,
                    "ball enumeration exceeds the element cap at radius " +
                        std::to_string(k));
      }
      layers.push_back(std::move(next));
    }
  }
};

GroupModel::GroupModel() : GroupModel(lattice(1)) {}

GroupModel::GroupModel(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

GroupModel GroupModel::lattice(int dim, GroupCaps caps) {
  require(dim >= 1 && dim <= kMaxLatticeDim, "lattice dimension must be 1..4");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::kLattice;
  impl->dim = dim;
  impl->caps = caps;
  impl->id.family = Family::kLattice;
  impl->id.dim = static_cast<std::uint8_t>(dim);
  for (int i = 0; i < dim; ++i) {
    for (int sgn : {1, -1}) {
      GroupElement g = impl->id;
      g.c[i] = sgn;
      impl->gens.push_back(g);
    }
  }
  return GroupModel(std::move(impl));
}

GroupModel GroupModel::heisenberg(GroupCaps caps) {
  auto impl = std::make_shared<Impl>();
  impl->family = Family::kHeisenberg;
  impl->dim = 3;
  impl->caps = caps;
  impl->id = GroupElement::heisenberg(0, 0, 0);
  impl->gens = {GroupElement::heisenberg(1, 0, 0),
                GroupElement::heisenberg(-1, 0, 0),
                GroupElement::heisenberg(0, 1, 0),
                GroupElement::heisenberg(0, -1, 0)};
  return GroupModel(std::move(impl));
}

GroupModel GroupModel::locally_finite(int chain_length, GroupCaps caps) {
  require(chain_length >= 1 && chain_length <= kMaxChainLength,
          "chain length must be 1..62");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::kLocallyFinite;
  impl->dim = 0;
  impl->chain = chain_length;
  impl->caps = caps;
  impl->id = GroupElement::from_mask(0);
  return GroupModel(std::move(impl));
}

Family GroupModel::family() const noexcept { return impl_->family; }
int GroupModel::dimension() const noexcept { return impl_->dim; }
int GroupModel::chain_length() const noexcept { return impl_->chain; }
const GroupCaps& GroupModel::caps() const noexcept { return impl_->caps; }

std::string GroupModel::name() const {
  switch (impl_->family) {
    case Family::kLattice:
      return impl_->dim == 1 ? "Z" : "Z^" + std::to_string(impl_->dim);
    case Family::kHeisenberg:
      return "H3(Z)";
    case Family::kLocallyFinite:
      return "F2^(" + std::to_string(impl_->chain) + ")";
  }
  return "?";
}

bool GroupModel::same_group(const GroupModel& other) const noexcept {
  return impl_->family == other.impl_->family &&
         impl_->dim == other.impl_->dim && impl_->chain == other.impl_->chain;
}

GroupElement GroupModel::identity() const { return impl_->id; }

bool GroupModel::contains(const GroupElement& x) const {
  if (x.family != impl_->family) return false;
  if (impl_->family == Family::kLocallyFinite) {
    return x.dim == 0 && (x.mask() >> impl_->chain) == 0;
  }
  return x.dim == impl_->dim;
}

void GroupModel::check_member(const GroupElement& x) const {
  if (!contains(x)) {
    throw Error(ErrorCode::kFamilyMismatch,
                "element " + x.to_string() + " is not in " + name());
  }
}

const std::vector<GroupElement>& GroupModel::generators() const {
  return impl_->gens;
}

// A word in a^{+-1}, b^{+-1} is a lattice path from 0 to (a, b), and c is
// the integral of X dY along it. Up to symmetry 0 <= c - ab/2, and if
// c <= ab a monotone staircase works. Otherwise the path encloses a region
// with bounding box W x H; such regions realise every area in
// [W + H - 1, W H], and the path pays 2 for each unit of box beyond (a, b).
std::int64_t heisenberg_length(std::int64_t a, std::int64_t b, std::int64_t c) {
  const std::int64_t x = std::llabs(a), y = std::llabs(b);
  std::int64_t z = c;
  if (a < 0) z = -z;
  if (b < 0) z = -z;
  const std::int64_t xy = x * y;
  if (2 * z < xy) z = xy - z;
  if (z <= xy) return x + y;

  auto cost = [&](std::int64_t w) {
    const std::int64_t h = (z + w - 1) / w;
    return x + y + 2 * std::max<std::int64_t>(0, w - x) +
           2 * std::max<std::int64_t>(0, h - y);
  };
  std::int64_t best = cost(1);
  auto consider = [&](std::int64_t w) {
    if (w >= 1 && w <= z) best = std::min(best, cost(w));
  };
  // Below x the cost falls with w; above max(x, sqrt z) it rises, except
  // for the jump where ceil(z/w) reaches y.
  consider(std::min(x, z));
  if (y > 0) consider(std::max(x, (z + y - 1) / y));
  const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(z)));
  for (std::int64_t w = root - 2; w <= root + 2; ++w) consider(std::max(w, x));
  return best;
}

int GroupModel::length(const GroupElement& x) const {
  check_member(x);
  switch (impl_->family) {
    case Family::kLattice: {
      std::int64_t s = 0;
      for (int i = 0; i < x.dim; ++i) s += std::llabs(x.c[i]);
      return static_cast<int>(s);
    }
    case Family::kLocallyFinite:
      return 64 - std::countl_zero(x.mask());
    case Family::kHeisenberg:
      break;
  }
  return static_cast<int>(heisenberg_length(x.c[0], x.c[1], x.c[2]));
}

std::vector<GroupElement> GroupModel::ball(int n) const {
  require(n >= 0, "ball radius must be nonnegative");
  std::vector<GroupElement> out;
  if (impl_->family == Family::kLocallyFinite) {
    const int m = std::min(n, impl_->chain);
    const std::uint64_t count = std::uint64_t{1} << m;
    if (count > impl_->caps.elements) {
      throw Error(ErrorCode::kSizeCap, "ball exceeds the element cap");
    }
    out.reserve(count);
    for (std::uint64_t s = 0; s < count; ++s) {
      out.push_back(GroupElement::from_mask(s));
    }
    return out;
  }
  if (n > impl_->caps.radius) {
    throw Error(ErrorCode::kRadiusExceeded,
                "ball radius " + std::to_string(n) + " exceeds radius cap " +
                    std::to_string(impl_->caps.radius));
  }
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->extend_locked(n);
  for (int k = 0; k <= n; ++k) {
    out.insert(out.end(), impl_->layers[k].begin(), impl_->layers[k].end());
  }
  return out;
}

std::vector<std::uint64_t> GroupModel::sphere_sizes(int n_max) const {
  require(n_max >= 0, "radius must be nonnegative");
  std::vector<std::uint64_t> out(n_max + 1, 0);
  if (impl_->family == Family::kLocallyFinite) {
    for (int n = 0; n <= std::min(n_max, impl_->chain); ++n) {
      out[n] = n == 0 ? 1 : std::uint64_t{1} << (n - 1);
    }
    return out;
  }
  if (n_max > impl_->caps.radius) {
    throw Error(ErrorCode::kRadiusExceeded,
                "radius " + std::to_string(n_max) + " exceeds radius cap " +
                    std::to_string(impl_->caps.radius));
  }
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->extend_locked(n_max);
  for (int n = 0; n <= n_max; ++n) out[n] = impl_->layers[n].size();
  return out;
}

ShellCount GroupModel::log_shell_count(int n) const {
  require(n >= 0, "radius must be nonnegative");
  if (n == 0) return {0.0, true};
  const double dn = n;
  switch (impl_->family) {
    case Family::kLocallyFinite:
      // tau_chain = n for 2^(n-1) subsets; the chain is treated as unbounded.
      return {(dn - 1.0) * std::log(2.0), true};
    case Family::kLattice: {
      // sum_k 2^k C(d,k) C(n-1,k-1)
      const int d = impl_->dim;
      double acc = -kInf;
      for (int k = 1; k <= std::min(d, n); ++k) {
        const double t = k * std::log(2.0) + std::lgamma(d + 1.0) -
                         std::lgamma(k + 1.0) - std::lgamma(d - k + 1.0) +
                         std::lgamma(dn) - std::lgamma(k) -
                         std::lgamma(dn - k + 1.0);
        acc = log_add(acc, t);
      }
      return {acc, true};
    }
    case Family::kHeisenberg:
      break;
  }
  if (n <= impl_->caps.radius) {
    std::lock_guard<std::mutex> lock(impl_->mu);
    impl_->extend_locked(n);
    return {std::log(static_cast<double>(impl_->layers[n].size())), true};
  }
  // |a|+|b| <= n, |c| <= floor(n^2/4)
  const double box = (2.0 * dn * dn + 2.0 * dn + 1.0) *
                     (2.0 * std::floor(dn * dn / 4.0) + 1.0);
  return {std::log(box), false};
}

GrowthReport growth_report(const GroupModel& g, int n_max) {
  require(n_max >= 3, "growth report needs n_max >= 3");
  if (g.family() == Family::kLocallyFinite) {
    require(n_max <= g.chain_length(), "n_max exceeds the chain length");
  }
  GrowthReport rep;
  rep.group = g.name();
  rep.n_max = n_max;
  rep.spheres = g.sphere_sizes(n_max);
  std::uint64_t acc = 0;
  for (std::uint64_t s : rep.spheres) {
    acc += s;
    rep.balls.push_back(acc);
  }
  rep.fit_from = std::max(1, (n_max + 1) / 2);
  rep.fit_to = n_max;
  std::vector<double> ln_n, n_lin, ln_b;
  for (int n = rep.fit_from; n <= rep.fit_to; ++n) {
    ln_n.push_back(std::log(static_cast<double>(n)));
    n_lin.push_back(n);
    ln_b.push_back(std::log(static_cast<double>(rep.balls[n])));
  }
  rep.polynomial_degree = fit_line(ln_n, ln_b).slope;
  rep.exponential_rate = fit_line(n_lin, ln_b).slope;
  return rep;
}

}  // namespace wconv

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

#ifndef WCONV_CORE_GROUPS_HPP
#define WCONV_CORE_GROUPS_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace wconv {

enum class Family : std::uint8_t { kLattice, kHeisenberg, kLocallyFinite };

inline constexpr int kMaxLatticeDim = 4;
inline constexpr int kMaxChainLength = 62;

const char* family_name(Family f);

// Lattice: c[0..dim) are the coordinates. Heisenberg: (a, b, c) = c[0..3).
// Locally finite: c[0] is a bitmask, bit i-1 set <=> generator s_i present.
struct GroupElement {
  Family family = Family::kLattice;
  std::uint8_t dim = 0;
  std::array<std::int64_t, kMaxLatticeDim> c{};

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const GroupElement& x) {
    return H::combine(std::move(h), x.family, x.dim, x.c[0], x.c[1], x.c[2],
                      x.c[3]);
  }

  static GroupElement lattice(std::initializer_list<std::int64_t> coords);
  static GroupElement lattice(const std::vector<std::int64_t>& coords);
  static GroupElement heisenberg(std::int64_t a, std::int64_t b,
                                 std::int64_t c);
  // 1-based generator indices.
  static GroupElement subset(const std::vector<int>& indices);
  static GroupElement from_mask(std::uint64_t mask);

  std::uint64_t mask() const { return static_cast<std::uint64_t>(c[0]); }
  std::string to_string() const;
};

GroupElement multiply(const GroupElement& x, const GroupElement& y);

// Exact word length of (a, b, c) in H3(Z) for the generators (1,0,0), (0,1,0).
std::int64_t heisenberg_length(std::int64_t a, std::int64_t b, std::int64_t c);
GroupElement inverse(const GroupElement& x);

struct GroupCaps {
  int radius = 32;
  std::size_t elements = 5'000'000;
};

// log of a sphere size; exact == false when only an upper bound is known.
struct ShellCount {
  double log_count = 0.0;
  bool exact = true;
};

class GroupModel {
 public:
  GroupModel();  // Z, default caps
  static GroupModel lattice(int dim, GroupCaps caps = {});
  static GroupModel heisenberg(GroupCaps caps = {});
  static GroupModel locally_finite(int chain_length, GroupCaps caps = {});

  Family family() const noexcept;
  int dimension() const noexcept;
  int chain_length() const noexcept;
  const GroupCaps& caps() const noexcept;
  std::string name() const;
  bool same_group(const GroupModel& other) const noexcept;

  GroupElement identity() const;
  bool contains(const GroupElement& x) const;
  void check_member(const GroupElement& x) const;
  const std::vector<GroupElement>& generators() const;

  // Word length for finitely generated families, tau_chain otherwise.
  int length(const GroupElement& x) const;

  // Elements of length <= n in BFS order (nondecreasing length).
  std::vector<GroupElement> ball(int n) const;
  // Exact sphere sizes 0..n_max by enumeration.
  std::vector<std::uint64_t> sphere_sizes(int n_max) const;
  // Sphere size for radial sums: closed form, enumeration, or a majorant.
  ShellCount log_shell_count(int n) const;

 private:
  struct Impl;
  explicit GroupModel(std::shared_ptr<Impl> impl);
  std::shared_ptr<Impl> impl_;
};

struct GrowthReport {
  std::string group;
  int n_max = 0;
  std::vector<std::uint64_t> spheres;
  std::vector<std::uint64_t> balls;
  int fit_from = 0;
  int fit_to = 0;
  double polynomial_degree = 0.0;  // slope of log|B(n)| against log n
  double exponential_rate = 0.0;   // slope of log|B(n)| against n
};

GrowthReport growth_report(const GroupModel& g, int n_max);

}  // namespace wconv

#endif  // WCONV_CORE_GROUPS_HPP

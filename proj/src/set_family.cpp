#include "greencube/set_family.hpp"

#include <algorithm>
#include <sstream>

#include "greencube/error.hpp"

namespace greencube {

void check_dimension(int m) {
  if (m < kMinDimension || m > kMaxDimension) {
    throw ValidationError("dimension m=" + std::to_string(m) + " outside [" +
                          std::to_string(kMinDimension) + "," +
                          std::to_string(kMaxDimension) + "]");
  }
}

SubsetMask::SubsetMask(std::uint32_t bits, int m) : bits_(bits), m_(m) {
  check_dimension(m);
  if (bits >= (1u << m)) {
    throw ValidationError("subset bits " + std::to_string(bits) +
                          " exceed dimension m=" + std::to_string(m));
  }
}

SubsetMask SubsetMask::full(int m) {
  check_dimension(m);
  return {(1u << m) - 1u, m};
}

SubsetMask SubsetMask::from_coordinates(std::span<const int> coords, int m) {
  check_dimension(m);
  std::uint32_t bits = 0;
  for (int c : coords) {
    if (c < 1 || c > m) {
      throw ValidationError("coordinate " + std::to_string(c) + " outside 1.." +
                            std::to_string(m));
    }
    bits |= 1u << (c - 1);
  }
  return {bits, m};
}

SubsetMask SubsetMask::complement() const {
  return {~bits_ & ((1u << m_) - 1u), m_};
}

std::vector<int> SubsetMask::coordinates() const {
  std::vector<int> out;
  for (int j = 0; j < m_; ++j) {
    if (contains(j)) out.push_back(j + 1);
  }
  return out;
}

std::string SubsetMask::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int c : coordinates()) {
    if (!first) s += ',';
    s += std::to_string(c);
    first = false;
  }
  return s + "}";
}

std::strong_ordering SubsetMask::operator<=>(const SubsetMask& other) const {
  if (auto c = size() <=> other.size(); c != 0) return c;
  return bits_ <=> other.bits_;
}

namespace {

void check_masks(std::span<const SubsetMask> masks, int m) {
  check_dimension(m);
  for (const auto& u : masks) {
    if (u.dimension() != m) {
      throw ValidationError("subset " + u.to_string() + " has dimension " +
                            std::to_string(u.dimension()) + ", expected " +
                            std::to_string(m));
    }
  }
}

std::vector<SubsetMask> sorted_unique(std::span<const SubsetMask> masks) {
  std::vector<SubsetMask> v(masks.begin(), masks.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

bool is_monotone(std::span<const SubsetMask> masks, int m) {
  check_masks(masks, m);
  std::vector<bool> present(std::size_t{1} << m, false);
  for (const auto& u : masks) {
    if (u.is_empty()) return false;
    present[u.bits()] = true;
  }
  // Closure under adding one element implies closure under all oversets.
  for (const auto& u : masks) {
    for (int j = 0; j < m; ++j) {
      if (!u.contains(j) && !present[u.bits() | (1u << j)]) return false;
    }
  }
  return true;
}

MonotoneFamily upward_closure(std::span<const SubsetMask> generators, int m) {
  check_masks(generators, m);
  const std::uint32_t full = (1u << m) - 1u;
  std::vector<bool> present(std::size_t{1} << m, false);
  for (const auto& g : generators) {
    if (g.is_empty()) throw ValidationError("empty subset cannot generate a family");
    // Walk the oversets of g as g | s for every subset s of its complement.
    const std::uint32_t rest = full & ~g.bits();
    std::uint32_t s = rest;
    while (true) {
      present[g.bits() | s] = true;
      if (s == 0) break;
      s = (s - 1) & rest;
    }
  }
  std::vector<SubsetMask> members;
  for (std::uint32_t b = 1; b <= full; ++b) {
    if (present[b]) members.emplace_back(b, m);
  }
  std::sort(members.begin(), members.end());
  return MonotoneFamily(m, std::move(members));
}

MonotoneFamily MonotoneFamily::from_members(std::span<const SubsetMask> members, int m) {
  check_masks(members, m);
  auto v = sorted_unique(members);
  if (!is_monotone(v, m)) {
    std::string listing = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      listing += (i ? "," : "") + v[i].to_string();
    }
    throw ValidationError("family " + listing + "] is not upward-closed or contains the empty set");
  }
  return MonotoneFamily(m, std::move(v));
}

MonotoneFamily MonotoneFamily::empty(int m) {
  check_dimension(m);
  return MonotoneFamily(m, {});
}

MonotoneFamily MonotoneFamily::all_nonempty(int m) {
  std::vector<SubsetMask> gens;
  for (int j = 0; j < m; ++j) gens.emplace_back(1u << j, m);
  return upward_closure(gens, m);
}

MonotoneFamily MonotoneFamily::top(int m) {
  return MonotoneFamily(m, {SubsetMask::full(m)});
}

bool MonotoneFamily::contains(SubsetMask u) const {
  return u.dimension() == m_ && std::binary_search(members_.begin(), members_.end(), u);
}

std::string MonotoneFamily::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) s += ',';
    s += members_[i].to_string();
  }
  return s + "]";
}

MonotoneFamily family_for_known_margins(SubsetMask known, int m) {
  check_dimension(m);
  if (known.dimension() != m) {
    throw ValidationError("known-margins set " + known.to_string() + " has dimension " +
                          std::to_string(known.dimension()) + ", expected " +
                          std::to_string(m));
  }
  const SubsetMask full = SubsetMask::full(m);
  std::vector<SubsetMask> members{full};
  for (int u = 0; u < m; ++u) {
    if (!known.contains(u)) members.emplace_back(full.bits() & ~(1u << u), m);
  }
  return MonotoneFamily::from_members(members, m);
}

std::vector<MonotoneFamily> enumerate_monotone_families(int m) {
  check_dimension(m);
  if (m > 5) {
    throw ValidationError("enumeration refused for m=" + std::to_string(m) +
                          " (count grows as the Dedekind numbers; m <= 5)");
  }
  const std::uint32_t full = (1u << m) - 1u;
  // Decreasing cardinality: every immediate overset is decided before the
  // subset itself, so one check per overset keeps the family closed.
  std::vector<std::uint32_t> order;
  for (std::uint32_t b = 1; b <= full; ++b) order.push_back(b);
  std::stable_sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
    return __builtin_popcount(a) > __builtin_popcount(b);
  });

  std::vector<MonotoneFamily> out;
  std::vector<bool> in(std::size_t{1} << m, false);
  auto recurse = [&](auto&& self, std::size_t pos) -> void {
    if (pos == order.size()) {
      std::vector<SubsetMask> members;
      for (std::uint32_t b = 1; b <= full; ++b) {
        if (in[b]) members.emplace_back(b, m);
      }
      std::sort(members.begin(), members.end());
      out.push_back(MonotoneFamily(m, std::move(members)));
      return;
    }
    const std::uint32_t u = order[pos];
    self(self, pos + 1);
    bool allowed = true;
    for (int j = 0; j < m && allowed; ++j) {
      const std::uint32_t up = u | (1u << j);
      if (up != u && !in[up]) allowed = false;
    }
    if (allowed) {
      in[u] = true;
      self(self, pos + 1);
      in[u] = false;
    }
  };
  recurse(recurse, 0);

  std::sort(out.begin(), out.end(), [](const MonotoneFamily& a, const MonotoneFamily& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.members().begin(), a.members().end(),
                                        b.members().begin(), b.members().end());
  });
  return out;
}

}  // namespace greencube

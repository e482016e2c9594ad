#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace greencube {

inline constexpr int kMinDimension = 2;
inline constexpr int kMaxDimension = 16;

// Throws ValidationError unless kMinDimension <= m <= kMaxDimension.
void check_dimension(int m);

// A subset U of M = {1..m}; bit j-1 is set iff coordinate j is in U.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  SubsetMask(std::uint32_t bits, int m);

  static SubsetMask empty(int m) { return {0u, m}; }
  static SubsetMask full(int m);
  // 1-based coordinates, e.g. {1, 3}.
  static SubsetMask from_coordinates(std::span<const int> coords, int m);
  static SubsetMask from_coordinates(std::initializer_list<int> coords, int m) {
    return from_coordinates(std::span<const int>(coords.begin(), coords.size()), m);
  }

  std::uint32_t bits() const { return bits_; }
  int dimension() const { return m_; }
  int size() const { return __builtin_popcount(bits_); }
  bool is_empty() const { return bits_ == 0; }
  // 0-based coordinate index.
  bool contains(int j) const { return (bits_ >> j) & 1u; }
  bool is_subset_of(SubsetMask other) const { return (bits_ & ~other.bits_) == 0; }
  SubsetMask complement() const;
  std::vector<int> coordinates() const;  // 1-based, ascending

  // "{1,3}"; the empty set prints as "{}".
  std::string to_string() const;

  bool operator==(const SubsetMask&) const = default;
  // Canonical family order: by cardinality, then numerically.
  std::strong_ordering operator<=>(const SubsetMask& other) const;

 private:
  std::uint32_t bits_ = 0;
  int m_ = 0;
};

// Upward-closed family of nonempty subsets of M. Members are kept sorted in
// canonical order; the family is immutable once built.
class MonotoneFamily {
 public:
  // Validates; throws ValidationError if the masks are not an upward-closed
  // family of nonempty subsets.
  static MonotoneFamily from_members(std::span<const SubsetMask> members, int m);

  // The three classical families: no boundary conditions (Brownian sheet),
  // all nonempty subsets (Brownian pillow), {M} only (tucked sheet).
  static MonotoneFamily empty(int m);
  static MonotoneFamily all_nonempty(int m);
  static MonotoneFamily top(int m);

  int dimension() const { return m_; }
  std::span<const SubsetMask> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(SubsetMask u) const;

  // "[{1},{1,2}]"
  std::string to_string() const;

  bool operator==(const MonotoneFamily&) const = default;

 private:
  MonotoneFamily(int m, std::vector<SubsetMask> sorted_members)
      : m_(m), members_(std::move(sorted_members)) {}

  friend MonotoneFamily upward_closure(std::span<const SubsetMask>, int);
  friend std::vector<MonotoneFamily> enumerate_monotone_families(int);

  int m_ = 0;
  std::vector<SubsetMask> members_;
};

bool is_monotone(std::span<const SubsetMask> masks, int m);

// Smallest upward-closed family containing the generators.
MonotoneFamily upward_closure(std::span<const SubsetMask> generators, int m);

// {M} together with M\{u} for every u outside V: the boundary set of the
// limiting covariance of the empirical process with known margins V.
MonotoneFamily family_for_known_margins(SubsetMask known, int m);

// Every upward-closed family of nonempty subsets, ordered by size and then
// lexicographically by members. Refuses m > 5.
std::vector<MonotoneFamily> enumerate_monotone_families(int m);

}  // namespace greencube

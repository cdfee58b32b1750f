#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <iterator>

namespace cdl {

/// Models are capped at 64 worlds so that sets of worlds fit in one machine word.
inline constexpr std::size_t kMaxWorlds = 64;

/// A set of world indices in [0, 64).
class WorldSet {
 public:
  constexpr WorldSet() = default;
  constexpr explicit WorldSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr WorldSet single(std::size_t w) {
    assert(w < kMaxWorlds);
    return WorldSet(std::uint64_t{1} << w);
  }
  /// {0, ..., n-1}
  static constexpr WorldSet first(std::size_t n) {
    assert(n <= kMaxWorlds);
    return WorldSet(n == kMaxWorlds ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t w) const { return w < kMaxWorlds && ((bits_ >> w) & 1u) != 0; }
  constexpr bool subset_of(WorldSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(WorldSet other) const { return (bits_ & other.bits_) != 0; }
  constexpr void insert(std::size_t w) { bits_ |= single(w).bits_; }
  constexpr void erase(std::size_t w) { bits_ &= ~single(w).bits_; }

  friend constexpr WorldSet operator&(WorldSet a, WorldSet b) { return WorldSet(a.bits_ & b.bits_); }
  friend constexpr WorldSet operator|(WorldSet a, WorldSet b) { return WorldSet(a.bits_ | b.bits_); }
  /// Set difference.
  friend constexpr WorldSet operator-(WorldSet a, WorldSet b) { return WorldSet(a.bits_ & ~b.bits_); }
  constexpr WorldSet& operator&=(WorldSet o) { bits_ &= o.bits_; return *this; }
  constexpr WorldSet& operator|=(WorldSet o) { bits_ |= o.bits_; return *this; }
  constexpr WorldSet& operator-=(WorldSet o) { bits_ &= ~o.bits_; return *this; }
  friend constexpr bool operator==(WorldSet, WorldSet) = default;

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::size_t;
    using difference_type = std::ptrdiff_t;
    using pointer = const std::size_t*;
    using reference = std::size_t;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr std::size_t operator*() const { return static_cast<std::size_t>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
    constexpr iterator operator++(int) { iterator old = *this; ++*this; return old; }
    friend constexpr bool operator==(iterator, iterator) = default;

   private:
    std::uint64_t rest_ = 0;
  };
  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace cdl

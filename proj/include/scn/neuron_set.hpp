#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace scn {

inline std::size_t words_for(std::uint32_t bits) noexcept {
  return (std::size_t{bits} + 63) / 64;
}

/// Read-only view of a packed bit row (one RAM row of the link store).
/// Bit i lives in word i/64 at position i%64. Bits past `size` are zero.
class RowView {
 public:
  RowView(std::span<const std::uint64_t> words, std::uint32_t size) noexcept
      : words_(words), size_(size) {}

  std::uint32_t size() const noexcept { return size_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool test(std::uint32_t index) const noexcept {
    return (words_[index / 64] >> (index % 64)) & 1U;
  }
  std::uint32_t count() const noexcept {
    std::uint32_t total = 0;
    for (auto w : words_) total += static_cast<std::uint32_t>(std::popcount(w));
    return total;
  }

 private:
  std::span<const std::uint64_t> words_;
  std::uint32_t size_;
};

/// Fixed-size set of neuron indices within one cluster.
class NeuronSet {
 public:
  NeuronSet() = default;
  explicit NeuronSet(std::uint32_t size) : size_(size), words_(words_for(size), 0) {}
  NeuronSet(std::uint32_t size, std::initializer_list<std::uint32_t> members);
  explicit NeuronSet(RowView row)
      : size_(row.size()), words_(row.words().begin(), row.words().end()) {}

  static NeuronSet full(std::uint32_t size);

  std::uint32_t size() const noexcept { return size_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  RowView view() const noexcept { return {words_, size_}; }

  bool test(std::uint32_t index) const noexcept {
    return (words_[index / 64] >> (index % 64)) & 1U;
  }
  void set(std::uint32_t index) noexcept {
    words_[index / 64] |= std::uint64_t{1} << (index % 64);
  }
  void reset(std::uint32_t index) noexcept {
    words_[index / 64] &= ~(std::uint64_t{1} << (index % 64));
  }
  void fill() noexcept;
  void clear() noexcept;

  std::uint32_t count() const noexcept { return view().count(); }
  bool none() const noexcept;
  bool all() const noexcept { return count() == size_; }

  NeuronSet& operator|=(RowView row) noexcept;
  NeuronSet& operator&=(RowView row) noexcept;
  NeuronSet& operator|=(const NeuronSet& other) noexcept { return *this |= other.view(); }
  NeuronSet& operator&=(const NeuronSet& other) noexcept { return *this &= other.view(); }

  /// Members in ascending order.
  std::vector<std::uint32_t> members() const;
  /// Highest member, or -1 when empty.
  std::int64_t highest() const noexcept;

  bool subset_of(const NeuronSet& other) const noexcept;

  friend bool operator==(const NeuronSet&, const NeuronSet&) = default;

 private:
  std::uint32_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

bool intersects(RowView a, RowView b) noexcept;

}  // namespace scn

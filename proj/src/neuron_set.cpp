#include "scn/neuron_set.hpp"

#include <algorithm>

namespace scn {

namespace {

std::uint64_t tail_mask(std::uint32_t size) noexcept {
  const auto used = size % 64;
  return used == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << used) - 1;
}

}  // namespace

NeuronSet::NeuronSet(std::uint32_t size, std::initializer_list<std::uint32_t> members)
    : NeuronSet(size) {
  for (auto m : members) set(m);
}

NeuronSet NeuronSet::full(std::uint32_t size) {
  NeuronSet s(size);
  s.fill();
  return s;
}

void NeuronSet::fill() noexcept {
  std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
  if (!words_.empty()) words_.back() &= tail_mask(size_);
}

void NeuronSet::clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

bool NeuronSet::none() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

NeuronSet& NeuronSet::operator|=(RowView row) noexcept {
  auto src = row.words();
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= src[i];
  return *this;
}

NeuronSet& NeuronSet::operator&=(RowView row) noexcept {
  auto src = row.words();
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= src[i];
  return *this;
}

std::vector<std::uint32_t> NeuronSet::members() const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto w = words_[i];
    while (w != 0) {
      out.push_back(static_cast<std::uint32_t>(i * 64 + std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::int64_t NeuronSet::highest() const noexcept {
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i] != 0) return static_cast<std::int64_t>(i * 64 + 63 - std::countl_zero(words_[i]));
  }
  return -1;
}

bool NeuronSet::subset_of(const NeuronSet& other) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

bool intersects(RowView a, RowView b) noexcept {
  auto wa = a.words();
  auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) {
    if ((wa[i] & wb[i]) != 0) return true;
  }
  return false;
}

}  // namespace scn

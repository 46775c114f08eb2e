#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>

namespace sigmaflow {

/// Largest complex dimension handled anywhere in the library.
inline constexpr int kMaxDim = 4;

/// Inline-storage vector with a compile-time capacity. Used for eigenvalue
/// tuples and sigma lists so that pointwise grid work never allocates.
template <class T, int Capacity>
class FixedVec {
 public:
  constexpr FixedVec() = default;
  constexpr explicit FixedVec(int size, T fill = T{}) : size_(size) {
    assert(size >= 0 && size <= Capacity);
    for (int i = 0; i < size; ++i) data_[i] = fill;
  }
  constexpr FixedVec(std::initializer_list<T> init) {
    assert(static_cast<int>(init.size()) <= Capacity);
    for (const T& v : init) data_[size_++] = v;
  }
  explicit FixedVec(std::span<const T> values) {
    assert(static_cast<int>(values.size()) <= Capacity);
    for (const T& v : values) data_[size_++] = v;
  }

  constexpr int size() const noexcept { return size_; }
  constexpr bool empty() const noexcept { return size_ == 0; }
  static constexpr int capacity() noexcept { return Capacity; }

  constexpr T& operator[](int i) noexcept { return data_[i]; }
  constexpr const T& operator[](int i) const noexcept { return data_[i]; }

  constexpr void push_back(const T& v) {
    assert(size_ < Capacity);
    data_[size_++] = v;
  }

  T* begin() noexcept { return data_.data(); }
  T* end() noexcept { return data_.data() + size_; }
  const T* begin() const noexcept { return data_.data(); }
  const T* end() const noexcept { return data_.data() + size_; }

  std::span<T> span() noexcept { return {data_.data(), static_cast<std::size_t>(size_)}; }
  std::span<const T> span() const noexcept {
    return {data_.data(), static_cast<std::size_t>(size_)};
  }

 private:
  std::array<T, Capacity> data_{};
  int size_ = 0;
};

using RealTuple = FixedVec<double, kMaxDim>;

}  // namespace sigmaflow

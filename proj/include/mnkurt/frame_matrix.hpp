#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mnkurt {

/// Row-major frames x bins storage used for every time-frequency quantity.
template <typename T>
class FrameMatrix {
 public:
  FrameMatrix() = default;
  FrameMatrix(std::size_t frames, std::size_t bins, T init = T{})
      : frames_(frames), bins_(bins), data_(frames * bins, init) {}

  std::size_t frames() const noexcept { return frames_; }
  std::size_t bins() const noexcept { return bins_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<T> frame(std::size_t l) { return {data_.data() + l * bins_, bins_}; }
  std::span<const T> frame(std::size_t l) const {
    return {data_.data() + l * bins_, bins_};
  }

  T& operator()(std::size_t l, std::size_t k) { return data_[l * bins_ + k]; }
  const T& operator()(std::size_t l, std::size_t k) const {
    return data_[l * bins_ + k];
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool operator==(const FrameMatrix&) const = default;

 private:
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::vector<T> data_;
};

}  // namespace mnkurt

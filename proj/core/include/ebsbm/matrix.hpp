#pragma once

#include <cstddef>
#include <vector>

namespace ebsbm {

// Dense row-major p x p matrix. Used for block probabilities, block-pair
// counts and block-pair sizes.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t dim, T fill = T{})
      : dim_(dim), data_(dim * dim, fill) {}

  std::size_t dim() const noexcept { return dim_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  std::size_t size() const noexcept { return data_.size(); }

  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<T> data_;
};

}  // namespace ebsbm

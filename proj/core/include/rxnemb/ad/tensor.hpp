#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "rxnemb/common/error.hpp"

namespace rxnemb::ad {

// Dense row-major tensor. Everything in the encoder is rank 1 or 2; rank 3
// is allowed but unused by the built-in primitives.
template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> data;

  Tensor() = default;
  Tensor(std::vector<int> s, std::vector<T> d) : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != element_count(shape)) {
      throw Error(ErrorCode::ShapeMismatch, "data length does not match shape");
    }
  }

  static std::size_t element_count(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int d : shape) n *= static_cast<std::size_t>(d);
    return n;
  }

  static Tensor zeros(std::vector<int> shape) {
    std::vector<T> d(element_count(shape), T(0));
    return Tensor(std::move(shape), std::move(d));
  }

  static Tensor scalar(T v) { return Tensor({1, 1}, {v}); }

  static Tensor row(std::vector<T> values) {
    const int n = static_cast<int>(values.size());
    return Tensor({1, n}, std::move(values));
  }

  static Tensor column(std::vector<T> values) {
    const int n = static_cast<int>(values.size());
    return Tensor({n, 1}, std::move(values));
  }

  static Tensor matrix(int r, int c, std::vector<T> values) {
    return Tensor({r, c}, std::move(values));
  }

  bool is_matrix() const { return shape.size() == 2; }
  int rows() const { return shape.empty() ? 0 : shape[0]; }
  int cols() const { return shape.size() < 2 ? 1 : shape[1]; }
  std::size_t size() const { return data.size(); }

  T& at(int i, int j) { return data[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols()) + static_cast<std::size_t>(j)]; }
  T at(int i, int j) const { return data[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols()) + static_cast<std::size_t>(j)]; }

  template <typename U>
  Tensor<U> cast() const {
    std::vector<U> d(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) d[i] = static_cast<U>(data[i]);
    return Tensor<U>(shape, std::move(d));
  }

  std::string shape_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (i) s += "x";
      s += std::to_string(shape[i]);
    }
    return s + "]";
  }
};

}  // namespace rxnemb::ad

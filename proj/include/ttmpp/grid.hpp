// Copyright 2026 The ttmpp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TTMPP_GRID_HPP_
#define TTMPP_GRID_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ttmpp {

// Dense row-major 2-D array. Dimensions are carried so that shape errors
// can be reported instead of silently reading out of range.
template <typename T>
class Grid2 {
 public:
  Grid2() = default;
  Grid2(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  T& at(std::size_t r, std::size_t c) {
    check(r, c);
    return data_[r * cols_ + c];
  }
  const T& at(std::size_t r, std::size_t c) const {
    check(r, c);
    return data_[r * cols_ + c];
  }

  const std::vector<T>& values() const { return data_; }
  std::vector<T>& values() { return data_; }

  bool has_shape(std::size_t rows, std::size_t cols) const {
    return rows_ == rows && cols_ == cols && data_.size() == rows * cols;
  }

  friend bool operator==(const Grid2&, const Grid2&) = default;

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("Grid2 index");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Dense 3-D array indexed (i, j, t) with t fastest.
template <typename T>
class Grid3 {
 public:
  Grid3() = default;
  Grid3(std::size_t n0, std::size_t n1, std::size_t n2, T fill = T{})
      : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2, fill) {}

  std::size_t dim0() const { return n0_; }
  std::size_t dim1() const { return n1_; }
  std::size_t dim2() const { return n2_; }
  std::size_t size() const { return data_.size(); }

  std::size_t flat(std::size_t i, std::size_t j, std::size_t t) const {
    return (i * n1_ + j) * n2_ + t;
  }

  T& operator()(std::size_t i, std::size_t j, std::size_t t) {
    return data_[flat(i, j, t)];
  }
  const T& operator()(std::size_t i, std::size_t j, std::size_t t) const {
    return data_[flat(i, j, t)];
  }

  const std::vector<T>& values() const { return data_; }
  std::vector<T>& values() { return data_; }

  bool has_shape(std::size_t n0, std::size_t n1, std::size_t n2) const {
    return n0_ == n0 && n1_ == n1 && n2_ == n2 &&
           data_.size() == n0 * n1 * n2;
  }

  friend bool operator==(const Grid3&, const Grid3&) = default;

 private:
  std::size_t n0_ = 0;
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  std::vector<T> data_;
};

}  // namespace ttmpp

#endif  // TTMPP_GRID_HPP_

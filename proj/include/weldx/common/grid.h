// Copyright 2026 The Weldx Authors.
//
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

#ifndef WELDX_COMMON_GRID_H_
#define WELDX_COMMON_GRID_H_

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace weldx {

// Dense row-major 2-D grid.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, T fill = T{})
      : height_(height), width_(width),
        data_(static_cast<size_t>(height) * width, fill) {}
  Grid(int height, int width, std::vector<T> data)
      : height_(height), width_(width), data_(std::move(data)) {
    assert(data_.size() == static_cast<size_t>(height) * width);
  }

  int height() const { return height_; }
  int width() const { return width_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int row, int col) {
    return data_[static_cast<size_t>(row) * width_ + col];
  }
  const T& operator()(int row, int col) const {
    return data_[static_cast<size_t>(row) * width_ + col];
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool SameShape(int height, int width) const {
    return height_ == height && width_ == width;
  }
  template <typename U>
  bool SameShape(const Grid<U>& other) const {
    return height_ == other.height() && width_ == other.width();
  }

  bool operator==(const Grid&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

using RealGrid = Grid<double>;
using BinaryGrid = Grid<unsigned char>;

}  // namespace weldx

#endif  // WELDX_COMMON_GRID_H_

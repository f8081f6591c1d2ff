#ifndef VISUALMESH_UTIL_MATRIX_HPP
#define VISUALMESH_UTIL_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace visualmesh {

/**
 * @brief Minimal dense row-major matrix used for feature buffers and layer weights.
 *
 * @tparam T element type (float for stored weights/features, double for reference paths)
 */
template <typename T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T(0)) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  T* operator[](std::size_t row) {
    return data_.data() + row * cols_;
  }
  const T* operator[](std::size_t row) const {
    return data_.data() + row * cols_;
  }

  std::size_t rows() const {
    return rows_;
  }
  std::size_t cols() const {
    return cols_;
  }
  bool empty() const {
    return data_.empty();
  }

  T* data() {
    return data_.data();
  }
  const T* data() const {
    return data_.data();
  }

  bool operator==(const Matrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

}  // namespace visualmesh

#endif  // VISUALMESH_UTIL_MATRIX_HPP

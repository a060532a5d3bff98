#pragma once

#include <cstddef>
#include <vector>

namespace kgre::numkit {

/// Dense row-major tensor of 64-bit reals. Rank 0 (scalar), 1 or 2.
class Tensor {
 public:
  Tensor() = default;

  static Tensor scalar(double v);
  static Tensor zeros(int n);
  static Tensor zeros(int rows, int cols);
  static Tensor from(std::vector<double> values);  // 1-D
  static Tensor from(int rows, int cols, std::vector<double> values);

  int ndim() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  bool is_scalar() const { return shape_.empty(); }
  bool is_vector() const { return shape_.size() == 1; }
  bool is_matrix() const { return shape_.size() == 2; }
  int rows() const { return shape_[0]; }
  int cols() const { return shape_[1]; }
  std::size_t size() const { return data_.size(); }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * shape_[1] + c]; }
  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * shape_[1] + c]; }
  double scalar_value() const { return data_[0]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;
  void fill(double v);

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

/// Numerically stable softmax (max subtraction). Throws DataError on empty input.
Tensor softmax(const Tensor& v);

/// Sum of absolute values.
double l1_norm(const Tensor& v);

/// x for x >= 0, slope*x otherwise. Requires slope in (0, 1).
double leaky_relu(double x, double slope);
Tensor leaky_relu(const Tensor& t, double slope);

}  // namespace kgre::numkit

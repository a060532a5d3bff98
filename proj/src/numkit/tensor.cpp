#include "kgre/numkit/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "kgre/error.hpp"

namespace kgre::numkit {

Tensor Tensor::scalar(double v) {
  Tensor t;
  t.data_.assign(1, v);
  return t;
}

Tensor Tensor::zeros(int n) {
  Tensor t;
  t.shape_ = {n};
  t.data_.assign(static_cast<std::size_t>(n), 0.0);
  return t;
}

Tensor Tensor::zeros(int rows, int cols) {
  Tensor t;
  t.shape_ = {rows, cols};
  t.data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  return t;
}

Tensor Tensor::from(std::vector<double> values) {
  Tensor t;
  t.shape_ = {static_cast<int>(values.size())};
  t.data_ = std::move(values);
  return t;
}

Tensor Tensor::from(int rows, int cols, std::vector<double> values) {
  if (values.size() != static_cast<std::size_t>(rows) * cols) {
    throw DataError("tensor data length does not match shape");
  }
  Tensor t;
  t.shape_ = {rows, cols};
  t.data_ = std::move(values);
  return t;
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Tensor softmax(const Tensor& v) {
  if (v.size() == 0) throw DataError("empty softmax domain");
  const auto& x = v.data();
  double mx = *std::max_element(x.begin(), x.end());
  Tensor out = Tensor::zeros(static_cast<int>(x.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp(x[i] - mx);
    sum += out[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] /= sum;
  return out;
}

double l1_norm(const Tensor& v) {
  double s = 0.0;
  for (double x : v.data()) s += std::fabs(x);
  return s;
}

double leaky_relu(double x, double slope) { return x >= 0.0 ? x : slope * x; }

Tensor leaky_relu(const Tensor& t, double slope) {
  Tensor out = t;
  for (double& x : out.data()) x = leaky_relu(x, slope);
  return out;
}

}  // namespace kgre::numkit

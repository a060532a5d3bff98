#include "kgre/numkit/rng.hpp"

#include <cmath>

#include "kgre/error.hpp"

namespace kgre::numkit {

Tensor xavier_init(Rng& rng, int rows, int cols) {
  if (rows < 1 || cols < 1) throw DataError("xavier_init requires positive dimensions");
  double bound = std::sqrt(6.0 / (rows + cols));
  Tensor t = Tensor::zeros(rows, cols);
  for (double& v : t.data()) v = rng.uniform(-bound, bound);
  return t;
}

Tensor uniform_init(Rng& rng, int rows, int cols, double scale) {
  Tensor t = Tensor::zeros(rows, cols);
  for (double& v : t.data()) v = rng.uniform(-scale, scale);
  return t;
}

}  // namespace kgre::numkit

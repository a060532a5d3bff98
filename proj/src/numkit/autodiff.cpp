#include "kgre/numkit/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "kgre/error.hpp"

namespace kgre::numkit {

Param::Param(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {
  grad = value;
  grad.fill(0.0);
}

Var Graph::push(Tensor val, BackFn back) {
  if (!val.all_finite()) throw NumericError("non-finite value in computation graph");
  Node node;
  node.grad = val;
  node.grad.fill(0.0);
  node.val = std::move(val);
  node.back = std::move(back);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Graph::constant(Tensor v) { return push(std::move(v), {}); }

Var Graph::param(Param& p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return Var{it->second};
  Var v = push(p.value, {});
  param_nodes_[&p] = v.id;
  bound_.emplace_back(v.id, &p);
  return v;
}

Var Graph::row(Var matrix, int r) {
  const Tensor& m = value(matrix);
  if (!m.is_matrix()) throw DataError("row() requires a matrix");
  const int cols = m.cols();
  Tensor out = Tensor::zeros(cols);
  for (int c = 0; c < cols; ++c) out[c] = m.at(r, c);
  return push(std::move(out), [matrix, r, cols](Graph& g, const Tensor& go) {
    Tensor& gm = g.grad_ref(matrix);
    for (int c = 0; c < cols; ++c) gm.at(r, c) += go[c];
  });
}

Var Graph::slice(Var v, int start, int len) {
  const Tensor& x = value(v);
  if (start < 0 || len < 0 || static_cast<std::size_t>(start + len) > x.size()) {
    throw DataError("slice out of range");
  }
  Tensor out = Tensor::zeros(len);
  for (int i = 0; i < len; ++i) out[i] = x[start + i];
  return push(std::move(out), [v, start, len](Graph& g, const Tensor& go) {
    Tensor& gx = g.grad_ref(v);
    for (int i = 0; i < len; ++i) gx[start + i] += go[i];
  });
}

Var Graph::concat(const std::vector<Var>& parts) {
  if (parts.empty()) throw DataError("concat of zero parts");
  std::size_t total = 0;
  for (Var p : parts) total += value(p).size();
  Tensor out = Tensor::zeros(static_cast<int>(total));
  std::size_t off = 0;
  for (Var p : parts) {
    const Tensor& t = value(p);
    for (std::size_t i = 0; i < t.size(); ++i) out[off + i] = t[i];
    off += t.size();
  }
  return push(std::move(out), [parts](Graph& g, const Tensor& go) {
    std::size_t off = 0;
    for (Var p : parts) {
      Tensor& gp = g.grad_ref(p);
      for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += go[off + i];
      off += gp.size();
    }
  });
}

Var Graph::reshape(Var v, int rows, int cols) {
  const Tensor& x = value(v);
  if (x.size() != static_cast<std::size_t>(rows) * cols) throw DataError("reshape size mismatch");
  Tensor out = Tensor::zeros(rows, cols);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
  return push(std::move(out), [v](Graph& g, const Tensor& go) {
    Tensor& gx = g.grad_ref(v);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += go[i];
  });
}

Var Graph::matvec(Var m, Var v) {
  const Tensor& a = value(m);
  const Tensor& x = value(v);
  if (!a.is_matrix() || !x.is_vector() || a.cols() != static_cast<int>(x.size())) {
    throw DataError("matvec dimension mismatch");
  }
  const int r = a.rows(), c = a.cols();
  Tensor out = Tensor::zeros(r);
  for (int i = 0; i < r; ++i) {
    double s = 0.0;
    const double* arow = a.data().data() + static_cast<std::size_t>(i) * c;
    for (int j = 0; j < c; ++j) s += arow[j] * x[j];
    out[i] = s;
  }
  return push(std::move(out), [m, v, r, c](Graph& g, const Tensor& go) {
    const Tensor& a = g.value(m);
    const Tensor& x = g.value(v);
    Tensor& ga = g.grad_ref(m);
    Tensor& gx = g.grad_ref(v);
    for (int i = 0; i < r; ++i) {
      const double gi = go[i];
      if (gi == 0.0) continue;
      double* garow = ga.data().data() + static_cast<std::size_t>(i) * c;
      const double* arow = a.data().data() + static_cast<std::size_t>(i) * c;
      for (int j = 0; j < c; ++j) {
        garow[j] += gi * x[j];
        gx[j] += gi * arow[j];
      }
    }
  });
}

Var Graph::add(Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (!x.same_shape(y)) throw DataError("add shape mismatch");
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += y[i];
  return push(std::move(out), [a, b](Graph& g, const Tensor& go) {
    Tensor& ga = g.grad_ref(a);
    Tensor& gb = g.grad_ref(b);
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += go[i];
      gb[i] += go[i];
    }
  });
}

Var Graph::sub(Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (!x.same_shape(y)) throw DataError("sub shape mismatch");
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= y[i];
  return push(std::move(out), [a, b](Graph& g, const Tensor& go) {
    Tensor& ga = g.grad_ref(a);
    Tensor& gb = g.grad_ref(b);
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += go[i];
      gb[i] -= go[i];
    }
  });
}

Var Graph::mul(Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (!x.same_shape(y)) throw DataError("mul shape mismatch");
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= y[i];
  return push(std::move(out), [a, b](Graph& g, const Tensor& go) {
    const Tensor& x = g.value(a);
    const Tensor& y = g.value(b);
    Tensor& ga = g.grad_ref(a);
    Tensor& gb = g.grad_ref(b);
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += go[i] * y[i];
      gb[i] += go[i] * x[i];
    }
  });
}

Var Graph::scale(Var a, double c) {
  Tensor out = value(a);
  for (double& v : out.data()) v *= c;
  return push(std::move(out), [a, c](Graph& g, const Tensor& go) {
    Tensor& ga = g.grad_ref(a);
    for (std::size_t i = 0; i < go.size(); ++i) ga[i] += c * go[i];
  });
}

Var Graph::scale_by(Var v, Var scalar) {
  const Tensor& s = value(scalar);
  if (!s.is_scalar()) throw DataError("scale_by expects a scalar node");
  const double c = s.scalar_value();
  Tensor out = value(v);
  for (double& x : out.data()) x *= c;
  return push(std::move(out), [v, scalar](Graph& g, const Tensor& go) {
    const Tensor& x = g.value(v);
    const double c = g.value(scalar).scalar_value();
    Tensor& gx = g.grad_ref(v);
    Tensor& gs = g.grad_ref(scalar);
    double acc = 0.0;
    for (std::size_t i = 0; i < go.size(); ++i) {
      gx[i] += c * go[i];
      acc += go[i] * x[i];
    }
    gs[0] += acc;
  });
}

Var Graph::dot(Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (x.size() != y.size()) throw DataError("dot length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return push(Tensor::scalar(s), [a, b](Graph& g, const Tensor& go) {
    const Tensor& x = g.value(a);
    const Tensor& y = g.value(b);
    Tensor& ga = g.grad_ref(a);
    Tensor& gb = g.grad_ref(b);
    const double gs = go.scalar_value();
    for (std::size_t i = 0; i < x.size(); ++i) {
      ga[i] += gs * y[i];
      gb[i] += gs * x[i];
    }
  });
}

Var Graph::sum(Var v) {
  const Tensor& x = value(v);
  double s = 0.0;
  for (double a : x.data()) s += a;
  return push(Tensor::scalar(s), [v](Graph& g, const Tensor& go) {
    Tensor& gx = g.grad_ref(v);
    const double gs = go.scalar_value();
    for (double& a : gx.data()) a += gs;
  });
}

Var Graph::mean(Var v) {
  const std::size_t n = value(v).size();
  if (n == 0) throw DataError("mean of empty tensor");
  return scale(sum(v), 1.0 / static_cast<double>(n));
}

Var Graph::relu(Var v) {
  Tensor out = value(v);
  for (double& x : out.data()) x = x > 0.0 ? x : 0.0;
  return push(std::move(out), [v](Graph& g, const Tensor& go) {
    const Tensor& x = g.value(v);
    Tensor& gx = g.grad_ref(v);
    for (std::size_t i = 0; i < go.size(); ++i) gx[i] += x[i] > 0.0 ? go[i] : 0.0;
  });
}

Var Graph::leaky_relu(Var v, double slope) {
  if (!(slope > 0.0 && slope < 1.0)) throw DataError("leaky_relu slope must be in (0,1)");
  Tensor out = value(v);
  for (double& x : out.data()) x = x >= 0.0 ? x : slope * x;
  return push(std::move(out), [v, slope](Graph& g, const Tensor& go) {
    const Tensor& x = g.value(v);
    Tensor& gx = g.grad_ref(v);
    for (std::size_t i = 0; i < go.size(); ++i) gx[i] += (x[i] >= 0.0 ? 1.0 : slope) * go[i];
  });
}

Var Graph::elu(Var v) {
  Tensor out = value(v);
  for (double& x : out.data()) x = x >= 0.0 ? x : std::expm1(x);
  return push(std::move(out), [v](Graph& g, const Tensor& go) {
    const Tensor& x = g.value(v);
    Tensor& gx = g.grad_ref(v);
    for (std::size_t i = 0; i < go.size(); ++i) {
      gx[i] += (x[i] >= 0.0 ? 1.0 : std::exp(x[i])) * go[i];
    }
  });
}

Var Graph::tanh(Var v) {
  Tensor out = value(v);
  for (double& x : out.data()) x = std::tanh(x);
  Var self = push(std::move(out), {});
  nodes_[self.id].back = [v, self](Graph& g, const Tensor& go) {
    const Tensor& y = g.value(self);
    Tensor& gx = g.grad_ref(v);
    for (std::size_t i = 0; i < go.size(); ++i) gx[i] += (1.0 - y[i] * y[i]) * go[i];
  };
  return self;
}

Var Graph::sigmoid(Var v) {
  Tensor out = value(v);
  for (double& x : out.data()) x = 1.0 / (1.0 + std::exp(-x));
  Var self = push(std::move(out), {});
  nodes_[self.id].back = [v, self](Graph& g, const Tensor& go) {
    const Tensor& y = g.value(self);
    Tensor& gx = g.grad_ref(v);
    for (std::size_t i = 0; i < go.size(); ++i) gx[i] += y[i] * (1.0 - y[i]) * go[i];
  };
  return self;
}

Var Graph::softmax(Var v) {
  Tensor out = numkit::softmax(value(v));
  Var self = push(std::move(out), {});
  nodes_[self.id].back = [v, self](Graph& g, const Tensor& go) {
    const Tensor& y = g.value(self);
    Tensor& gx = g.grad_ref(v);
    double inner = 0.0;
    for (std::size_t i = 0; i < go.size(); ++i) inner += go[i] * y[i];
    for (std::size_t i = 0; i < go.size(); ++i) gx[i] += y[i] * (go[i] - inner);
  };
  return self;
}

Var Graph::elementwise_max(const std::vector<Var>& rows) {
  if (rows.empty()) throw DataError("elementwise_max of zero rows");
  const std::size_t n = value(rows[0]).size();
  for (Var r : rows) {
    if (value(r).size() != n) throw DataError("elementwise_max length mismatch");
  }
  Tensor out = value(rows[0]);
  std::vector<int> winner(n, 0);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const Tensor& t = value(rows[k]);
    for (std::size_t i = 0; i < n; ++i) {
      if (t[i] > out[i]) {
        out[i] = t[i];
        winner[i] = static_cast<int>(k);
      }
    }
  }
  return push(std::move(out), [rows, winner](Graph& g, const Tensor& go) {
    for (std::size_t i = 0; i < go.size(); ++i) {
      g.grad_ref(rows[winner[i]])[i] += go[i];
    }
  });
}

Var Graph::l1_norm(Var v) {
  const Tensor& x = value(v);
  double s = 0.0;
  for (double a : x.data()) s += std::fabs(a);
  return push(Tensor::scalar(s), [v](Graph& g, const Tensor& go) {
    const Tensor& x = g.value(v);
    Tensor& gx = g.grad_ref(v);
    const double gs = go.scalar_value();
    for (std::size_t i = 0; i < x.size(); ++i) {
      // subgradient 0 at the kink
      gx[i] += gs * (x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0));
    }
  });
}

Var Graph::cross_entropy(Var logits, int label) {
  const Tensor& z = value(logits);
  if (!z.is_vector() || label < 0 || static_cast<std::size_t>(label) >= z.size()) {
    throw DataError("cross_entropy label out of range");
  }
  double mx = *std::max_element(z.data().begin(), z.data().end());
  double lse = 0.0;
  for (double a : z.data()) lse += std::exp(a - mx);
  lse = mx + std::log(lse);
  return push(Tensor::scalar(lse - z[label]), [logits, label](Graph& g, const Tensor& go) {
    const Tensor p = numkit::softmax(g.value(logits));
    Tensor& gz = g.grad_ref(logits);
    const double gs = go.scalar_value();
    for (std::size_t i = 0; i < p.size(); ++i) {
      gz[i] += gs * (p[i] - (static_cast<int>(i) == label ? 1.0 : 0.0));
    }
  });
}

void Graph::backward(Var loss) {
  if (!loss.valid() || !value(loss).is_scalar()) throw DataError("backward requires a scalar loss");
  for (auto& node : nodes_) node.grad.fill(0.0);
  nodes_[loss.id].grad[0] = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    if (nodes_[i].back) nodes_[i].back(*this, nodes_[i].grad);
  }
  for (auto& [id, p] : bound_) {
    const Tensor& g = nodes_[id].grad;
    for (std::size_t i = 0; i < g.size(); ++i) p->grad[i] += g[i];
  }
  for (auto& [id, p] : bound_) {
    if (!p->grad.all_finite()) throw NumericError("non-finite gradient for parameter " + p->name);
  }
}

}  // namespace kgre::numkit

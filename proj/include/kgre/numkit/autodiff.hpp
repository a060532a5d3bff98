#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgre/numkit/tensor.hpp"

namespace kgre::numkit {

/// Named trainable tensor. `grad` accumulates across Graph::backward calls
/// until zero_grad (the optimizer clears it after each step).
struct Param {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor adam_m, adam_v;  // allocated lazily by the optimizer

  Param() = default;
  Param(std::string n, Tensor v);
  void zero_grad() { grad.fill(0.0); }
};

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

/// Reverse-mode tape over Tensor values. One Graph per forward pass; nodes
/// are created in topological order so backward() is a single reverse sweep.
/// Every node value is checked finite on creation, which keeps the Tensor
/// finiteness invariant observable at each public boundary.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // Leaves.
  Var constant(Tensor v);
  Var param(Param& p);  // one node per Param per graph; grads flow to p.grad

  // Structure.
  Var row(Var matrix, int r);
  Var slice(Var v, int start, int len);
  Var concat(const std::vector<Var>& parts);
  Var reshape(Var v, int rows, int cols);

  // Linear algebra.
  Var matvec(Var m, Var v);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);  // elementwise
  Var scale(Var a, double c);
  Var scale_by(Var v, Var scalar);
  Var dot(Var a, Var b);
  Var sum(Var v);
  Var mean(Var v);

  // Nonlinearities.
  Var relu(Var v);
  Var leaky_relu(Var v, double slope);
  Var elu(Var v);
  Var tanh(Var v);
  Var sigmoid(Var v);
  Var softmax(Var v);

  // Reductions and losses.
  Var elementwise_max(const std::vector<Var>& rows);  // grad routes to first argmax
  Var l1_norm(Var v);
  Var cross_entropy(Var logits, int label);  // log-sum-exp minus gold logit

  const Tensor& value(Var v) const { return nodes_[v.id].val; }
  const Tensor& grad(Var v) const { return nodes_[v.id].grad; }
  double scalar(Var v) const { return nodes_[v.id].val.scalar_value(); }

  /// Seeds d(loss)=1, runs the reverse sweep, then adds leaf gradients into
  /// their bound Params. `loss` must be scalar.
  void backward(Var loss);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  // Backward closure: receives the graph and this node's output gradient.
  using BackFn = std::function<void(Graph&, const Tensor&)>;

  struct Node {
    Tensor val;
    Tensor grad;
    BackFn back;  // empty for leaves
  };

  Var push(Tensor val, BackFn back);
  Tensor& grad_ref(Var v) { return nodes_[v.id].grad; }

  std::vector<Node> nodes_;
  std::unordered_map<const Param*, int> param_nodes_;
  std::vector<std::pair<int, Param*>> bound_;
};

}  // namespace kgre::numkit

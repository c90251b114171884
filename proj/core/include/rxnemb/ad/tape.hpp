#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rxnemb/ad/tensor.hpp"

namespace rxnemb::ad {

using Mask = std::vector<std::uint8_t>;  // 1 = live entry, 0 = masked out

// Reverse-mode tape. Operations append nodes in topological order; backward
// walks them in reverse, accumulating gradients into every node that
// (transitively) depends on a parameter. Values are immutable once written.
// A tape is single-threaded; independent tapes may run concurrently.
template <typename T>
class Tape {
 public:
  using Var = int;

  Var constant(Tensor<T> value, const char* name = "constant");
  Var param(Tensor<T> value, const char* name = "param");

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var add_row(Var a, Var bias);  // bias is 1 x n, broadcast over rows
  Var scale(Var a, T factor);
  Var relu(Var a);
  Var gelu(Var a);
  Var sigmoid(Var a);
  Var softmax_rows(Var a);
  Var softmax_rows(Var a, const Mask& mask);
  Var layer_norm(Var x, Var gamma, Var beta, T eps = T(1e-5));
  Var transpose(Var a);
  Var concat_cols(const std::vector<Var>& parts);
  Var concat_rows(const std::vector<Var>& parts);
  Var slice_cols(Var a, int begin, int count);
  Var sum(Var a);                              // -> 1x1
  Var mean_rows(Var a, const Mask& row_mask);  // masked mean over rows -> 1xn
  Var bce_with_logits(Var logits, const std::vector<T>& targets);  // mean -> 1x1

  void backward(Var loss);

  const Tensor<T>& value(Var v) const { return nodes_[static_cast<std::size_t>(v)].value; }
  // Gradient of the last backward() w.r.t. node v (zeros if v was not touched).
  Tensor<T> grad(Var v) const;
  const char* op_name(Var v) const { return nodes_[static_cast<std::size_t>(v)].name; }
  const std::vector<int>& inputs_of(Var v) const {
    return nodes_[static_cast<std::size_t>(v)].inputs;
  }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor<T> value;
    Tensor<T> grad;  // allocated lazily during backward
    std::function<void(Tape&)> back;
    std::vector<int> inputs;
    const char* name = "";
    bool requires_grad = false;
    bool grad_live = false;
  };

  Var push(Tensor<T> value, const char* name, std::vector<int> inputs,
           std::function<void(Tape&)> back);
  bool any_requires_grad(const std::vector<int>& inputs) const;
  Tensor<T>& grad_ref(Var v);
  void check_matrix(Var v, const char* who) const;

  std::vector<Node> nodes_;
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace rxnemb::ad

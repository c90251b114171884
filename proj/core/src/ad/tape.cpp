#include "rxnemb/ad/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rxnemb::ad {

namespace {

// C += A * B, row-major, ikj order so the inner loop runs over contiguous rows.
template <typename T>
void matmul_acc(const T* a, const T* b, T* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const T* arow = a + static_cast<std::size_t>(i) * static_cast<std::size_t>(k);
    T* crow = c + static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
    for (int p = 0; p < k; ++p) {
      const T av = arow[p];
      if (av == T(0)) continue;
      const T* brow = b + static_cast<std::size_t>(p) * static_cast<std::size_t>(n);
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C += A^T * B with A m x k, B m x n, C k x n.
template <typename T>
void matmul_at_b_acc(const T* a, const T* b, T* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const T* arow = a + static_cast<std::size_t>(i) * static_cast<std::size_t>(k);
    const T* brow = b + static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
    for (int p = 0; p < k; ++p) {
      const T av = arow[p];
      if (av == T(0)) continue;
      T* crow = c + static_cast<std::size_t>(p) * static_cast<std::size_t>(n);
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C += A * B^T with A m x k, B n x k, C m x n.
template <typename T>
void matmul_a_bt_acc(const T* a, const T* b, T* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const T* arow = a + static_cast<std::size_t>(i) * static_cast<std::size_t>(k);
    T* crow = c + static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
    for (int j = 0; j < n; ++j) {
      const T* brow = b + static_cast<std::size_t>(j) * static_cast<std::size_t>(k);
      T acc = T(0);
      for (int p = 0; p < k; ++p) acc += arow[p] * brow[p];
      crow[j] += acc;
    }
  }
}

template <typename T>
T stable_softplus(T z) {
  return std::max(z, T(0)) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

template <typename T>
typename Tape<T>::Var Tape<T>::push(Tensor<T> value, const char* name, std::vector<int> inputs,
                                    std::function<void(Tape&)> back) {
  Node node;
  node.value = std::move(value);
  node.name = name;
  node.requires_grad = any_requires_grad(inputs);
  node.inputs = std::move(inputs);
  if (node.requires_grad) node.back = std::move(back);
  nodes_.push_back(std::move(node));
  return static_cast<Var>(nodes_.size() - 1);
}

template <typename T>
bool Tape<T>::any_requires_grad(const std::vector<int>& inputs) const {
  for (int i : inputs) {
    if (nodes_[static_cast<std::size_t>(i)].requires_grad) return true;
  }
  return false;
}

template <typename T>
Tensor<T>& Tape<T>::grad_ref(Var v) {
  Node& node = nodes_[static_cast<std::size_t>(v)];
  if (!node.grad_live) {
    node.grad = Tensor<T>::zeros(node.value.shape);
    node.grad_live = true;
  }
  return node.grad;
}

template <typename T>
Tensor<T> Tape<T>::grad(Var v) const {
  const Node& node = nodes_[static_cast<std::size_t>(v)];
  if (node.grad_live) return node.grad;
  return Tensor<T>::zeros(node.value.shape);
}

template <typename T>
void Tape<T>::check_matrix(Var v, const char* who) const {
  if (!value(v).is_matrix()) {
    throw Error(ErrorCode::ShapeMismatch, std::string(who) + " expects a rank-2 tensor");
  }
}

template <typename T>
typename Tape<T>::Var Tape<T>::constant(Tensor<T> value, const char* name) {
  Node node;
  node.value = std::move(value);
  node.name = name;
  nodes_.push_back(std::move(node));
  return static_cast<Var>(nodes_.size() - 1);
}

template <typename T>
typename Tape<T>::Var Tape<T>::param(Tensor<T> value, const char* name) {
  Node node;
  node.value = std::move(value);
  node.name = name;
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return static_cast<Var>(nodes_.size() - 1);
}

template <typename T>
typename Tape<T>::Var Tape<T>::matmul(Var a, Var b) {
  check_matrix(a, "matmul");
  check_matrix(b, "matmul");
  const int m = value(a).rows(), k = value(a).cols(), n = value(b).cols();
  if (value(b).rows() != k) {
    throw Error(ErrorCode::ShapeMismatch,
                "matmul " + value(a).shape_string() + " x " + value(b).shape_string());
  }
  Tensor<T> out = Tensor<T>::zeros({m, n});
  matmul_acc(value(a).data.data(), value(b).data.data(), out.data.data(), m, k, n);
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "matmul", {a, b}, [id, a, b, m, k, n](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    if (t.nodes_[static_cast<std::size_t>(a)].requires_grad) {
      // dA += dC * B^T
      matmul_a_bt_acc(g.data.data(), t.value(b).data.data(), t.grad_ref(a).data.data(), m, n, k);
    }
    if (t.nodes_[static_cast<std::size_t>(b)].requires_grad) {
      // dB += A^T * dC
      matmul_at_b_acc(t.value(a).data.data(), g.data.data(), t.grad_ref(b).data.data(), m, k, n);
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::add(Var a, Var b) {
  if (value(a).shape != value(b).shape) {
    throw Error(ErrorCode::ShapeMismatch,
                "add " + value(a).shape_string() + " vs " + value(b).shape_string());
  }
  Tensor<T> out = value(a);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += value(b).data[i];
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "add", {a, b}, [id, a, b](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    for (Var in : {a, b}) {
      if (!t.nodes_[static_cast<std::size_t>(in)].requires_grad) continue;
      Tensor<T>& gi = t.grad_ref(in);
      for (std::size_t i = 0; i < g.data.size(); ++i) gi.data[i] += g.data[i];
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::sub(Var a, Var b) {
  if (value(a).shape != value(b).shape) {
    throw Error(ErrorCode::ShapeMismatch,
                "sub " + value(a).shape_string() + " vs " + value(b).shape_string());
  }
  Tensor<T> out = value(a);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= value(b).data[i];
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "sub", {a, b}, [id, a, b](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    if (t.nodes_[static_cast<std::size_t>(a)].requires_grad) {
      Tensor<T>& ga = t.grad_ref(a);
      for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i];
    }
    if (t.nodes_[static_cast<std::size_t>(b)].requires_grad) {
      Tensor<T>& gb = t.grad_ref(b);
      for (std::size_t i = 0; i < g.data.size(); ++i) gb.data[i] -= g.data[i];
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::add_row(Var a, Var bias) {
  check_matrix(a, "add_row");
  const int m = value(a).rows(), n = value(a).cols();
  if (value(bias).rows() != 1 || value(bias).cols() != n) {
    throw Error(ErrorCode::ShapeMismatch, "add_row bias must be 1x" + std::to_string(n) +
                                              ", got " + value(bias).shape_string());
  }
  Tensor<T> out = value(a);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) out.at(i, j) += value(bias).at(0, j);
  }
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "add_row", {a, bias}, [id, a, bias, m, n](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    if (t.nodes_[static_cast<std::size_t>(a)].requires_grad) {
      Tensor<T>& ga = t.grad_ref(a);
      for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i];
    }
    if (t.nodes_[static_cast<std::size_t>(bias)].requires_grad) {
      Tensor<T>& gb = t.grad_ref(bias);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) gb.at(0, j) += g.at(i, j);
      }
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::scale(Var a, T factor) {
  Tensor<T> out = value(a);
  for (T& x : out.data) x *= factor;
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "scale", {a}, [id, a, factor](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    Tensor<T>& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += factor * g.data[i];
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::relu(Var a) {
  Tensor<T> out = value(a);
  for (T& x : out.data) x = std::max(x, T(0));
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "relu", {a}, [id, a](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    const Tensor<T>& x = t.value(a);
    Tensor<T>& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      if (x.data[i] > T(0)) ga.data[i] += g.data[i];
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::gelu(Var a) {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  Tensor<T> out = value(a);
  for (T& x : out.data) {
    const double xd = static_cast<double>(x);
    x = static_cast<T>(0.5 * xd * (1.0 + std::erf(xd * kInvSqrt2)));
  }
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "gelu", {a}, [id, a](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    const Tensor<T>& x = t.value(a);
    Tensor<T>& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      const double xd = static_cast<double>(x.data[i]);
      const double cdf = 0.5 * (1.0 + std::erf(xd * kInvSqrt2));
      const double pdf = kInvSqrt2Pi * std::exp(-0.5 * xd * xd);
      ga.data[i] += g.data[i] * static_cast<T>(cdf + xd * pdf);
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::sigmoid(Var a) {
  Tensor<T> out = value(a);
  for (T& x : out.data) {
    const double z = static_cast<double>(x);
    x = static_cast<T>(z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                              : std::exp(z) / (1.0 + std::exp(z)));
  }
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "sigmoid", {a}, [id, a](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    const Tensor<T>& y = t.value(id);
    Tensor<T>& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      ga.data[i] += g.data[i] * y.data[i] * (T(1) - y.data[i]);
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::softmax_rows(Var a) {
  return softmax_rows(a, Mask(value(a).size(), 1));
}

template <typename T>
typename Tape<T>::Var Tape<T>::softmax_rows(Var a, const Mask& mask) {
  check_matrix(a, "softmax_rows");
  const Tensor<T>& x = value(a);
  const int m = x.rows(), n = x.cols();
  if (mask.size() != x.size()) {
    throw Error(ErrorCode::ShapeMismatch, "softmax mask size mismatch");
  }
  Tensor<T> out = Tensor<T>::zeros({m, n});
  for (int i = 0; i < m; ++i) {
    T maxv = -std::numeric_limits<T>::infinity();
    bool any = false;
    for (int j = 0; j < n; ++j) {
      if (!mask[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]) continue;
      any = true;
      maxv = std::max(maxv, x.at(i, j));
    }
    if (!any) {
      throw Error(ErrorCode::AllMaskedRow, "softmax row " + std::to_string(i) + " fully masked");
    }
    T denom = T(0);
    for (int j = 0; j < n; ++j) {
      if (!mask[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]) continue;
      const T e = std::exp(x.at(i, j) - maxv);
      out.at(i, j) = e;
      denom += e;
    }
    for (int j = 0; j < n; ++j) out.at(i, j) /= denom;
  }
  const Var id = static_cast<Var>(nodes_.size());
  Mask mask_copy = mask;
  return push(std::move(out), "softmax_rows", {a},
              [id, a, m, n, mask_copy = std::move(mask_copy)](Tape& t) {
                const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
                const Tensor<T>& y = t.value(id);
                Tensor<T>& ga = t.grad_ref(a);
                for (int i = 0; i < m; ++i) {
                  T dot = T(0);
                  for (int j = 0; j < n; ++j) dot += g.at(i, j) * y.at(i, j);
                  for (int j = 0; j < n; ++j) {
                    if (!mask_copy[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                   static_cast<std::size_t>(j)]) {
                      continue;
                    }
                    ga.at(i, j) += y.at(i, j) * (g.at(i, j) - dot);
                  }
                }
              });
}

template <typename T>
typename Tape<T>::Var Tape<T>::layer_norm(Var x, Var gamma, Var beta, T eps) {
  check_matrix(x, "layer_norm");
  const int m = value(x).rows(), n = value(x).cols();
  if (value(gamma).rows() != 1 || value(gamma).cols() != n || value(beta).rows() != 1 ||
      value(beta).cols() != n) {
    throw Error(ErrorCode::ShapeMismatch, "layer_norm gamma/beta must be 1x" + std::to_string(n));
  }
  Tensor<T> out = Tensor<T>::zeros({m, n});
  Tensor<T> xhat = Tensor<T>::zeros({m, n});
  std::vector<T> inv_std(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    T mean = T(0);
    for (int j = 0; j < n; ++j) mean += value(x).at(i, j);
    mean /= static_cast<T>(n);
    T var = T(0);
    for (int j = 0; j < n; ++j) {
      const T d = value(x).at(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<T>(n);
    const T istd = T(1) / std::sqrt(var + eps);
    inv_std[static_cast<std::size_t>(i)] = istd;
    for (int j = 0; j < n; ++j) {
      const T xh = (value(x).at(i, j) - mean) * istd;
      xhat.at(i, j) = xh;
      out.at(i, j) = xh * value(gamma).at(0, j) + value(beta).at(0, j);
    }
  }
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "layer_norm", {x, gamma, beta},
              [id, x, gamma, beta, m, n, xhat = std::move(xhat),
               inv_std = std::move(inv_std)](Tape& t) {
                const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
                if (t.nodes_[static_cast<std::size_t>(beta)].requires_grad) {
                  Tensor<T>& gb = t.grad_ref(beta);
                  for (int i = 0; i < m; ++i) {
                    for (int j = 0; j < n; ++j) gb.at(0, j) += g.at(i, j);
                  }
                }
                if (t.nodes_[static_cast<std::size_t>(gamma)].requires_grad) {
                  Tensor<T>& gg = t.grad_ref(gamma);
                  for (int i = 0; i < m; ++i) {
                    for (int j = 0; j < n; ++j) gg.at(0, j) += g.at(i, j) * xhat.at(i, j);
                  }
                }
                if (t.nodes_[static_cast<std::size_t>(x)].requires_grad) {
                  Tensor<T>& gx = t.grad_ref(x);
                  for (int i = 0; i < m; ++i) {
                    T mean_h = T(0), mean_hx = T(0);
                    for (int j = 0; j < n; ++j) {
                      const T h = g.at(i, j) * t.value(gamma).at(0, j);
                      mean_h += h;
                      mean_hx += h * xhat.at(i, j);
                    }
                    mean_h /= static_cast<T>(n);
                    mean_hx /= static_cast<T>(n);
                    for (int j = 0; j < n; ++j) {
                      const T h = g.at(i, j) * t.value(gamma).at(0, j);
                      gx.at(i, j) += (h - mean_h - xhat.at(i, j) * mean_hx) *
                                     inv_std[static_cast<std::size_t>(i)];
                    }
                  }
                }
              });
}

template <typename T>
typename Tape<T>::Var Tape<T>::transpose(Var a) {
  check_matrix(a, "transpose");
  const int m = value(a).rows(), n = value(a).cols();
  Tensor<T> out = Tensor<T>::zeros({n, m});
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) out.at(j, i) = value(a).at(i, j);
  }
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "transpose", {a}, [id, a, m, n](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    Tensor<T>& ga = t.grad_ref(a);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) ga.at(i, j) += g.at(j, i);
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "concat_cols needs at least one input");
  }
  const int m = value(parts[0]).rows();
  int total = 0;
  for (Var p : parts) {
    check_matrix(p, "concat_cols");
    if (value(p).rows() != m) {
      throw Error(ErrorCode::ShapeMismatch, "concat_cols row count mismatch");
    }
    total += value(p).cols();
  }
  Tensor<T> out = Tensor<T>::zeros({m, total});
  int off = 0;
  for (Var p : parts) {
    const int n = value(p).cols();
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) out.at(i, off + j) = value(p).at(i, j);
    }
    off += n;
  }
  const Var id = static_cast<Var>(nodes_.size());
  std::vector<int> inputs(parts.begin(), parts.end());
  return push(std::move(out), "concat_cols", inputs, [id, inputs, m](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    int off = 0;
    for (Var p : inputs) {
      const int n = t.value(p).cols();
      if (t.nodes_[static_cast<std::size_t>(p)].requires_grad) {
        Tensor<T>& gp = t.grad_ref(p);
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < n; ++j) gp.at(i, j) += g.at(i, off + j);
        }
      }
      off += n;
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "concat_rows needs at least one input");
  }
  const int n = value(parts[0]).cols();
  int total = 0;
  for (Var p : parts) {
    check_matrix(p, "concat_rows");
    if (value(p).cols() != n) {
      throw Error(ErrorCode::ShapeMismatch, "concat_rows column count mismatch");
    }
    total += value(p).rows();
  }
  Tensor<T> out = Tensor<T>::zeros({total, n});
  int off = 0;
  for (Var p : parts) {
    const int m = value(p).rows();
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) out.at(off + i, j) = value(p).at(i, j);
    }
    off += m;
  }
  const Var id = static_cast<Var>(nodes_.size());
  std::vector<int> inputs(parts.begin(), parts.end());
  return push(std::move(out), "concat_rows", inputs, [id, inputs, n](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    int off = 0;
    for (Var p : inputs) {
      const int m = t.value(p).rows();
      if (t.nodes_[static_cast<std::size_t>(p)].requires_grad) {
        Tensor<T>& gp = t.grad_ref(p);
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < n; ++j) gp.at(i, j) += g.at(off + i, j);
        }
      }
      off += m;
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::slice_cols(Var a, int begin, int count) {
  check_matrix(a, "slice_cols");
  const int m = value(a).rows(), n = value(a).cols();
  if (begin < 0 || count <= 0 || begin + count > n) {
    throw Error(ErrorCode::ShapeMismatch, "slice_cols out of range");
  }
  Tensor<T> out = Tensor<T>::zeros({m, count});
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < count; ++j) out.at(i, j) = value(a).at(i, begin + j);
  }
  const Var id = static_cast<Var>(nodes_.size());
  return push(std::move(out), "slice_cols", {a}, [id, a, m, begin, count](Tape& t) {
    const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
    Tensor<T>& ga = t.grad_ref(a);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < count; ++j) ga.at(i, begin + j) += g.at(i, j);
    }
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::sum(Var a) {
  T total = T(0);
  for (T x : value(a).data) total += x;
  const Var id = static_cast<Var>(nodes_.size());
  return push(Tensor<T>::scalar(total), "sum", {a}, [id, a](Tape& t) {
    const T g = t.nodes_[static_cast<std::size_t>(id)].grad.data[0];
    Tensor<T>& ga = t.grad_ref(a);
    for (T& x : ga.data) x += g;
  });
}

template <typename T>
typename Tape<T>::Var Tape<T>::mean_rows(Var a, const Mask& row_mask) {
  check_matrix(a, "mean_rows");
  const int m = value(a).rows(), n = value(a).cols();
  if (static_cast<int>(row_mask.size()) != m) {
    throw Error(ErrorCode::ShapeMismatch, "mean_rows mask size mismatch");
  }
  int live = 0;
  for (auto b : row_mask) live += b ? 1 : 0;
  if (live == 0) {
    throw Error(ErrorCode::AllMasked, "mean_rows: no unmasked rows");
  }
  Tensor<T> out = Tensor<T>::zeros({1, n});
  for (int i = 0; i < m; ++i) {
    if (!row_mask[static_cast<std::size_t>(i)]) continue;
    for (int j = 0; j < n; ++j) out.at(0, j) += value(a).at(i, j);
  }
  const T inv = T(1) / static_cast<T>(live);
  for (int j = 0; j < n; ++j) out.at(0, j) *= inv;
  const Var id = static_cast<Var>(nodes_.size());
  Mask mask_copy = row_mask;
  return push(std::move(out), "mean_rows", {a},
              [id, a, m, n, inv, mask_copy = std::move(mask_copy)](Tape& t) {
                const Tensor<T>& g = t.nodes_[static_cast<std::size_t>(id)].grad;
                Tensor<T>& ga = t.grad_ref(a);
                for (int i = 0; i < m; ++i) {
                  if (!mask_copy[static_cast<std::size_t>(i)]) continue;
                  for (int j = 0; j < n; ++j) ga.at(i, j) += g.at(0, j) * inv;
                }
              });
}

template <typename T>
typename Tape<T>::Var Tape<T>::bce_with_logits(Var logits, const std::vector<T>& targets) {
  check_matrix(logits, "bce_with_logits");
  const int m = value(logits).rows();
  if (value(logits).cols() != 1 || static_cast<int>(targets.size()) != m) {
    throw Error(ErrorCode::ShapeMismatch, "bce_with_logits expects m x 1 logits and m targets");
  }
  T loss = T(0);
  for (int i = 0; i < m; ++i) {
    const T z = value(logits).at(i, 0);
    loss += stable_softplus(z) - z * targets[static_cast<std::size_t>(i)];
  }
  loss /= static_cast<T>(m);
  const Var id = static_cast<Var>(nodes_.size());
  std::vector<T> targets_copy = targets;
  return push(Tensor<T>::scalar(loss), "bce_with_logits", {logits},
              [id, logits, m, targets_copy = std::move(targets_copy)](Tape& t) {
                const T g = t.nodes_[static_cast<std::size_t>(id)].grad.data[0];
                const T inv = T(1) / static_cast<T>(m);
                Tensor<T>& gl = t.grad_ref(logits);
                for (int i = 0; i < m; ++i) {
                  const double z = static_cast<double>(t.value(logits).at(i, 0));
                  const double s = z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                                          : std::exp(z) / (1.0 + std::exp(z));
                  gl.at(i, 0) += g * inv * (static_cast<T>(s) - targets_copy[static_cast<std::size_t>(i)]);
                }
              });
}

template <typename T>
void Tape<T>::backward(Var loss) {
  Node& last = nodes_[static_cast<std::size_t>(loss)];
  if (last.value.size() != 1) {
    throw Error(ErrorCode::NotScalar,
                "backward needs a scalar loss, got " + last.value.shape_string());
  }
  for (Node& node : nodes_) {
    node.grad_live = false;
    node.grad = Tensor<T>();
  }
  grad_ref(loss).data[0] = T(1);
  for (int v = loss; v >= 0; --v) {
    Node& node = nodes_[static_cast<std::size_t>(v)];
    if (!node.requires_grad || !node.grad_live || !node.back) continue;
    node.back(*this);
  }
}

template class Tape<float>;
template class Tape<double>;

}  // namespace rxnemb::ad

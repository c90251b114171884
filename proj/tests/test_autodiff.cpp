#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "rxnemb/ad/adam.hpp"
#include "rxnemb/ad/tape.hpp"
#include "rxnemb/common/rng.hpp"

using namespace rxnemb;
using ad::Tape;
using ad::Tensor;

namespace {

Tensor<double> random_tensor(Rng& rng, int rows, int cols, double scale = 1.0) {
  std::vector<double> data(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (double& x : data) x = scale * rng.uniform(-1.0, 1.0);
  return Tensor<double>::matrix(rows, cols, std::move(data));
}

// Central finite differences of a scalar function of several tensors,
// compared against tape gradients. Step 1e-3, 64-bit, relative error with a
// small absolute floor.
void check_gradients(const std::vector<Tensor<double>>& inputs,
                     const std::function<int(Tape<double>&, const std::vector<int>&)>& build,
                     double tol = 1e-4, double step = 1e-3) {
  Tape<double> tape;
  std::vector<int> vars;
  for (const auto& t : inputs) vars.push_back(tape.param(t, "input"));
  tape.backward(build(tape, vars));

  for (std::size_t which = 0; which < inputs.size(); ++which) {
    const Tensor<double> grad = tape.grad(vars[which]);
    for (std::size_t e = 0; e < inputs[which].data.size(); ++e) {
      auto eval = [&](double delta) {
        std::vector<Tensor<double>> shifted = inputs;
        shifted[which].data[e] += delta;
        Tape<double> t2;
        std::vector<int> vs;
        for (const auto& t : shifted) vs.push_back(t2.param(t, "input"));
        return t2.value(build(t2, vs)).data[0];
      };
      const double fd = (eval(step) - eval(-step)) / (2.0 * step);
      const double got = grad.data[e];
      const double rel = std::abs(fd - got) / std::max({std::abs(fd), std::abs(got), 1e-4});
      CAPTURE(which);
      CAPTURE(e);
      CAPTURE(fd);
      CAPTURE(got);
      CHECK(rel < tol);
    }
  }
}

}  // namespace

TEST_CASE("matmul forward basics") {
  Tape<float> tape;
  auto a = tape.constant(Tensor<float>::matrix(1, 2, {1, 2}));
  auto b = tape.constant(Tensor<float>::matrix(2, 1, {3, 4}));
  auto c = tape.matmul(a, b);
  CHECK(tape.value(c).data[0] == doctest::Approx(11.0f));

  auto eye = tape.constant(Tensor<float>::matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  auto m = tape.constant(Tensor<float>::matrix(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9}));
  auto prod = tape.matmul(m, eye);
  CHECK(tape.value(prod).data == tape.value(m).data);

  CHECK_THROWS_WITH_AS(tape.matmul(a, a), doctest::Contains("ShapeMismatch"), Error);
}

TEST_CASE("matmul gradient matches finite differences") {
  Rng rng(42);
  const auto a = random_tensor(rng, 4, 5);
  const auto b = random_tensor(rng, 5, 3);
  check_gradients({a, b}, [](Tape<double>& t, const std::vector<int>& v) {
    return t.sum(t.matmul(v[0], v[1]));
  });
}

TEST_CASE("softmax rows: symmetry, analytic values, mask contract") {
  Tape<float> tape;
  auto x = tape.constant(Tensor<float>::matrix(1, 2, {0, 0}));
  auto y = tape.softmax_rows(x);
  CHECK(tape.value(y).data[0] == doctest::Approx(0.5));
  CHECK(tape.value(y).data[1] == doctest::Approx(0.5));

  auto x2 = tape.constant(Tensor<float>::matrix(1, 2, {std::log(2.0f), 0.0f}));
  auto y2 = tape.softmax_rows(x2);
  CHECK(tape.value(y2).data[0] == doctest::Approx(2.0 / 3.0));
  CHECK(tape.value(y2).data[1] == doctest::Approx(1.0 / 3.0));

  auto x3 = tape.constant(Tensor<float>::matrix(1, 3, {5, 5, 99}));
  auto y3 = tape.softmax_rows(x3, ad::Mask{1, 1, 0});
  CHECK(tape.value(y3).data[0] == doctest::Approx(0.5));
  CHECK(tape.value(y3).data[1] == doctest::Approx(0.5));
  CHECK(tape.value(y3).data[2] == 0.0f);  // exactly zero

  CHECK_THROWS_WITH_AS(tape.softmax_rows(x3, ad::Mask{0, 0, 0}),
                       doctest::Contains("AllMaskedRow"), Error);
}

TEST_CASE("softmax row sums are 1 over unmasked entries (property)") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int rows = 1 + rng.index(5);
    const int cols = 2 + rng.index(6);
    Tensor<float> x = random_tensor(rng, rows, cols).cast<float>();
    ad::Mask mask(static_cast<std::size_t>(rows * cols), 1);
    for (auto& m : mask) m = rng.chance(0.75) ? 1 : 0;
    for (int r = 0; r < rows; ++r) {  // keep each row feasible
      mask[static_cast<std::size_t>(r * cols + rng.index(cols))] = 1;
    }
    Tape<float> tape;
    auto y = tape.softmax_rows(tape.constant(x), mask);
    for (int r = 0; r < rows; ++r) {
      double sum = 0;
      for (int c = 0; c < cols; ++c) sum += tape.value(y).at(r, c);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("softmax gradient vs finite differences") {
  Rng rng(11);
  const auto x = random_tensor(rng, 3, 4);
  const auto w = random_tensor(rng, 3, 4);  // weights for a non-trivial loss
  check_gradients({x}, [&](Tape<double>& t, const std::vector<int>& v) {
    auto soft = t.softmax_rows(v[0]);
    auto weighted = t.matmul(soft, t.transpose(t.constant(w)));
    return t.sum(t.sum(weighted));
  });
}

TEST_CASE("layer_norm analytic and gradient") {
  Tape<float> tape;
  auto gamma = tape.constant(Tensor<float>::matrix(1, 3, {1, 1, 1}));
  auto beta = tape.constant(Tensor<float>::matrix(1, 3, {0, 0, 0}));
  auto constant_row = tape.constant(Tensor<float>::matrix(1, 3, {4, 4, 4}));
  auto y = tape.layer_norm(constant_row, gamma, beta);
  for (float v : tape.value(y).data) CHECK(v == doctest::Approx(0.0));

  auto two = tape.constant(Tensor<float>::matrix(1, 2, {1, -1}));
  auto gamma2 = tape.constant(Tensor<float>::matrix(1, 2, {1, 1}));
  auto beta2 = tape.constant(Tensor<float>::matrix(1, 2, {0, 0}));
  auto y2 = tape.layer_norm(two, gamma2, beta2);
  CHECK(tape.value(y2).data[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(tape.value(y2).data[1] == doctest::Approx(-1.0).epsilon(1e-4));

  Rng rng(13);
  const auto x = random_tensor(rng, 4, 6);
  const auto g = random_tensor(rng, 1, 6);
  const auto b = random_tensor(rng, 1, 6);
  const auto mix = random_tensor(rng, 4, 6);
  check_gradients(
      {x, g, b},
      [&](Tape<double>& t, const std::vector<int>& v) {
        auto normed = t.layer_norm(v[0], v[1], v[2]);
        auto weighted = t.matmul(normed, t.transpose(t.constant(mix)));
        return t.sum(weighted);
      },
      1e-5);
}

TEST_CASE("relu and gelu") {
  Tape<float> tape;
  auto x = tape.constant(Tensor<float>::matrix(1, 3, {-1, 0, 2}));
  auto r = tape.relu(x);
  CHECK(tape.value(r).data == std::vector<float>{0, 0, 2});
  auto gz = tape.gelu(tape.constant(Tensor<float>::scalar(0.0f)));
  CHECK(tape.value(gz).data[0] == 0.0f);

  Rng rng(17);
  // keep inputs away from the relu kink so finite differences are valid
  Tensor<double> far = random_tensor(rng, 3, 5);
  for (double& v : far.data) v += v >= 0 ? 0.5 : -0.5;
  const auto w = random_tensor(rng, 3, 5);
  check_gradients({far}, [&](Tape<double>& t, const std::vector<int>& v) {
    auto mixed = t.matmul(t.relu(v[0]), t.transpose(t.constant(w)));
    return t.sum(mixed);
  });
  check_gradients({far}, [&](Tape<double>& t, const std::vector<int>& v) {
    auto mixed = t.matmul(t.gelu(v[0]), t.transpose(t.constant(w)));
    return t.sum(mixed);
  });
}

TEST_CASE("composite ops: concat, slice, transpose, add_row, mean_rows, bce") {
  Rng rng(19);
  const auto a = random_tensor(rng, 3, 4);
  const auto b = random_tensor(rng, 3, 2);
  const auto bias = random_tensor(rng, 1, 6);
  check_gradients({a, b, bias}, [&](Tape<double>& t, const std::vector<int>& v) {
    auto cat = t.concat_cols({v[0], v[1]});
    auto shifted = t.add_row(cat, v[2]);
    auto sliced = t.slice_cols(shifted, 1, 4);
    auto pooled = t.mean_rows(t.transpose(sliced), ad::Mask{1, 0, 1, 1});
    return t.sum(pooled);
  });

  const auto logits = random_tensor(rng, 5, 1, 2.0);
  check_gradients({logits}, [&](Tape<double>& t, const std::vector<int>& v) {
    return t.bce_with_logits(v[0], {1.0, 0.0, 1.0, 0.0, 1.0});
  });

  const auto rows = random_tensor(rng, 2, 3);
  const auto rows2 = random_tensor(rng, 4, 3);
  check_gradients({rows, rows2}, [&](Tape<double>& t, const std::vector<int>& v) {
    auto cat = t.concat_rows({v[0], v[1]});
    auto soft = t.softmax_rows(cat);
    return t.sum(t.sigmoid(soft));
  });
}

TEST_CASE("backward requires a scalar loss; constants get no gradient") {
  Tape<double> tape;
  auto p = tape.param(Tensor<double>::matrix(2, 2, {1, 2, 3, 4}), "p");
  auto c = tape.constant(Tensor<double>::matrix(2, 2, {1, 1, 1, 1}));
  auto prod = tape.matmul(p, c);
  CHECK_THROWS_WITH_AS(tape.backward(prod), doctest::Contains("NotScalar"), Error);

  auto loss = tape.sum(prod);
  tape.backward(loss);
  CHECK(tape.grad(c).data == std::vector<double>{0, 0, 0, 0});
  // dW of sum(W*C) = broadcast of row sums of C
  CHECK(tape.grad(p).data == std::vector<double>{2, 2, 2, 2});
}

TEST_CASE("parameters not on the loss path get zero gradient") {
  Tape<double> tape;
  auto used = tape.param(Tensor<double>::scalar(2.0), "used");
  auto unused = tape.param(Tensor<double>::matrix(2, 2, {1, 2, 3, 4}), "unused");
  auto loss = tape.sum(tape.scale(used, 3.0));
  tape.backward(loss);
  CHECK(tape.grad(used).data[0] == doctest::Approx(3.0));
  CHECK(tape.grad(unused).data == std::vector<double>{0, 0, 0, 0});
}

TEST_CASE("determinism: identical inputs give bit-identical outputs") {
  auto run = [] {
    Rng rng(99);
    Tape<float> tape;
    auto x = tape.param(random_tensor(rng, 6, 6).cast<float>(), "x");
    auto y = tape.softmax_rows(tape.matmul(x, x));
    auto loss = tape.sum(y);
    tape.backward(loss);
    return std::make_pair(tape.value(y).data, tape.grad(x).data);
  };
  const auto a = run();
  const auto b = run();
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("adam: zero gradient leaves params unchanged; first step is -lr*sign(g)") {
  Tensor<float> w = Tensor<float>::matrix(1, 3, {1.0f, -2.0f, 3.0f});
  Tensor<float> g0 = Tensor<float>::zeros({1, 3});
  auto state = ad::AdamState<float>::init({&w});
  std::vector<Tensor<float>*> params{&w};
  ad::adam_step(params, {&g0}, state);
  CHECK(w.data == std::vector<float>{1.0f, -2.0f, 3.0f});

  Tensor<float> g1 = Tensor<float>::matrix(1, 3, {0.5f, -0.25f, 100.0f});
  auto state2 = ad::AdamState<float>::init({&w});
  ad::adam_step(params, {&g1}, state2, {});
  CHECK(w.data[0] == doctest::Approx(1.0f - 1e-3).epsilon(1e-4));
  CHECK(w.data[1] == doctest::Approx(-2.0f + 1e-3).epsilon(1e-4));
  CHECK(w.data[2] == doctest::Approx(3.0f - 1e-3).epsilon(1e-4));
}

TEST_CASE("adam: 200 steps converge on (w-3)^2") {
  Tensor<double> w = Tensor<double>::scalar(0.0);
  std::vector<Tensor<double>*> params{&w};
  auto state = ad::AdamState<double>::init({&w});
  ad::AdamConfig cfg;
  cfg.lr = 0.05;
  for (int step = 0; step < 200; ++step) {
    Tensor<double> g = Tensor<double>::scalar(2.0 * (w.data[0] - 3.0));
    ad::adam_step(params, {&g}, state, cfg);
  }
  CHECK(std::abs(w.data[0] - 3.0) < 1e-2);
}

TEST_CASE("adam shape mismatch") {
  Tensor<float> w = Tensor<float>::matrix(1, 3, {1, 2, 3});
  Tensor<float> g = Tensor<float>::matrix(1, 2, {1, 2});
  auto state = ad::AdamState<float>::init({&w});
  std::vector<Tensor<float>*> params{&w};
  CHECK_THROWS_WITH_AS(ad::adam_step(params, {&g}, state), doctest::Contains("ShapeMismatch"),
                       Error);
}

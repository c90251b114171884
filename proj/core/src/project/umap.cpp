#include "rxnemb/project/umap.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rxnemb/common/error.hpp"
#include "rxnemb/common/parallel.hpp"
#include "rxnemb/common/rng.hpp"

namespace rxnemb::project {

KnnGraph knn_graph(const EmbeddingMatrix& embs, int k) {
  const int n = embs.count;
  if (k < 1 || k >= n) {
    throw Error(ErrorCode::KTooLarge, "knn_graph needs 1 <= k < n");
  }
  KnnGraph out;
  out.n = n;
  out.k = k;
  out.neighbors.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(k), -1);
  out.distances.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(k), 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    std::vector<std::pair<double, int>> cand;
    cand.reserve(static_cast<std::size_t>(n - 1));
    const float* a = embs.row(static_cast<int>(i));
    for (int j = 0; j < n; ++j) {
      if (j == static_cast<int>(i)) continue;
      const float* b = embs.row(j);
      double acc = 0.0;
      for (int d = 0; d < embs.dim; ++d) {
        const double diff = static_cast<double>(a[d]) - static_cast<double>(b[d]);
        acc += diff * diff;
      }
      cand.emplace_back(std::sqrt(acc), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int j = 0; j < k; ++j) {
      out.neighbors[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)] = cand[static_cast<std::size_t>(j)].second;
      out.distances[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)] = cand[static_cast<std::size_t>(j)].first;
    }
  });
  return out;
}

namespace {

double membership_sum(const KnnGraph& knn, int i, double rho, double sigma) {
  double sum = 0.0;
  for (int j = 0; j < knn.k; ++j) {
    const double d = knn.distance(i, j) - rho;
    sum += d <= 0.0 ? 1.0 : std::exp(-d / sigma);
  }
  return sum;
}

}  // namespace

SmoothKnn smooth_knn(const KnnGraph& knn) {
  constexpr double kSigmaLo = 1e-6;
  constexpr double kSigmaHi = 1e6;
  const double target = std::log2(static_cast<double>(knn.k));
  SmoothKnn out;
  out.rho.assign(static_cast<std::size_t>(knn.n), 0.0);
  out.sigma.assign(static_cast<std::size_t>(knn.n), 0.0);
  for (int i = 0; i < knn.n; ++i) {
    const double rho = knn.distance(i, 0);
    out.rho[static_cast<std::size_t>(i)] = rho;
    // All-equal neighbor distances make the sum constant k; clamp to the
    // bracket max rather than chasing an unreachable target.
    if (knn.distance(i, knn.k - 1) - rho <= 0.0) {
      out.sigma[static_cast<std::size_t>(i)] = kSigmaHi;
      continue;
    }
    double lo = kSigmaLo, hi = kSigmaHi;
    for (int iter = 0; iter < 64; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (membership_sum(knn, i, rho, mid) > target) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.sigma[static_cast<std::size_t>(i)] = 0.5 * (lo + hi);
  }
  return out;
}

double smooth_knn_residual(const KnnGraph& knn, const SmoothKnn& calib, int point) {
  const double target = std::log2(static_cast<double>(knn.k));
  return membership_sum(knn, point, calib.rho[static_cast<std::size_t>(point)],
                        calib.sigma[static_cast<std::size_t>(point)]) -
         target;
}

FuzzyGraph fuzzy_graph(const KnnGraph& knn, const SmoothKnn& calib) {
  std::map<std::pair<int, int>, std::pair<double, double>> directed;  // (a,b) -> (a->b, b->a)
  for (int i = 0; i < knn.n; ++i) {
    for (int j = 0; j < knn.k; ++j) {
      const int nb = knn.neighbor(i, j);
      const double d = knn.distance(i, j) - calib.rho[static_cast<std::size_t>(i)];
      const double w = d <= 0.0 ? 1.0 : std::exp(-d / calib.sigma[static_cast<std::size_t>(i)]);
      const bool forward = i < nb;
      const auto key = forward ? std::make_pair(i, nb) : std::make_pair(nb, i);
      auto& entry = directed[key];
      (forward ? entry.first : entry.second) = w;
    }
  }
  FuzzyGraph out;
  out.n = knn.n;
  out.edges.reserve(directed.size());
  for (const auto& [key, w] : directed) {
    const double u = w.first + w.second - w.first * w.second;  // fuzzy union
    out.edges.push_back({key.first, key.second, u});
  }
  return out;
}

CurveFit fit_ab(double min_dist) {
  if (min_dist <= 0.0 || min_dist >= 2.0) {
    throw Error(ErrorCode::ConfigError, "min_dist must be in (0, 2)");
  }
  constexpr int kSamples = 300;
  std::vector<double> xs(kSamples), ys(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const double x = 3.0 * static_cast<double>(i) / static_cast<double>(kSamples - 1);
    xs[static_cast<std::size_t>(i)] = x;
    ys[static_cast<std::size_t>(i)] = x <= min_dist ? 1.0 : std::exp(-(x - min_dist));
  }
  double a = 1.0, b = 1.0;
  for (int iter = 0; iter < 100; ++iter) {
    double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, jtr0 = 0.0, jtr1 = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double x = xs[static_cast<std::size_t>(i)];
      const double u = x > 0.0 ? std::pow(x, 2.0 * b) : 0.0;
      const double denom = 1.0 + a * u;
      const double f = 1.0 / denom;
      const double r = ys[static_cast<std::size_t>(i)] - f;
      const double da = -u / (denom * denom);
      const double db = x > 0.0 ? -2.0 * a * u * std::log(x) / (denom * denom) : 0.0;
      jtj00 += da * da;
      jtj01 += da * db;
      jtj11 += db * db;
      jtr0 += da * r;
      jtr1 += db * r;
    }
    const double det = jtj00 * jtj11 - jtj01 * jtj01;
    if (std::abs(det) < 1e-18) break;
    const double step_a = (jtj11 * jtr0 - jtj01 * jtr1) / det;
    const double step_b = (jtj00 * jtr1 - jtj01 * jtr0) / det;
    a = std::max(1e-6, a + step_a);
    b = std::max(1e-6, b + step_b);
  }
  double sq = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double x = xs[static_cast<std::size_t>(i)];
    const double u = x > 0.0 ? std::pow(x, 2.0 * b) : 0.0;
    const double r = ys[static_cast<std::size_t>(i)] - 1.0 / (1.0 + a * u);
    sq += r * r;
  }
  CurveFit fit;
  fit.a = a;
  fit.b = b;
  fit.rms = std::sqrt(sq / kSamples);
  if (!(fit.rms < 0.05)) {
    throw Error(ErrorCode::NonConvergence,
                "curve fit residual RMS " + std::to_string(fit.rms));
  }
  return fit;
}

Layout layout_sgd(const FuzzyGraph& graph, const CurveFit& curve, const LayoutParams& params) {
  Layout layout;
  layout.n = graph.n;
  layout.xy.assign(static_cast<std::size_t>(graph.n) * 2, 0.0f);
  Rng rng(params.seed);
  for (float& c : layout.xy) c = static_cast<float>(10.0 * rng.gaussian());

  const double a = curve.a, b = curve.b;
  auto clip4 = [](double v) { return std::clamp(v, -4.0, 4.0); };

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const double alpha =
        params.learning_rate * (1.0 - static_cast<double>(epoch) / static_cast<double>(params.epochs));
    for (const FuzzyGraph::Edge& edge : graph.edges) {
      float* yi = layout.xy.data() + static_cast<std::size_t>(2 * edge.a);
      float* yj = layout.xy.data() + static_cast<std::size_t>(2 * edge.b);
      const double dx = static_cast<double>(yi[0]) - yj[0];
      const double dy = static_cast<double>(yi[1]) - yj[1];
      const double d2 = dx * dx + dy * dy;
      if (d2 > 0.0) {
        // d/d(y_i) of log(1/(1 + a d^{2b})) with d^2 the squared distance
        const double coef = -2.0 * a * b * std::pow(d2, b - 1.0) / (1.0 + a * std::pow(d2, b));
        const double gx = clip4(coef * dx) * alpha;
        const double gy = clip4(coef * dy) * alpha;
        yi[0] = static_cast<float>(yi[0] + gx);
        yi[1] = static_cast<float>(yi[1] + gy);
        yj[0] = static_cast<float>(yj[0] - gx);
        yj[1] = static_cast<float>(yj[1] - gy);
      }
      for (int s = 0; s < params.negative_samples; ++s) {
        const int t = rng.index(graph.n);
        if (t == edge.a) continue;
        float* yt = layout.xy.data() + static_cast<std::size_t>(2 * t);
        const double rx = static_cast<double>(yi[0]) - yt[0];
        const double ry = static_cast<double>(yi[1]) - yt[1];
        const double r2 = rx * rx + ry * ry;
        const double coef =
            2.0 * b / ((0.001 + r2) * (1.0 + a * std::pow(r2, b)));
        yi[0] = static_cast<float>(yi[0] + clip4(coef * rx) * alpha);
        yi[1] = static_cast<float>(yi[1] + clip4(coef * ry) * alpha);
      }
    }
  }
  for (float c : layout.xy) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::NonConvergence, "layout produced a non-finite coordinate");
    }
  }
  return layout;
}

EmbeddingMatrix standardize(const EmbeddingMatrix& embs) {
  EmbeddingMatrix out = embs;
  for (int d = 0; d < embs.dim; ++d) {
    double mean = 0.0;
    for (int i = 0; i < embs.count; ++i) mean += embs.row(i)[d];
    mean /= std::max(1, embs.count);
    double var = 0.0;
    for (int i = 0; i < embs.count; ++i) {
      const double diff = embs.row(i)[d] - mean;
      var += diff * diff;
    }
    var /= std::max(1, embs.count);
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
    for (int i = 0; i < embs.count; ++i) {
      out.values[static_cast<std::size_t>(i) * static_cast<std::size_t>(embs.dim) +
                 static_cast<std::size_t>(d)] =
          static_cast<float>((embs.row(i)[d] - mean) * scale);
    }
  }
  return out;
}

Layout project_embeddings(const EmbeddingMatrix& embs, const LayoutParams& params) {
  if (embs.count < params.n_neighbors + 1) {
    throw Error(ErrorCode::KTooLarge, "need at least n_neighbors+1 points to project");
  }
  const EmbeddingMatrix prepared = params.standardize ? standardize(embs) : embs;
  const KnnGraph knn = knn_graph(prepared, params.n_neighbors);
  const SmoothKnn calib = smooth_knn(knn);
  const FuzzyGraph graph = fuzzy_graph(knn, calib);
  const CurveFit curve = fit_ab(params.min_dist);
  return layout_sgd(graph, curve, params);
}

}  // namespace rxnemb::project

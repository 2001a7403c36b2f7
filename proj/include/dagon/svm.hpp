#pragma once

// Binary linear SVM (L2-regularized hinge loss, no bias term) trained by dual
// coordinate descent, plus a one-parameter sigmoid calibration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dagon/error.hpp"

namespace dagon {

struct SparseVector {
  std::vector<std::uint32_t> index;  // strictly increasing
  std::vector<double> value;

  bool empty() const { return index.empty(); }
  std::size_t size() const { return index.size(); }

  double dot(std::span<const double> w) const {
    double s = 0.0;
    for (std::size_t k = 0; k < index.size(); ++k) {
      if (index[k] < w.size()) s += w[index[k]] * value[k];
    }
    return s;
  }

  double squared_norm() const {
    double s = 0.0;
    for (double v : value) s += v * v;
    return s;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

struct SvmParams {
  // Objective: 0.5 |w|^2 + C * sum_i v_i * hinge_i, where the example weights
  // v_i average to 1 and give every class, and every group inside a class, the
  // same total weight.
  double C = 1.0;
  std::size_t max_epochs = 1000;
  double tolerance = 1e-3;  // projected-gradient gap
  std::uint64_t seed = 1;
};

namespace detail {

// Fisher-Yates with an explicit generator so the permutation is identical
// across standard library implementations.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace detail

// Per-example loss weights. `groups` may be empty (one group per class);
// otherwise groups[i] identifies the group of example i, and a group id must
// not be shared across classes.
inline std::vector<double> group_loss_weights(std::span<const int> ys, std::span<const std::size_t> groups) {
  if (!groups.empty() && groups.size() != ys.size()) throw Error("group/label count mismatch");
  std::map<std::pair<int, std::size_t>, std::size_t> group_size;
  for (std::size_t i = 0; i < ys.size(); ++i) ++group_size[{ys[i] > 0 ? 1 : -1, groups.empty() ? 0 : groups[i]}];
  std::map<int, std::size_t> groups_in_class;
  for (const auto& [key, size] : group_size) ++groups_in_class[key.first];
  const double n = static_cast<double>(ys.size());
  const double classes = static_cast<double>(groups_in_class.size());
  std::vector<double> weights(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const int y = ys[i] > 0 ? 1 : -1;
    const auto size = group_size.at({y, groups.empty() ? 0 : groups[i]});
    weights[i] = n / (classes * static_cast<double>(groups_in_class.at(y)) * static_cast<double>(size));
  }
  return weights;
}

// labels: +1 / -1. Returns a weight vector of length `dim`.
inline std::vector<double> train_linear_svm(std::span<const SparseVector> xs, std::span<const int> ys, std::size_t dim,
                                            const SvmParams& params, std::span<const std::size_t> groups = {}) {
  if (xs.size() != ys.size()) throw Error("feature/label count mismatch");
  std::size_t npos = 0, nneg = 0;
  for (int y : ys) (y > 0 ? npos : nneg)++;
  if (npos == 0 || nneg == 0) throw ConfigError("both classes need at least one training example");

  const std::size_t n = xs.size();
  const auto loss_weight = group_loss_weights(ys, groups);
  std::vector<double> w(dim, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qii(n), upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    qii[i] = xs[i].squared_norm();
    upper[i] = params.C * loss_weight[i];
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(params.seed);

  for (std::size_t epoch = 0; epoch < params.max_epochs; ++epoch) {
    detail::deterministic_shuffle(order, rng);
    double pg_max = -INFINITY, pg_min = INFINITY;
    for (std::size_t i : order) {
      if (qii[i] <= 0.0) continue;
      const double y = ys[i] > 0 ? 1.0 : -1.0;
      const double g = y * xs[i].dot(w) - 1.0;
      double pg = g;
      if (alpha[i] <= 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[i] >= upper[i]) {
        pg = std::max(g, 0.0);
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / qii[i], 0.0, upper[i]);
      const double delta = (alpha[i] - old) * y;
      if (delta == 0.0) continue;
      const auto& x = xs[i];
      for (std::size_t k = 0; k < x.index.size(); ++k) w[x.index[k]] += delta * x.value[k];
    }
    if (pg_max - pg_min < params.tolerance) break;
  }
  return w;
}

inline double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// Fits P(y=+1 | s) = sigmoid(a * s) on held-out margins with Platt's smoothed
// targets. No intercept: a margin of zero always maps to 0.5.
inline double fit_sigmoid_slope(std::span<const double> margins, std::span<const int> ys) {
  std::size_t npos = 0, nneg = 0;
  for (int y : ys) (y > 0 ? npos : nneg)++;
  const double hi = (static_cast<double>(npos) + 1.0) / (static_cast<double>(npos) + 2.0);
  const double lo = 1.0 / (static_cast<double>(nneg) + 2.0);
  auto target = [&](std::size_t i) { return ys[i] > 0 ? hi : lo; };
  auto loss = [&](double a) {
    double f = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
      // log(1 + exp(-z)) + (1 - t) z, written to avoid overflow
      const double z = a * margins[i];
      const double softplus = z >= 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
      f += softplus + (1.0 - target(i)) * z;
    }
    return f;
  };
  double a = 0.0;
  double f = loss(a);
  for (int iter = 0; iter < 100; ++iter) {
    double grad = 0.0, hess = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
      const double p = sigmoid(a * margins[i]);
      grad += (p - target(i)) * margins[i];
      hess += p * (1.0 - p) * margins[i] * margins[i];
    }
    if (hess <= 1e-300 || std::abs(grad) <= 1e-12) break;
    double step = grad / hess;
    double next = a - step;
    double fn = loss(next);
    while (fn > f && std::abs(step) > 1e-14) {
      step *= 0.5;
      next = a - step;
      fn = loss(next);
    }
    if (fn > f) break;
    const bool converged = std::abs(step) <= 1e-12 * std::max(1.0, std::abs(a));
    a = next;
    f = fn;
    if (converged) break;
  }
  return a;
}

}  // namespace dagon

#include "reprometa/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reprometa {

MinimizeResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                           std::span<const double> init, const OptimizerConfig& cfg) {
  const std::size_t dim = init.size();
  const int max_evals = std::max(static_cast<int>(dim) + 2,
                                 cfg.max_evals_per_dim * static_cast<int>(dim));

  MinimizeResult result;
  result.argmin.assign(init.begin(), init.end());

  // Every probe goes through here so the best-ever point is never lost.
  auto probe = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++result.evaluations;
    if (v < result.value) {
      result.value = v;
      result.argmin = x;
    }
    return v;
  };

  std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(init.begin(), init.end()));
  std::vector<double> values(dim + 1);
  for (std::size_t j = 1; j <= dim; ++j) simplex[j][j - 1] += cfg.initial_step;
  for (std::size_t j = 0; j <= dim; ++j) values[j] = probe(simplex[j]);

  std::vector<std::size_t> rank(dim + 1);
  std::vector<double> centroid(dim), candidate(dim);

  while (true) {
    if (result.value <= cfg.target_value) {
      result.converged = true;
      return result;
    }

    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = rank.front();
    const std::size_t worst = rank.back();
    const std::size_t second_worst = rank[dim > 0 ? dim - 1 : 0];

    if (values[worst] - values[best] <= cfg.spread_tolerance) {
      result.converged = true;
      return result;
    }
    if (result.evaluations >= max_evals) {
      return result;  // budget exhausted, converged stays false
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t j = 0; j <= dim; ++j) {
      if (j == worst) continue;
      for (std::size_t c = 0; c < dim; ++c) centroid[c] += simplex[j][c];
    }
    for (std::size_t c = 0; c < dim; ++c) centroid[c] /= static_cast<double>(dim);

    auto move_from_worst = [&](double coef) {
      for (std::size_t c = 0; c < dim; ++c) {
        candidate[c] = centroid[c] + coef * (centroid[c] - simplex[worst][c]);
      }
    };

    move_from_worst(cfg.reflection);
    const double reflected = probe(candidate);

    if (reflected < values[best]) {
      move_from_worst(cfg.reflection * cfg.expansion);
      const double expanded = probe(candidate);
      if (expanded < reflected) {
        simplex[worst] = candidate;
        values[worst] = expanded;
      } else {
        move_from_worst(cfg.reflection);
        simplex[worst] = candidate;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = candidate;
      values[worst] = reflected;
      continue;
    }

    if (reflected < values[worst]) {
      // Outside contraction.
      move_from_worst(cfg.reflection * cfg.contraction);
      const double contracted = probe(candidate);
      if (contracted <= reflected) {
        simplex[worst] = candidate;
        values[worst] = contracted;
        continue;
      }
    } else {
      // Inside contraction.
      move_from_worst(-cfg.contraction);
      const double contracted = probe(candidate);
      if (contracted < values[worst]) {
        simplex[worst] = candidate;
        values[worst] = contracted;
        continue;
      }
    }

    // Shrink toward the best vertex.
    for (std::size_t j = 0; j <= dim; ++j) {
      if (j == best) continue;
      for (std::size_t c = 0; c < dim; ++c) {
        simplex[j][c] = simplex[best][c] + cfg.shrink * (simplex[j][c] - simplex[best][c]);
      }
      values[j] = probe(simplex[j]);
      if (result.value <= cfg.target_value || result.evaluations >= max_evals) break;
    }
  }
}

}  // namespace reprometa

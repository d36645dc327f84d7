// witness.hpp
// Numerical search over all isometries realizable with a given ancilla
// dimension: V(p) psi = exp(iH(p)) (psi (x) |0>_B), with H Hermitian and
// parameterized by d^2 reals. Minimizing the verifier objective J over p
// either finds a masker (J -> 0) or bottoms out at a strictly positive
// floor, which is the whole point of the witness.

#pragma once

#include "qmask/linalg.hpp"
#include "qmask/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace qmask {

struct search_config {
  int restarts = 20;
  int max_iters = 4000;  // simplex iterations per restart
  double tol = 1e-13;    // J-improvement threshold for convergence
  std::uint64_t seed;
  Eigen::Index d_b = 2;

  search_config(int restarts_, int max_iters_, double tol_, std::uint64_t seed_,
                Eigen::Index d_b_)
      : restarts(restarts_), max_iters(max_iters_), tol(tol_), seed(seed_), d_b(d_b_) {
    if (restarts < 1) throw std::invalid_argument("search_config: restarts must be >= 1");
    if (max_iters < 1) throw std::invalid_argument("search_config: max_iters must be >= 1");
    if (tol <= 0.0) throw std::invalid_argument("search_config: tol must be positive");
    if (d_b != 2 && d_b != 4) throw std::invalid_argument("search_config: d_b must be 2 or 4");
  }
};

struct witness_report {
  double best_j = 0.0;
  std::vector<double> best_params;
  int best_restart = 0;
  std::vector<std::vector<double>> traces;  // best-so-far J improvements, per restart
  std::vector<double> restart_best_j;
  std::string state_set_label;
  search_config config;
  double wall_ms = 0.0;
};

// Hermitian generator from d^2 reals in a fixed order: first the d diagonal
// entries, then for each (i, j) with i < j in row-major order the real and
// imaginary parts of H(i, j).
inline cmat hermitian_from_reals(const std::vector<double>& p, Eigen::Index d) {
  if (static_cast<Eigen::Index>(p.size()) != d * d) {
    throw std::invalid_argument("hermitian_from_reals: expected d^2 = " +
                                std::to_string(d * d) + " reals, got " +
                                std::to_string(p.size()));
  }
  cmat h(d, d);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    h(i, i) = p[k++];
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const cxd z{p[k], p[k + 1]};
      k += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

// exp(iH) (psi (x) |0>_B) as an explicit isometry matrix: the unitary is
// built through the Hermitian eigendecomposition of H, then restricted to
// the columns that embed H_A (x) |0>_B.
inline isometry isometry_from_params(const std::vector<double>& p,
                                     const system_dims& dims) {
  const Eigen::Index d = dims.joint();
  const cmat h = hermitian_from_reals(p, d);
  Eigen::SelfAdjointEigenSolver<cmat> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("isometry_from_params: eigendecomposition failed");
  }
  cvec phases(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    phases(i) = std::polar(1.0, es.eigenvalues()(i));
  }
  const cmat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  cmat v(d, dims.d_a);
  for (Eigen::Index i = 0; i < dims.d_a; ++i) {
    v.col(i) = u.col(i * dims.d_b);
  }
  return {std::move(v), dims};
}

inline double objective(const std::vector<double>& p, const state_set& s,
                        const system_dims& dims) {
  return violation(isometry_from_params(p, dims), s);
}

namespace detail {

// Uniform double in [0, 1) built from the top 53 bits of the generator, so
// streams do not depend on the standard library's distribution internals.
inline double uniform01(std::mt19937_64& rng) {
  return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

inline double uniform_symmetric(std::mt19937_64& rng, double half_range) {
  return (2.0 * uniform01(rng) - 1.0) * half_range;
}

// One Nelder-Mead run with the dimension-adaptive coefficients
//   reflect 1, expand 1 + 2/n, contract 0.75 - 1/(2n), shrink 1 - 1/n,
// starting from a right-angled simplex of the given edge step at x0.
// Terminates when the simplex J-spread drops below tol or the iteration
// budget runs out. Appends every improvement of the best J to trace.
template <typename F>
std::pair<std::vector<double>, double> nelder_mead(
    F&& f, std::vector<double> x0, double step, double tol, int max_iters,
    int& iters_used, std::vector<double>& trace) {
  const std::size_t n = x0.size();
  const double coef_reflect = 1.0;
  const double coef_expand = 1.0 + 2.0 / static_cast<double>(n);
  const double coef_contract = 0.75 - 0.5 / static_cast<double>(n);
  const double coef_shrink = 1.0 - 1.0 / static_cast<double>(n);

  std::vector<std::vector<double>> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (std::size_t i = 1; i <= n; ++i) xs[i][i - 1] += step;
  for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  std::vector<std::size_t> order(n + 1);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto reorder = [&] {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
  };
  reorder();
  double best_seen = fs[order[0]];
  trace.push_back(best_seen);

  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    const std::size_t ibest = order[0];
    const std::size_t iworst = order[n];
    const std::size_t isecond = order[n - 1];
    if (fs[iworst] - fs[ibest] <= tol) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == iworst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += xs[i][k];
    }
    for (std::size_t k = 0; k < n; ++k) centroid[k] /= static_cast<double>(n);

    for (std::size_t k = 0; k < n; ++k) {
      xr[k] = centroid[k] + coef_reflect * (centroid[k] - xs[iworst][k]);
    }
    const double fr = f(xr);

    if (fr < fs[ibest]) {
      for (std::size_t k = 0; k < n; ++k) {
        xe[k] = centroid[k] + coef_expand * (xr[k] - centroid[k]);
      }
      const double fe = f(xe);
      if (fe < fr) {
        xs[iworst] = xe;
        fs[iworst] = fe;
      } else {
        xs[iworst] = xr;
        fs[iworst] = fr;
      }
    } else if (fr < fs[isecond]) {
      xs[iworst] = xr;
      fs[iworst] = fr;
    } else {
      const bool outside = fr < fs[iworst];
      if (outside) {
        for (std::size_t k = 0; k < n; ++k) {
          xc[k] = centroid[k] + coef_contract * (xr[k] - centroid[k]);
        }
      } else {
        for (std::size_t k = 0; k < n; ++k) {
          xc[k] = centroid[k] - coef_contract * (centroid[k] - xs[iworst][k]);
        }
      }
      const double fc = f(xc);
      if (fc < (outside ? fr : fs[iworst])) {
        xs[iworst] = xc;
        fs[iworst] = fc;
      } else {
        const std::size_t ib = order[0];
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == ib) continue;
          for (std::size_t k = 0; k < n; ++k) {
            xs[i][k] = xs[ib][k] + coef_shrink * (xs[i][k] - xs[ib][k]);
          }
          fs[i] = f(xs[i]);
        }
      }
    }
    reorder();
    if (fs[order[0]] < best_seen) {
      best_seen = fs[order[0]];
      trace.push_back(best_seen);
    }
  }
  iters_used = iter;
  return {xs[order[0]], fs[order[0]]};
}

struct restart_result {
  std::vector<double> best_x;
  double best_j = 0.0;
  std::vector<double> trace;
};

// One restart: a seeded random start in [-pi, pi]^{d^2}, then simplex
// descent in rounds, each round rebuilding the simplex at the incumbent
// with a 4x smaller edge. Rounds stop when one fails to improve J by more
// than tol or the per-restart iteration budget is spent.
inline restart_result run_restart(const state_set& s, const system_dims& dims,
                                  const search_config& cfg, int restart_index) {
  const Eigen::Index d = dims.joint();
  const std::size_t nparams = static_cast<std::size_t>(d * d);
  std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(restart_index));

  std::vector<double> x(nparams);
  for (auto& xi : x) xi = uniform_symmetric(rng, std::numbers::pi);

  auto f = [&](const std::vector<double>& p) { return objective(p, s, dims); };

  restart_result result;
  double best_j = f(x);
  result.trace.push_back(best_j);
  std::vector<double> best_x = x;

  int budget = cfg.max_iters;
  double step = 0.8;
  while (budget > 0) {
    int used = 0;
    std::vector<double> round_trace;
    auto [rx, rj] = nelder_mead(f, best_x, step, cfg.tol, budget, used, round_trace);
    budget -= std::max(used, 1);
    const double improvement = best_j - rj;
    if (rj < best_j) {
      best_j = rj;
      best_x = std::move(rx);
      for (double t : round_trace) {
        if (t < result.trace.back()) result.trace.push_back(t);
      }
    }
    if (improvement <= cfg.tol) break;
    step *= 0.25;
  }

  result.best_x = std::move(best_x);
  result.best_j = best_j;
  return result;
}

}  // namespace detail

// Global minimum of J over `restarts` independent seeded local searches.
// Restart r derives its generator from seed + r, so the report does not
// depend on how the restarts are scheduled; ties on J resolve to the lowest
// restart index. threads = 0 picks the hardware concurrency.
inline witness_report minimize(const state_set& s, const search_config& cfg,
                               unsigned threads = 0) {
  const system_dims dims{s.dim(), cfg.d_b};
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<detail::restart_result> results(static_cast<std::size_t>(cfg.restarts));
  unsigned nthreads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(cfg.restarts));

  if (nthreads <= 1) {
    for (int r = 0; r < cfg.restarts; ++r) {
      results[static_cast<std::size_t>(r)] = detail::run_restart(s, dims, cfg, r);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < cfg.restarts; r = next.fetch_add(1)) {
          results[static_cast<std::size_t>(r)] = detail::run_restart(s, dims, cfg, r);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  witness_report report{.best_j = results[0].best_j,
                        .best_params = results[0].best_x,
                        .best_restart = 0,
                        .traces = {},
                        .restart_best_j = {},
                        .state_set_label = s.label,
                        .config = cfg,
                        .wall_ms = 0.0};
  for (int r = 0; r < cfg.restarts; ++r) {
    const auto& res = results[static_cast<std::size_t>(r)];
    report.traces.push_back(res.trace);
    report.restart_best_j.push_back(res.best_j);
    if (res.best_j < report.best_j) {
      report.best_j = res.best_j;
      report.best_params = res.best_x;
      report.best_restart = r;
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return report;
}

// One report per ancilla dimension, same seed policy throughout.
inline std::vector<witness_report> sweep(const state_set& s,
                                         const std::vector<Eigen::Index>& d_bs,
                                         const search_config& cfg,
                                         unsigned threads = 0) {
  std::vector<witness_report> reports;
  reports.reserve(d_bs.size());
  for (const auto db : d_bs) {
    const search_config c{cfg.restarts, cfg.max_iters, cfg.tol, cfg.seed, db};
    reports.push_back(minimize(s, c, threads));
  }
  return reports;
}

}  // namespace qmask

// verifier.hpp
// The masking criterion, made numerical: a candidate masker is an isometry
// V from H_A into H_A (x) H_B, and it masks a finite state set when every
// marginal of every image state is independent of which state went in.

#pragma once

#include "qmask/linalg.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace qmask {

// V with orthonormal columns, shape (d_a*d_b) x d_a.
struct isometry {
  cmat matrix;
  system_dims dims;

  isometry(cmat v, system_dims d) : matrix(std::move(v)), dims(d) {
    if (matrix.rows() != dims.joint() || matrix.cols() != dims.d_a) {
      throw std::invalid_argument("isometry: matrix shape does not match dims");
    }
    cmat gram = matrix.adjoint() * matrix;
    gram -= cmat::Identity(dims.d_a, dims.d_a);
    if (gram.cwiseAbs().maxCoeff() > 1e-9) {
      throw std::invalid_argument("isometry: columns are not orthonormal (V†V != I)");
    }
  }
};

struct state_set {
  std::vector<cvec> states;
  std::string label;

  state_set(std::vector<cvec> s, std::string lbl = {})
      : states(std::move(s)), label(std::move(lbl)) {
    if (states.empty()) {
      throw std::invalid_argument("state_set: needs at least one state");
    }
    const Eigen::Index dim = states.front().size();
    for (const auto& st : states) {
      if (st.size() != dim) {
        throw std::invalid_argument("state_set: states must share one dimension");
      }
      if (!is_normalized(st)) {
        throw std::invalid_argument("state_set: states must be normalized");
      }
    }
  }

  std::size_t size() const { return states.size(); }
  Eigen::Index dim() const { return states.front().size(); }
};

inline cvec apply_masker(const isometry& v, const cvec& psi) {
  if (psi.size() != v.dims.d_a) {
    throw std::invalid_argument("apply_masker: state dimension does not match d_a");
  }
  return v.matrix * psi;
}

namespace detail {

inline std::vector<std::pair<cmat, cmat>> marginals_of(const isometry& v,
                                                       const state_set& s) {
  std::vector<std::pair<cmat, cmat>> out;
  out.reserve(s.size());
  for (const auto& psi : s.states) {
    const cmat rho = density_of(apply_masker(v, psi));
    out.emplace_back(partial_trace(rho, subsystem::a, v.dims),
                     partial_trace(rho, subsystem::b, v.dims));
  }
  return out;
}

}  // namespace detail

// Summed pairwise marginal distinguishability
//   J(V,S) = sum_{j<k} [ D(rho_A^j, rho_A^k)^2 + D(rho_B^j, rho_B^k)^2 ].
// Zero exactly when all marginals coincide on both sides; squared distances
// keep it smooth near zero for the optimizer.
inline double violation(const isometry& v, const state_set& s) {
  const auto margs = detail::marginals_of(v, s);
  double j = 0.0;
  for (std::size_t a = 0; a + 1 < margs.size(); ++a) {
    for (std::size_t b = a + 1; b < margs.size(); ++b) {
      const double da = trace_distance(margs[a].first, margs[b].first);
      const double db = trace_distance(margs[a].second, margs[b].second);
      j += da * da + db * db;
    }
  }
  return j;
}

struct masker_report {
  bool masks = true;
  double worst_distance = 0.0;
  std::size_t worst_j = 0;
  std::size_t worst_k = 0;
  subsystem worst_side = subsystem::a;
};

// True iff the max pairwise marginal trace distance over both subsystems
// stays within eps; the report names the worst pair and side.
inline masker_report is_masker(const isometry& v, const state_set& s,
                               double eps = 1e-9) {
  if (eps <= 0.0) {
    throw std::invalid_argument("is_masker: eps must be positive");
  }
  const auto margs = detail::marginals_of(v, s);
  masker_report report;
  for (std::size_t a = 0; a + 1 < margs.size(); ++a) {
    for (std::size_t b = a + 1; b < margs.size(); ++b) {
      const double da = trace_distance(margs[a].first, margs[b].first);
      if (da > report.worst_distance) {
        report.worst_distance = da;
        report.worst_j = a;
        report.worst_k = b;
        report.worst_side = subsystem::a;
      }
      const double db = trace_distance(margs[a].second, margs[b].second);
      if (db > report.worst_distance) {
        report.worst_distance = db;
        report.worst_j = a;
        report.worst_k = b;
        report.worst_side = subsystem::b;
      }
    }
  }
  report.masks = report.worst_distance <= eps;
  return report;
}

// |0> -> |00>, |1> -> |11>. For any fixed alpha the whole phase family
// cos(alpha)|0> + e^{i theta} sin(alpha)|1> maps to states whose marginals
// are diag(cos^2 alpha, sin^2 alpha) on both sides, independent of theta.
inline isometry diagonal_masker() {
  const system_dims dims{2, 2};
  cmat v = cmat::Zero(4, 2);
  v(0, 0) = 1.0;  // |00><0|
  v(3, 1) = 1.0;  // |11><1|
  return {std::move(v), dims};
}

// psi -> psi (x) |0>_B, the do-nothing masker; fails on any distinguishable
// pair since the A marginal is the input itself.
inline isometry canonical_embedding(const system_dims& dims) {
  cmat v = cmat::Zero(dims.joint(), dims.d_a);
  for (Eigen::Index i = 0; i < dims.d_a; ++i) {
    v(i * dims.d_b, i) = 1.0;
  }
  return {std::move(v), dims};
}

}  // namespace qmask

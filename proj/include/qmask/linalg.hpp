// linalg.hpp
// Exact complex linear algebra and quantum primitives for small systems:
// states, density operators, tensor products, partial trace, distances,
// Bell basis. Everything here is a pure function over immutable values.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace qmask {

using cxd = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

// Numerical tolerances for tagging values as states / operators.
inline constexpr double norm_tol = 1e-10;
inline constexpr double herm_tol = 1e-10;
inline constexpr double psd_floor = -1e-9;

// Joint Hilbert spaces are capped at 2^12; catches runaway tensor chains.
inline constexpr Eigen::Index dim_cap = 4096;

enum class subsystem { a, b };

inline const char* subsystem_name(subsystem s) {
  return s == subsystem::a ? "A" : "B";
}

// Dimensions (d_A, d_B) of a bipartite space H_A (x) H_B. Subsystem A is
// always the major (leftmost) index: joint index = a*d_b + b.
struct system_dims {
  Eigen::Index d_a;
  Eigen::Index d_b;

  system_dims(Eigen::Index da, Eigen::Index db) : d_a(da), d_b(db) {
    if (d_a < 2 || d_b < 2) {
      throw std::invalid_argument("system_dims: each factor must have dim >= 2");
    }
    if (d_a > dim_cap || d_b > dim_cap || d_a * d_b > dim_cap) {
      throw std::invalid_argument("system_dims: joint dimension exceeds cap 2^12");
    }
  }

  Eigen::Index joint() const { return d_a * d_b; }

  friend bool operator==(const system_dims&, const system_dims&) = default;
};

inline bool is_normalized(const cvec& psi, double tol = norm_tol) {
  return std::abs(psi.norm() - 1.0) <= tol;
}

inline bool is_hermitian(const cmat& m, double tol = herm_tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Density operator check: Hermitian, unit trace, no eigenvalue below -1e-9.
inline bool is_density(const cmat& m, double tol = herm_tol) {
  if (!is_hermitian(m, tol)) return false;
  if (std::abs(m.trace().real() - 1.0) > tol || std::abs(m.trace().imag()) > tol) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (m + m.adjoint()),
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= psd_floor;
}

inline bool is_unitary(const cmat& u, double tol = herm_tol) {
  if (u.rows() != u.cols()) return false;
  cmat gram = u.adjoint() * u;
  gram -= cmat::Identity(u.cols(), u.cols());
  return gram.cwiseAbs().maxCoeff() <= tol;
}

// Computational basis vector |index> in the given dimension.
inline cvec basis_state(Eigen::Index dim, Eigen::Index index) {
  if (dim < 1 || index < 0 || index >= dim) {
    throw std::invalid_argument("basis_state: index out of range");
  }
  cvec v = cvec::Zero(dim);
  v(index) = 1.0;
  return v;
}

// Kronecker product, u index major: (u (x) v)(i*dim_v + j) = u(i)*v(j).
inline cvec tensor(const cvec& u, const cvec& v) {
  if (u.size() * v.size() > dim_cap) {
    throw std::invalid_argument("tensor: joint dimension exceeds cap 2^12");
  }
  cvec out(u.size() * v.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    out.segment(i * v.size(), v.size()) = u(i) * v;
  }
  return out;
}

inline cmat tensor(const cmat& x, const cmat& y) {
  if (x.rows() * y.rows() > dim_cap || x.cols() * y.cols() > dim_cap) {
    throw std::invalid_argument("tensor: joint dimension exceeds cap 2^12");
  }
  cmat out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

// |psi><psi| of a normalized state.
inline cmat density_of(const cvec& psi) {
  if (!is_normalized(psi)) {
    throw std::invalid_argument("density_of: state is not normalized");
  }
  return psi * psi.adjoint();
}

// Marginal of a bipartite density operator. A is the major index throughout.
inline cmat partial_trace(const cmat& rho, subsystem keep, const system_dims& dims) {
  if (rho.rows() != rho.cols() || rho.rows() != dims.joint()) {
    throw std::invalid_argument("partial_trace: operator shape does not match dims");
  }
  const Eigen::Index da = dims.d_a, db = dims.d_b;
  if (keep == subsystem::a) {
    cmat out = cmat::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i) {
      for (Eigen::Index j = 0; j < da; ++j) {
        cxd acc = 0.0;
        for (Eigen::Index b = 0; b < db; ++b) {
          acc += rho(i * db + b, j * db + b);
        }
        out(i, j) = acc;
      }
    }
    return out;
  }
  cmat out = cmat::Zero(db, db);
  for (Eigen::Index a = 0; a < db; ++a) {
    for (Eigen::Index b = 0; b < db; ++b) {
      cxd acc = 0.0;
      for (Eigen::Index i = 0; i < da; ++i) {
        acc += rho(i * db + a, i * db + b);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

// (1/2) sum |eig(rho - sigma)|. The difference of two density operators is
// Hermitian; anything beyond herm_tol * 100 in the anti-Hermitian part is an
// input error, tiny parts are discarded by symmetrizing.
inline double trace_distance(const cmat& rho, const cmat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() ||
      rho.rows() != rho.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  cmat diff = rho - sigma;
  if ((diff - diff.adjoint()).cwiseAbs().maxCoeff() > 1e-8) {
    throw std::invalid_argument("trace_distance: difference is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (diff + diff.adjoint()),
                                         Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// |<psi|phi>|^2 for normalized pure states.
inline double fidelity_pure(const cvec& psi, const cvec& phi) {
  if (psi.size() != phi.size()) {
    throw std::invalid_argument("fidelity_pure: dimension mismatch");
  }
  if (!is_normalized(psi) || !is_normalized(phi)) {
    throw std::invalid_argument("fidelity_pure: states must be normalized");
  }
  double f = std::norm(psi.dot(phi));
  return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

// The Bell basis in fixed order: Phi+, Phi-, Psi+, Psi-.
inline std::array<cvec, 4> bell_states() {
  const double s = 1.0 / std::sqrt(2.0);
  cvec phi_plus(4), phi_minus(4), psi_plus(4), psi_minus(4);
  phi_plus << s, 0, 0, s;
  phi_minus << s, 0, 0, -s;
  psi_plus << 0, s, s, 0;
  psi_minus << 0, s, -s, 0;
  return {phi_plus, phi_minus, psi_plus, psi_minus};
}

// Probabilities |<Bell_i|psi>|^2 of a collective Bell-basis measurement.
inline std::array<double, 4> bell_projection(const cvec& psi) {
  if (psi.size() != 4) {
    throw std::invalid_argument("bell_projection: state must be 4-dimensional");
  }
  if (!is_normalized(psi)) {
    throw std::invalid_argument("bell_projection: state is not normalized");
  }
  const auto bell = bell_states();
  std::array<double, 4> probs{};
  for (int i = 0; i < 4; ++i) {
    probs[i] = std::norm(bell[i].dot(psi));
  }
  return probs;
}

// U * psi for a unitary-tagged U.
inline cvec apply(const cmat& u, const cvec& psi) {
  if (u.cols() != psi.size() || u.rows() != u.cols()) {
    throw std::invalid_argument("apply: dimension mismatch");
  }
  if (!is_unitary(u)) {
    throw std::invalid_argument("apply: operator is not unitary");
  }
  return u * psi;
}

inline cmat pauli_x() {
  cmat x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

inline cmat pauli_z() {
  cmat z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

}  // namespace qmask

#ifndef QDIODE_SOLVER_HPP
#define QDIODE_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdiode/liouvillian.hpp"

namespace qdiode {

inline Vec16 vec(const Mat4& m) { return Eigen::Map<const Vec16>(m.data()); }
inline Mat4 unvec(const Vec16& v) { return Eigen::Map<const Mat4>(v.data()); }

// Validity gate for a physical state: Hermitian to 1e-10, unit trace, and no
// eigenvalue below -1e-10.
inline bool is_valid_density_matrix(const Mat4& rho, double* worst = nullptr) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const double tr = std::abs(rho.trace() - complexd(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (rho + rho.adjoint()));
  const double min_eig = es.eigenvalues().minCoeff();
  if (worst) *worst = std::max(std::max(herm, tr), std::max(0.0, -min_eig));
  return herm <= 1e-10 && tr <= 1e-10 && min_eig >= -1e-10;
}

struct SteadySolution {
  Mat4 rho = Mat4::Zero();
  double residual = 0.0;   // ||S vec(rho)||_2 after Hermitization and renormalization
  int nullspace_dim = 1;
};

// Thrown when the generator has more than one stationary direction; carries
// the full null-space basis so callers can inspect the degeneracy.
struct DegenerateSteadyStateError : std::runtime_error {
  std::vector<Vec16> null_vectors;
  explicit DegenerateSteadyStateError(std::vector<Vec16> vecs)
      : std::runtime_error("degenerate steady state: null space has dimension " +
                           std::to_string(vecs.size())),
        null_vectors(std::move(vecs)) {}
};

struct InfeasibleSteadyStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stationary state from the SVD null space of the superoperator.  Singular
// values below 1e-10 times the largest count as zero; exactly one null
// direction is required, and the resulting matrix is Hermitized and scaled to
// unit trace before the residual is measured.
inline SteadySolution steady_state(const Generator& gen) {
  Eigen::JacobiSVD<Mat16> svd(gen.superoperator, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * sv(0);
  int dim = 0;
  for (int i = 0; i < 16; ++i)
    if (sv(i) <= cutoff) ++dim;
  if (dim == 0)
    throw InfeasibleSteadyStateError("steady_state: superoperator has no null direction");
  if (dim > 1) {
    std::vector<Vec16> basis;
    for (int i = 16 - dim; i < 16; ++i) basis.push_back(svd.matrixV().col(i));
    throw DegenerateSteadyStateError(std::move(basis));
  }

  Mat4 rho = unvec(svd.matrixV().col(15));
  rho = 0.5 * (rho + rho.adjoint().eval());
  const complexd tr = rho.trace();
  if (std::abs(tr) < 1e-6)
    throw InfeasibleSteadyStateError("steady_state: null vector has (near) zero trace");
  rho /= tr;

  Eigen::SelfAdjointEigenSolver<Mat4> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw InfeasibleSteadyStateError("steady_state: null vector is not positive semidefinite");

  SteadySolution out;
  out.rho = rho;
  out.residual = (gen.superoperator * vec(rho)).norm();
  out.nullspace_dim = 1;
  return out;
}

inline double max_abs(const Mat16& m) { return m.cwiseAbs().maxCoeff(); }

// Step small enough that every generator entry is resolved.
inline double default_time_step(const Generator& gen) {
  const double scale = max_abs(gen.superoperator);
  if (scale == 0.0) throw std::invalid_argument("default_time_step: zero generator");
  return 0.01 / scale;
}

// Classical RK4 with a fixed step on the vectorized equation d/dt v = S v.
// The step must satisfy dt * max|S| < 0.1 so the stiffest rate is resolved.
inline Mat4 evolve(const Generator& gen, const Mat4& rho0, double t_final, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("evolve: dt must be positive");
  if (dt * max_abs(gen.superoperator) >= 0.1)
    throw std::invalid_argument("evolve: dt too large for the fastest generator rate");
  if (t_final < 0.0) throw std::invalid_argument("evolve: negative final time");

  const Mat16& s = gen.superoperator;
  Vec16 v = vec(rho0);
  auto step = [&](double h) {
    const Vec16 k1 = s * v;
    const Vec16 k2 = s * (v + 0.5 * h * k1);
    const Vec16 k3 = s * (v + 0.5 * h * k2);
    const Vec16 k4 = s * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  double remaining = t_final;
  while (remaining > dt) {
    step(dt);
    remaining -= dt;
  }
  if (remaining > 0.0) step(remaining);
  return unvec(v);
}

inline Mat4 evolve(const Generator& gen, const Mat4& rho0, double t_final) {
  return evolve(gen, rho0, t_final, default_time_step(gen));
}

// Thermal state exp(-H/T)/Z.  Works for any Hermitian H; energies are shifted
// by the ground energy before exponentiating so large 1/T cannot overflow.
inline Mat4 gibbs(const Mat4& hamiltonian, double temperature) {
  if (temperature <= 0.0) throw std::domain_error("gibbs: temperature must be positive");
  Eigen::SelfAdjointEigenSolver<Mat4> es(hamiltonian);
  const Eigen::Vector4d energy = es.eigenvalues();
  const double floor = energy.minCoeff();
  Eigen::Vector4d weight;
  for (int i = 0; i < 4; ++i) weight(i) = std::exp(-(energy(i) - floor) / temperature);
  weight /= weight.sum();
  return es.eigenvectors() * weight.cast<complexd>().asDiagonal() * es.eigenvectors().adjoint();
}

// (1/2) ||a - b||_1 for Hermitian arguments.
inline double trace_distance(const Mat4& a, const Mat4& b) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qdiode

#endif  // QDIODE_SOLVER_HPP

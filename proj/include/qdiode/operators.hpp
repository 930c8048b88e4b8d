#ifndef QDIODE_OPERATORS_HPP
#define QDIODE_OPERATORS_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <utility>

// Two coupled qubits with an anisotropic sigma_L^z sigma_R^x interaction.
// Product basis order throughout: |++>, |+->, |-+>, |-->  (left label first,
// + is the upper sigma_z eigenstate).

namespace qdiode {

using complexd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

enum class Site { left, right };
enum class Axis { x, y, z, plus, minus };

inline Mat2 pauli(Axis axis) {
  const complexd i(0.0, 1.0);
  Mat2 m = Mat2::Zero();
  switch (axis) {
    case Axis::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Axis::y:
      m(0, 1) = -i;
      m(1, 0) = i;
      break;
    case Axis::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case Axis::plus:
      m(0, 1) = 1.0;  // |+><-|
      break;
    case Axis::minus:
      m(1, 0) = 1.0;  // |-><+|
      break;
  }
  return m;
}

inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// Lift a single-qubit operator into the two-qubit space.
inline Mat4 embed(const Mat2& op, Site site) {
  return site == Site::left ? kron(op, Mat2::Identity()) : kron(Mat2::Identity(), op);
}

struct SystemSpec {
  double omega_l = 1.0;  // left qubit splitting
  double omega_r = 1.0;  // right qubit splitting
  double g = 0.0;        // sigma_L^z sigma_R^x coupling strength
};

// H = (omega_l/2) sLz + (omega_r/2) sRz + g sLz sRx
inline Mat4 bare_hamiltonian(const SystemSpec& spec) {
  return 0.5 * spec.omega_l * embed(pauli(Axis::z), Site::left) +
         0.5 * spec.omega_r * embed(pauli(Axis::z), Site::right) +
         spec.g * embed(pauli(Axis::z), Site::left) * embed(pauli(Axis::x), Site::right);
}

// tan(theta) = 2g / omega_r, wrapped into [0, 2*pi).  Undefined when both
// omega_r and g vanish (the right qubit has no Hamiltonian left to mix).
inline double mixing_angle(double omega_r, double g) {
  if (omega_r == 0.0 && g == 0.0)
    throw std::invalid_argument("mixing_angle: omega_r = g = 0, angle undefined");
  double theta = std::atan2(2.0 * g, omega_r);
  if (theta < 0.0) theta += 2.0 * std::acos(-1.0);
  return theta;
}

inline double mixing_angle(const SystemSpec& spec) { return mixing_angle(spec.omega_r, spec.g); }

// Dressed splitting of the right qubit, Omega = sqrt(omega_r^2 + 4 g^2).
inline double dressed_splitting(double omega_r, double g) { return std::hypot(omega_r, 2.0 * g); }

inline double dressed_splitting(const SystemSpec& spec) {
  return dressed_splitting(spec.omega_r, spec.g);
}

// U = exp(+i (theta/2) sLz sRy) = cos(theta/2) I + i sin(theta/2) sLz sRy.
// Rotates the bare product basis into the eigenbasis: U H U^dag is diagonal.
inline Mat4 dressing_unitary(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Mat4 u = Mat4::Zero();
  u(0, 0) = c;
  u(0, 1) = s;
  u(1, 0) = -s;
  u(1, 1) = c;
  u(2, 2) = c;
  u(2, 3) = -s;
  u(3, 2) = s;
  u(3, 3) = c;
  return u;
}

// Diagonal form of H in the dressed basis |1>..|4>:
// diag((wL+Om)/2, (wL-Om)/2, (-wL+Om)/2, (-wL-Om)/2).
inline Mat4 dressed_hamiltonian(const SystemSpec& spec) {
  const double om = dressed_splitting(spec);
  Mat4 h = Mat4::Zero();
  h(0, 0) = 0.5 * (spec.omega_l + om);
  h(1, 1) = 0.5 * (spec.omega_l - om);
  h(2, 2) = 0.5 * (-spec.omega_l + om);
  h(3, 3) = 0.5 * (-spec.omega_l - om);
  return h;
}

// Bare Pauli operator expressed in the dressed basis: U sigma U^dag.
// E.g. dressed_sigma(right, z, theta) = cos(theta) sRz - sin(theta) sLz sRx.
inline Mat4 dressed_sigma(Site site, Axis axis, double theta) {
  const Mat4 u = dressing_unitary(theta);
  return u * embed(pauli(axis), site) * u.adjoint();
}

// Ladder operator between dressed eigenstates, expressed in the bare product
// basis (columns of V = U^dag are the eigenstates): V sigma^{+/-} V^dag.
// Satisfies [H, ladder(site, minus, theta)] = -w ladder with w = omega_l for
// the left site and w = Omega for the right site.
inline Mat4 ladder(Site site, Axis sign, double theta) {
  if (sign != Axis::plus && sign != Axis::minus)
    throw std::invalid_argument("ladder: sign must be Axis::plus or Axis::minus");
  const Mat4 v = dressing_unitary(theta).adjoint();
  return v * embed(pauli(sign), site) * v.adjoint();
}

struct DressedFrame {
  double theta = 0.0;
  double omega_big = 0.0;                          // dressed splitting Omega
  Mat4 unitary = Mat4::Identity();                 // U: bare -> dressed
  std::array<Vec4, 4> eigenstates{};               // columns of U^dag
  std::array<double, 4> eigenvalues{};             // descending-pair order above
  std::map<std::pair<int, int>, double> transition_freqs;  // keys 13,24,14,23,12,34

  // w_ij = eigenvalue_i - eigenvalue_j, 1-based labels.
  double transition(int i, int j) const {
    return eigenvalues[static_cast<std::size_t>(i - 1)] -
           eigenvalues[static_cast<std::size_t>(j - 1)];
  }
};

inline DressedFrame eigensystem(const SystemSpec& spec) {
  DressedFrame frame;
  frame.theta = mixing_angle(spec);
  frame.omega_big = dressed_splitting(spec);
  frame.unitary = dressing_unitary(frame.theta);
  const Mat4 v = frame.unitary.adjoint();
  for (int k = 0; k < 4; ++k) frame.eigenstates[static_cast<std::size_t>(k)] = v.col(k);
  const Mat4 h = dressed_hamiltonian(spec);
  for (int k = 0; k < 4; ++k) frame.eigenvalues[static_cast<std::size_t>(k)] = h(k, k).real();
  for (auto [i, j] : {std::pair{1, 3}, {2, 4}, {1, 4}, {2, 3}, {1, 2}, {3, 4}})
    frame.transition_freqs[{i, j}] = frame.transition(i, j);
  return frame;
}

}  // namespace qdiode

#endif  // QDIODE_OPERATORS_HPP

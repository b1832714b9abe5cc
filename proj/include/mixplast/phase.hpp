#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mixplast/tensor.hpp"

namespace mixplast {

// Per-phase material constants. All stress-like quantities in Pa.
struct PhaseParams {
  Stiffness4 C;    // elastic stiffness
  double c = 0.0;  // chemical energy offset (J/m^3 = Pa)
  double r = 0.0;  // plastic dissipation / yield coefficient
  double b = 0.0;  // kinematic hardening modulus

  // C positive definite, r > 0, b > 0. Raw structs stay constructible for
  // oracle edge cases (b = 0 plateau instances); configs always validate.
  void validate() const;
};

// Transition dissipation coefficients, k x k, diagonal unused.
struct TransitionParams {
  Eigen::MatrixXd r_trans;

  double operator()(int i, int j) const { return r_trans(i, j); }
  int phase_count() const { return static_cast<int>(r_trans.rows()); }
  void validate() const;  // off-diagonal entries > 0
};

// Transition rates g_ij >= 0 (1/s), g_ii = 0; at most one of (g_ij, g_ji)
// nonzero per pair.
struct TransitionMatrix {
  Eigen::MatrixXd g;

  static TransitionMatrix zero(int k) { return {Eigen::MatrixXd::Zero(k, k)}; }
  int phase_count() const { return static_cast<int>(g.rows()); }
  void validate() const;
};

// Volume fractions and per-phase plastic strains: the discrete distribution
// of the internal variables. Constructor enforces sum(lambda) = 1,
// lambda_i in [0, 1], tr(eps_p_i) = 0.
class MixtureState {
 public:
  MixtureState(std::vector<double> lambda, std::vector<SymTensor2> eps_p);

  int phase_count() const { return static_cast<int>(lambda_.size()); }
  int dim() const { return eps_p_.front().dim(); }

  double lambda(int i) const { return lambda_[static_cast<std::size_t>(i)]; }
  const SymTensor2& eps_p(int i) const { return eps_p_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& lambdas() const { return lambda_; }
  const std::vector<SymTensor2>& plastic_strains() const { return eps_p_; }

  bool operator==(const MixtureState& o) const = default;

  // Unvalidated factory for internal step updates that preserve the
  // invariants by construction. Checked in debug builds only.
  static MixtureState unchecked(std::vector<double> lambda, std::vector<SymTensor2> eps_p);

 private:
  MixtureState() = default;
  std::vector<double> lambda_;
  std::vector<SymTensor2> eps_p_;
};

inline constexpr double kFractionTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;

// lambda_dot_i = sum_j (g_ji - g_ij)
double phase_rate(const TransitionMatrix& g, int i);

// Explicit Euler on the fractions with clip-to-[0,1] and renormalization;
// plastic strains unchanged. A zero rate vector returns the state bitwise
// unchanged so elastic segments are exact freezes.
MixtureState advance_fractions(const MixtureState& state, const TransitionMatrix& g, double dt);

}  // namespace mixplast

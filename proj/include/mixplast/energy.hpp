#pragma once

#include <span>

#include "mixplast/phase.hpp"
#include "mixplast/tensor.hpp"

namespace mixplast {

// Reuss-effective elasticity of the mixture: the stiffness is the inverse of
// the fraction-weighted compliance sum, the effective plastic strain the
// fraction-weighted average. Phases with lambda_i = 0 contribute nothing.
struct EffectiveElasticity {
  Stiffness4 C_eff;
  SymTensor2 eps_p_eff;
};

// 1/2 (eps - eps_p) : C : (eps - eps_p) + b/2 ||eps_p||^2 + c
double phase_energy(const SymTensor2& eps, const SymTensor2& eps_p, const PhaseParams& p);

EffectiveElasticity effective_elasticity(const MixtureState& state, std::span<const PhaseParams> params);

// 1/2 (eps - eps_p_eff) : C_eff : (eps - eps_p_eff)
//   + 1/2 sum_i lambda_i b_i ||eps_p_i||^2 + sum_i lambda_i c_i
double relaxed_energy(const SymTensor2& eps, const MixtureState& state, std::span<const PhaseParams> params);

// C_eff : (eps - eps_p_eff)
SymTensor2 stress(const SymTensor2& eps, const MixtureState& state, std::span<const PhaseParams> params);

// dPsi_rel / dlambda_i. Uses dC_eff/dlambda_i = -C_eff C_i^{-1} C_eff:
//   -1/2 a : (C_eff C_i^{-1} C_eff) : a - sigma : eps_p_i
//   + b_i/2 ||eps_p_i||^2 + c_i,            a = eps - eps_p_eff.
// Only differences of these are observable under sum(lambda) = 1.
double driving_force_fraction(const SymTensor2& eps, const MixtureState& state,
                              std::span<const PhaseParams> params, int i);

// dPsi_rel / deps_p_i = lambda_i (b_i eps_p_i - sigma), deviatoric projection.
SymTensor2 driving_force_plastic(const SymTensor2& eps, const MixtureState& state,
                                 std::span<const PhaseParams> params, int i);

}  // namespace mixplast

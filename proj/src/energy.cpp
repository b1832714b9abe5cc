#include "mixplast/energy.hpp"

#include <cassert>
#include <stdexcept>

namespace mixplast {

namespace {

void check_sizes(const MixtureState& state, std::span<const PhaseParams> params) {
  if (static_cast<int>(params.size()) != state.phase_count())
    throw std::invalid_argument("energy: params/state phase count mismatch");
}

}  // namespace

double phase_energy(const SymTensor2& eps, const SymTensor2& eps_p, const PhaseParams& p) {
  const SymTensor2 e = eps - eps_p;
  return 0.5 * quad_form(e, p.C, e) + 0.5 * p.b * double_contract(eps_p, eps_p) + p.c;
}

EffectiveElasticity effective_elasticity(const MixtureState& state, std::span<const PhaseParams> params) {
  check_sizes(state, params);
  const int k = state.phase_count();
  const int dim = state.dim();

  SymTensor2 eps_p_eff(dim);
  for (int i = 0; i < k; ++i)
    if (state.lambda(i) != 0.0) eps_p_eff += state.lambda(i) * state.eps_p(i);

  bool all_iso = true;
  for (int i = 0; i < k; ++i)
    if (state.lambda(i) != 0.0 && !params[static_cast<std::size_t>(i)].C.is_isotropic()) all_iso = false;

  if (all_iso) {
    double s_kappa = 0.0, s_mu = 0.0;
    for (int i = 0; i < k; ++i) {
      const double l = state.lambda(i);
      if (l == 0.0) continue;
      s_kappa += l / params[static_cast<std::size_t>(i)].C.kappa3();
      s_mu += l / params[static_cast<std::size_t>(i)].C.mu2();
    }
    assert(s_kappa > 0.0 && s_mu > 0.0);
    return {Stiffness4::isotropic(dim, 1.0 / s_kappa, 1.0 / s_mu), eps_p_eff};
  }

  const int n = voigt_size(dim);
  Eigen::MatrixXd compliance = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < k; ++i) {
    const double l = state.lambda(i);
    if (l == 0.0) continue;
    compliance += l * params[static_cast<std::size_t>(i)].C.inverse().matrix();
  }
  return {Stiffness4(dim, compliance.inverse()), eps_p_eff};
}

double relaxed_energy(const SymTensor2& eps, const MixtureState& state, std::span<const PhaseParams> params) {
  check_sizes(state, params);
  const auto eff = effective_elasticity(state, params);
  const SymTensor2 a = eps - eff.eps_p_eff;
  double psi = 0.5 * quad_form(a, eff.C_eff, a);
  for (int i = 0; i < state.phase_count(); ++i) {
    const double l = state.lambda(i);
    if (l == 0.0) continue;
    const auto& p = params[static_cast<std::size_t>(i)];
    psi += l * (0.5 * p.b * double_contract(state.eps_p(i), state.eps_p(i)) + p.c);
  }
  return psi;
}

SymTensor2 stress(const SymTensor2& eps, const MixtureState& state, std::span<const PhaseParams> params) {
  check_sizes(state, params);
  const auto eff = effective_elasticity(state, params);
  return eff.C_eff.apply(eps - eff.eps_p_eff);
}

double driving_force_fraction(const SymTensor2& eps, const MixtureState& state,
                              std::span<const PhaseParams> params, int i) {
  check_sizes(state, params);
  const auto& p = params[static_cast<std::size_t>(i)];
  const auto eff = effective_elasticity(state, params);
  const SymTensor2 a = eps - eff.eps_p_eff;
  const SymTensor2 sig = eff.C_eff.apply(a);
  const double elastic = 0.5 * quad_form(sig, p.C.inverse(), sig);  // 1/2 a : C_eff C_i^{-1} C_eff : a
  return -elastic - double_contract(sig, state.eps_p(i)) +
         0.5 * p.b * double_contract(state.eps_p(i), state.eps_p(i)) + p.c;
}

SymTensor2 driving_force_plastic(const SymTensor2& eps, const MixtureState& state,
                                 std::span<const PhaseParams> params, int i) {
  check_sizes(state, params);
  const double l = state.lambda(i);
  if (l == 0.0) return SymTensor2::zero(state.dim());
  const auto& p = params[static_cast<std::size_t>(i)];
  const SymTensor2 sig = stress(eps, state, params);
  return deviator(l * (p.b * state.eps_p(i) - sig));
}

}  // namespace mixplast

#include "mixplast/evolution.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace mixplast {

void RegularizationParams::validate() const {
  if (!(eta1 > 0.0)) throw std::invalid_argument("RegularizationParams: eta1 must be > 0");
  if (!(eta2 > 0.0)) throw std::invalid_argument("RegularizationParams: eta2 must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("RegularizationParams: dt must be > 0");
}

void MaterialModel::validate() const {
  if (phases.empty()) throw std::invalid_argument("MaterialModel: needs at least one phase");
  const int d = phases.front().C.dim();
  for (const auto& p : phases) {
    p.validate();
    if (p.C.dim() != d) throw std::invalid_argument("MaterialModel: mixed tensor dimensions");
  }
  if (transition.phase_count() != phase_count())
    throw std::invalid_argument("MaterialModel: transition matrix size mismatch");
  if (phase_count() > 1) transition.validate();
  reg.validate();
  if (!(stress_scale > 0.0)) throw std::invalid_argument("MaterialModel: stress_scale must be > 0");
}

double dissipation_distance(const SymTensor2& eps_p_start, const SymTensor2& eps_p_end, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("dissipation_distance: r must be > 0");
  return r * norm(eps_p_end - eps_p_start);
}

namespace {

// Effective elasticity in scalar form when every participating phase is
// isotropic (the production path), general Stiffness4 otherwise.
struct Eff {
  bool iso = true;
  double k3 = 0.0, m2 = 0.0;
  Stiffness4 C;  // general path only
  SymTensor2 p;  // eps_p_eff
};

Eff make_eff(const std::vector<PhaseParams>& phases, const double* lambda,
             const SymTensor2* eps_p, int k, int dim) {
  Eff e;
  e.p = SymTensor2(dim);
  bool all_iso = true;
  for (int i = 0; i < k; ++i) {
    if (lambda[i] == 0.0) continue;
    e.p += lambda[i] * eps_p[i];
    if (!phases[static_cast<std::size_t>(i)].C.is_isotropic()) all_iso = false;
  }
  if (all_iso) {
    double sk = 0.0, sm = 0.0;
    for (int i = 0; i < k; ++i) {
      if (lambda[i] == 0.0) continue;
      sk += lambda[i] / phases[static_cast<std::size_t>(i)].C.kappa3();
      sm += lambda[i] / phases[static_cast<std::size_t>(i)].C.mu2();
    }
    assert(sk > 0.0 && sm > 0.0);
    e.k3 = 1.0 / sk;
    e.m2 = 1.0 / sm;
    return e;
  }
  e.iso = false;
  const int n = voigt_size(dim);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < k; ++i)
    if (lambda[i] != 0.0) s += lambda[i] * phases[static_cast<std::size_t>(i)].C.inverse().matrix();
  e.C = Stiffness4(dim, s.inverse());
  return e;
}

SymTensor2 apply_eff(const Eff& e, const SymTensor2& x) {
  if (!e.iso) return e.C.apply(x);
  SymTensor2 r = deviator(x) * e.m2;
  if (x.dim() > 1) {
    const double pr = e.k3 * x.trace() / 3.0;
    r[0] += pr;
    r[1] += pr;
    r[2] += pr;
  }
  return r;
}

double elastic_energy(const Eff& e, const SymTensor2& a) {
  if (!e.iso) return 0.5 * quad_form(a, e.C, a);
  const double tr = a.trace();
  const SymTensor2 d = deviator(a);
  return 0.5 * (e.k3 * tr * tr / 3.0 + e.m2 * double_contract(d, d));
}

double relaxed_energy_local(const Eff& eff, const SymTensor2& eps, const std::vector<PhaseParams>& phases,
                            const double* lambda, const SymTensor2* eps_p, int k) {
  double psi = elastic_energy(eff, eps - eff.p);
  for (int i = 0; i < k; ++i) {
    if (lambda[i] == 0.0) continue;
    const auto& ph = phases[static_cast<std::size_t>(i)];
    psi += lambda[i] * (0.5 * ph.b * double_contract(eps_p[i], eps_p[i]) + ph.c);
  }
  return psi;
}

// 1/2 sigma : C_i^{-1} : sigma from the trace and deviatoric-norm invariants.
double half_compliance_quad(const PhaseParams& p, const SymTensor2& sigma, double tr_sig,
                            double dev_norm2) {
  if (p.C.is_isotropic())
    return 0.5 * (tr_sig * tr_sig / (3.0 * p.C.kappa3()) + dev_norm2 / p.C.mu2());
  return 0.5 * quad_form(sigma, p.C.inverse(), sigma);
}

double df_value(const PhaseParams& p, const SymTensor2& sigma, double tr_sig, double dev_norm2,
                const SymTensor2& eps_p) {
  return -half_compliance_quad(p, sigma, tr_sig, dev_norm2) - double_contract(sigma, eps_p) +
         0.5 * p.b * double_contract(eps_p, eps_p) + p.c;
}

SymTensor2 shrink(const SymTensor2& v, double s) {
  const double n = norm(v);
  if (n <= s) return SymTensor2::zero(v.dim());
  return v * ((n - s) / n);
}

struct InitResult {
  SymTensor2 x;
  bool converged = false;
  double residual = 0.0;
};

// Maximize sigma_dev : x - b/2 ||x||^2 - r ||x - anchor|| over deviatoric x
// by proximal gradient ascent with step 1/b.
InitResult initiation_core(const SymTensor2& sigma_dev, const SymTensor2& anchor, double b, double r,
                           double stress_scale, int max_iter) {
  InitResult res;
  const double tol = 1e-10 * std::max(stress_scale, std::numeric_limits<double>::min());
  if (!(b > 0.0)) {
    // concavity degenerates to a kinked linear functional
    res.x = anchor;
    res.residual = std::max(0.0, norm(sigma_dev) - r);
    res.converged = res.residual <= tol;
    return res;
  }
  SymTensor2 x = anchor;
  for (int it = 0; it < max_iter; ++it) {
    x = anchor + shrink(x + (1.0 / b) * (sigma_dev - b * x) - anchor, r / b);
    const SymTensor2 y = x - anchor;
    const double ny = norm(y);
    double residual;
    if (ny > 0.0)
      residual = norm(sigma_dev - b * x - (r / ny) * y);
    else
      residual = std::max(0.0, norm(sigma_dev - b * anchor) - r);
    if (residual <= tol) {
      res.x = x;
      res.residual = residual;
      res.converged = true;
      return res;
    }
    res.x = x;
    res.residual = residual;
  }
  return res;
}

bool advance_fractions_inplace(std::vector<double>& lambda, const double* g, int k, double dt) {
  bool moving = false;
  for (int i = 0; i < k; ++i) {
    double rate = 0.0;
    for (int j = 0; j < k; ++j) rate += g[j * k + i] - g[i * k + j];
    if (rate != 0.0) moving = true;
    lambda[static_cast<std::size_t>(i)] += dt * rate;
  }
  if (!moving) return false;
  double sum = 0.0;
  for (double& l : lambda) {
    l = std::clamp(l, 0.0, 1.0);
    sum += l;
  }
  assert(sum > 0.5);
  for (double& l : lambda) l /= sum;
  return true;
}

}  // namespace

double yield_plastic(const SymTensor2& eps, const MixtureState& state,
                     std::span<const PhaseParams> params, int i) {
  const auto eff = effective_elasticity(state, params);
  const auto& p = params[static_cast<std::size_t>(i)];
  const SymTensor2 x = eff.C_eff.apply(deviator(eps) - eff.eps_p_eff) - p.b * state.eps_p(i);
  return norm(x) - p.r;
}

double yield_transition(const SymTensor2& eps, const MixtureState& state,
                        std::span<const PhaseParams> params, const TransitionParams& trans,
                        int i, int j) {
  if (i == j) throw std::invalid_argument("yield_transition: i and j must differ");
  return driving_force_fraction(eps, state, params, i) - driving_force_fraction(eps, state, params, j) -
         trans(i, j) * norm(state.eps_p(j) - state.eps_p(i));
}

SymTensor2 plastic_rate(const SymTensor2& eps, const MixtureState& state,
                        std::span<const PhaseParams> params, const RegularizationParams& reg, int i,
                        FlowDirection dir, double stress_scale) {
  const auto eff = effective_elasticity(state, params);
  const auto& p = params[static_cast<std::size_t>(i)];
  const SymTensor2 t0 = eff.C_eff.apply(deviator(eps) - eff.eps_p_eff);
  const SymTensor2 x = t0 - p.b * state.eps_p(i);
  const double phi = norm(x) - p.r;
  if (phi <= 0.0) return SymTensor2::zero(state.dim());
  const double tol = 1e-12 * std::max(stress_scale, std::numeric_limits<double>::min());
  const SymTensor2 direction = tensor_sign(dir == FlowDirection::kFullDrivingForce ? x : t0, tol);
  return deviator(reg.eta1 * phi * direction);
}

double transition_rate(const SymTensor2& eps, const MixtureState& state,
                       std::span<const PhaseParams> params, const TransitionParams& trans,
                       const RegularizationParams& reg, int i, int j) {
  if (state.lambda(i) == 0.0) return 0.0;  // no transitions out of an empty phase
  const double phi = yield_transition(eps, state, params, trans, i, j);
  return phi > 0.0 ? reg.eta2 * phi : 0.0;
}

SymTensor2 initiation_strain(const SymTensor2& eps, const MixtureState& state,
                             std::span<const PhaseParams> params, const TransitionParams& trans,
                             int i, int j, double stress_scale, int max_iter) {
  if (state.lambda(j) != 0.0) throw std::invalid_argument("initiation_strain: target phase must be dormant");
  if (!(state.lambda(i) > 0.0)) throw std::invalid_argument("initiation_strain: source phase must be present");
  const SymTensor2 sig_dev = deviator(stress(eps, state, params));
  const auto res = initiation_core(sig_dev, state.eps_p(i), params[static_cast<std::size_t>(j)].b,
                                   trans(i, j), stress_scale, max_iter);
  if (!res.converged)
    throw InitiationError("initiation_strain: ascent did not reach stationarity tolerance", res.x);
  return res.x;
}

void step_inplace(const MaterialModel& model, const SymTensor2& eps_prev, const SymTensor2& eps_next,
                  std::vector<double>& lambda, std::vector<SymTensor2>& eps_p, StepWorkspace& ws) {
  const int k = model.phase_count();
  const int dim = model.dim();
  assert(static_cast<int>(lambda.size()) == k && static_cast<int>(eps_p.size()) == k);

  ws.df.resize(static_cast<std::size_t>(k));
  ws.g.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0.0);
  ws.report.active_yield.clear();
  ws.report.active_transitions.clear();
  ws.report.initiated_phases.clear();

  const auto& phases = model.phases;
  const double dt = model.reg.dt;
  const double sign_tol = 1e-12 * std::max(model.stress_scale, std::numeric_limits<double>::min());

  // old-state context: stress at the previous strain (for the incremental
  // work) and at the new strain (drives all yields)
  const Eff eff0 = make_eff(phases, lambda.data(), eps_p.data(), k, dim);
  const SymTensor2 sigma_prev = apply_eff(eff0, eps_prev - eff0.p);
  const double psi0 = relaxed_energy_local(eff0, eps_prev, phases, lambda.data(), eps_p.data(), k);

  const SymTensor2 sigma = apply_eff(eff0, eps_next - eff0.p);
  const double tr_sig = sigma.trace();
  const SymTensor2 sig_dev = deviator(sigma);
  const double dev_norm2 = double_contract(sig_dev, sig_dev);

  for (int i = 0; i < k; ++i)
    ws.df[static_cast<std::size_t>(i)] =
        df_value(phases[static_cast<std::size_t>(i)], sigma, tr_sig, dev_norm2, eps_p[static_cast<std::size_t>(i)]);

  // initiation of dormant phases: candidate plastic strain self-consistently
  // maximizes the transition yield; largest phi_ij across sources wins
  for (int j = 0; j < k; ++j) {
    if (lambda[static_cast<std::size_t>(j)] != 0.0) continue;
    const auto& pj = phases[static_cast<std::size_t>(j)];
    double best_phi = -std::numeric_limits<double>::infinity();
    SymTensor2 best_x(dim);
    for (int i = 0; i < k; ++i) {
      if (i == j || lambda[static_cast<std::size_t>(i)] == 0.0) continue;
      const auto res = initiation_core(sig_dev, eps_p[static_cast<std::size_t>(i)], pj.b,
                                       model.transition(i, j), model.stress_scale, 100);
      if (!res.converged)
        throw InitiationError("step: phase initiation did not converge", res.x);
      const double df_j = df_value(pj, sigma, tr_sig, dev_norm2, res.x);
      const double phi = ws.df[static_cast<std::size_t>(i)] - df_j -
                         model.transition(i, j) * norm(res.x - eps_p[static_cast<std::size_t>(i)]);
      if (phi > best_phi) {
        best_phi = phi;
        best_x = res.x;
      }
    }
    if (best_phi >= 0.0) {
      eps_p[static_cast<std::size_t>(j)] = best_x;
      ws.df[static_cast<std::size_t>(j)] = df_value(pj, sigma, tr_sig, dev_norm2, best_x);
      ws.report.initiated_phases.push_back(j);
    }
  }

  // transition rates; rows of empty phases stay zero
  bool any_transition = false;
  for (int i = 0; i < k; ++i) {
    if (lambda[static_cast<std::size_t>(i)] == 0.0) continue;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const double phi = ws.df[static_cast<std::size_t>(i)] - ws.df[static_cast<std::size_t>(j)] -
                         model.transition(i, j) *
                             norm(eps_p[static_cast<std::size_t>(j)] - eps_p[static_cast<std::size_t>(i)]);
      if (phi > 0.0) {
        ws.g[static_cast<std::size_t>(i * k + j)] = model.reg.eta2 * phi;
        ws.report.active_transitions.emplace_back(i, j);
        any_transition = true;
      }
    }
  }

  // plastic yields at the pre-transfer state decide the branch; flow itself
  // is evaluated after the fraction update, per the incremental scheme
  const SymTensor2 dev_eps = deviator(eps_next);
  bool any_yield = false;
  {
    const SymTensor2 t0 = apply_eff(eff0, dev_eps - eff0.p);
    for (int i = 0; i < k && !any_yield; ++i) {
      if (lambda[static_cast<std::size_t>(i)] == 0.0) continue;
      const auto& p = phases[static_cast<std::size_t>(i)];
      if (norm(t0 - p.b * eps_p[static_cast<std::size_t>(i)]) - p.r > 0.0) any_yield = true;
    }
  }

  SymTensor2 sigma_new = sigma;
  if (any_transition || any_yield || !ws.report.initiated_phases.empty()) {
    if (any_transition) advance_fractions_inplace(lambda, ws.g.data(), k, dt);

    Eff eff1 = make_eff(phases, lambda.data(), eps_p.data(), k, dim);
    const SymTensor2 t1 = apply_eff(eff1, dev_eps - eff1.p);
    bool flowed = false;
    for (int i = 0; i < k; ++i) {
      if (lambda[static_cast<std::size_t>(i)] == 0.0) continue;
      const auto& p = phases[static_cast<std::size_t>(i)];
      const SymTensor2 x = t1 - p.b * eps_p[static_cast<std::size_t>(i)];
      const double phi = norm(x) - p.r;
      if (phi <= 0.0) continue;
      const SymTensor2 direction =
          tensor_sign(model.flow_direction == FlowDirection::kFullDrivingForce ? x : t1, sign_tol);
      eps_p[static_cast<std::size_t>(i)] += deviator(dt * model.reg.eta1 * phi * direction);
      ws.report.active_yield.push_back(i);
      flowed = true;
    }
    if (flowed) {
      SymTensor2 p_new(dim);
      for (int i = 0; i < k; ++i)
        if (lambda[static_cast<std::size_t>(i)] != 0.0)
          p_new += lambda[static_cast<std::size_t>(i)] * eps_p[static_cast<std::size_t>(i)];
      eff1.p = p_new;
    }
    sigma_new = apply_eff(eff1, eps_next - eff1.p);
    ws.report.stress = sigma_new;
    ws.report.dissipation_increment =
        0.5 * double_contract(sigma_prev + sigma_new, eps_next - eps_prev) -
        (relaxed_energy_local(eff1, eps_next, phases, lambda.data(), eps_p.data(), k) - psi0);
  } else {
    ws.report.stress = sigma;
    ws.report.dissipation_increment =
        0.5 * double_contract(sigma_prev + sigma, eps_next - eps_prev) -
        (relaxed_energy_local(eff0, eps_next, phases, lambda.data(), eps_p.data(), k) - psi0);
  }
}

StepResult step(const MaterialModel& model, const SymTensor2& eps_prev, const SymTensor2& eps_next,
                const MixtureState& state) {
  if (state.phase_count() != model.phase_count())
    throw std::invalid_argument("step: state/model phase count mismatch");
  std::vector<double> lambda = state.lambdas();
  std::vector<SymTensor2> eps_p = state.plastic_strains();
  StepWorkspace ws;
  step_inplace(model, eps_prev, eps_next, lambda, eps_p, ws);
  return {MixtureState::unchecked(std::move(lambda), std::move(eps_p)), std::move(ws.report)};
}

}  // namespace mixplast

#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "mixplast/energy.hpp"
#include "mixplast/phase.hpp"
#include "mixplast/tensor.hpp"

namespace mixplast {

// Viscous regularization coefficients (1/(Pa*s)) and the time step.
struct RegularizationParams {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double dt = 0.0;
  void validate() const;
};

// Direction of the regularized plastic flow. The evolution equation's printed
// form takes the sign of C_eff:(dev(eps) - eps_p_eff) alone; the differential
// inclusion it solves has the sign acting on the full driving force including
// the backstress -b_i eps_p_i. Default is the full driving force; the literal
// form is kept for reproduction runs.
enum class FlowDirection { kFullDrivingForce, kPaperLiteral };

// Everything the incremental update needs, bundled.
struct MaterialModel {
  std::vector<PhaseParams> phases;
  TransitionParams transition;
  RegularizationParams reg;
  FlowDirection flow_direction = FlowDirection::kFullDrivingForce;
  double stress_scale = 1.0;  // reference stress for zero tolerances

  int phase_count() const { return static_cast<int>(phases.size()); }
  int dim() const { return phases.front().C.dim(); }
  void validate() const;
};

// Per-step observability.
struct StepReport {
  SymTensor2 stress;
  std::vector<int> active_yield;                      // phases with phi_i > 0 and lambda_i > 0
  std::vector<std::pair<int, int>> active_transitions;  // pairs with g_ij > 0
  std::vector<int> initiated_phases;
  double dissipation_increment = 0.0;

  bool inelastic() const {
    return !active_yield.empty() || !active_transitions.empty() || !initiated_phases.empty();
  }
};

struct StepResult {
  MixtureState state;
  StepReport report;
};

// r * ||eps_p_end - eps_p_start||: the cost of an instantaneous plastic
// strain jump between two internal states.
double dissipation_distance(const SymTensor2& eps_p_start, const SymTensor2& eps_p_end, double r);

// phi_i = ||C_eff : (dev(eps) - eps_p_eff) - b_i eps_p_i|| - r_i
double yield_plastic(const SymTensor2& eps, const MixtureState& state,
                     std::span<const PhaseParams> params, int i);

// phi_ij = dPsi/dlambda_i - dPsi/dlambda_j - r_trans(i,j) ||eps_p_j - eps_p_i||
double yield_transition(const SymTensor2& eps, const MixtureState& state,
                        std::span<const PhaseParams> params, const TransitionParams& trans,
                        int i, int j);

// eps_p_dot_i = eta1 (phi_i)_+ sign(driving force); deviatoric.
SymTensor2 plastic_rate(const SymTensor2& eps, const MixtureState& state,
                        std::span<const PhaseParams> params, const RegularizationParams& reg, int i,
                        FlowDirection dir = FlowDirection::kFullDrivingForce,
                        double stress_scale = 1.0);

// g_ij = eta2 (phi_ij)_+, suppressed to 0 when lambda_i = 0 so fractions
// cannot be driven negative out of an empty phase.
double transition_rate(const SymTensor2& eps, const MixtureState& state,
                       std::span<const PhaseParams> params, const TransitionParams& trans,
                       const RegularizationParams& reg, int i, int j);

// Thrown when the initiation ascent fails to meet the stationarity tolerance.
class InitiationError : public std::runtime_error {
 public:
  InitiationError(std::string msg, SymTensor2 best) : std::runtime_error(std::move(msg)), best_iterate(std::move(best)) {}
  SymTensor2 best_iterate;
};

// Plastic strain a newly forming phase j is created with: the deviatoric
// maximizer of phi_ij over eps_p_j at lambda_j = 0, found by proximal
// gradient ascent on
//   sigma : x - b_j/2 ||x||^2 - r_trans(i,j) ||x - eps_p_i||
// accepted when the stationarity residual is <= 1e-10 * stress_scale.
SymTensor2 initiation_strain(const SymTensor2& eps, const MixtureState& state,
                             std::span<const PhaseParams> params, const TransitionParams& trans,
                             int i, int j, double stress_scale = 1.0, int max_iter = 100);

// Reusable buffers + report for the in-place incremental update.
struct StepWorkspace {
  std::vector<double> df;          // dPsi_rel/dlambda per phase
  std::vector<double> g;           // k*k row-major transition rates
  std::vector<double> lambda_new;
  StepReport report;
};

// One incremental update (strain-driven): transition triggers and initiation
// first, then fraction transfer, then effective tensors, then explicit Euler
// plastic flow, then stress. eps_prev is the strain the state was last in
// equilibrium with; it only feeds the dissipation bookkeeping.
StepResult step(const MaterialModel& model, const SymTensor2& eps_prev, const SymTensor2& eps_next,
                const MixtureState& state);

// Same update mutating caller-owned buffers; report lands in ws.report.
void step_inplace(const MaterialModel& model, const SymTensor2& eps_prev, const SymTensor2& eps_next,
                  std::vector<double>& lambda, std::vector<SymTensor2>& eps_p, StepWorkspace& ws);

}  // namespace mixplast

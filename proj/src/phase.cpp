#include "mixplast/phase.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mixplast {

void PhaseParams::validate() const {
  if (!C.is_positive_definite()) throw std::invalid_argument("PhaseParams: C must be positive definite");
  if (!(r > 0.0)) throw std::invalid_argument("PhaseParams: r must be > 0");
  if (!(b > 0.0)) throw std::invalid_argument("PhaseParams: b must be > 0");
}

void TransitionParams::validate() const {
  if (r_trans.rows() != r_trans.cols()) throw std::invalid_argument("TransitionParams: matrix must be square");
  for (int i = 0; i < r_trans.rows(); ++i)
    for (int j = 0; j < r_trans.cols(); ++j)
      if (i != j && !(r_trans(i, j) > 0.0))
        throw std::invalid_argument("TransitionParams: off-diagonal r_trans must be > 0");
}

void TransitionMatrix::validate() const {
  if (g.rows() != g.cols()) throw std::invalid_argument("TransitionMatrix: matrix must be square");
  for (int i = 0; i < g.rows(); ++i) {
    if (g(i, i) != 0.0) throw std::invalid_argument("TransitionMatrix: diagonal must be zero");
    for (int j = 0; j < g.cols(); ++j) {
      if (g(i, j) < 0.0) throw std::invalid_argument("TransitionMatrix: rates must be >= 0");
      if (i < j && std::min(g(i, j), g(j, i)) != 0.0)
        throw std::invalid_argument("TransitionMatrix: g_ij and g_ji cannot both be positive");
    }
  }
}

namespace {

void check_state(const std::vector<double>& lambda, const std::vector<SymTensor2>& eps_p) {
  if (lambda.empty() || lambda.size() != eps_p.size())
    throw std::invalid_argument("MixtureState: lambda and eps_p must be non-empty and same length");
  const int dim = eps_p.front().dim();
  double sum = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < -kFractionTol || lambda[i] > 1.0 + kFractionTol)
      throw std::invalid_argument("MixtureState: lambda_i must lie in [0, 1]");
    sum += lambda[i];
    if (eps_p[i].dim() != dim) throw std::invalid_argument("MixtureState: mixed tensor dimensions");
    if (std::abs(eps_p[i].trace()) > kTraceTol * std::max(1.0, norm(eps_p[i])))
      throw std::invalid_argument("MixtureState: plastic strains must be traceless");
  }
  if (std::abs(sum - 1.0) > kFractionTol)
    throw std::invalid_argument("MixtureState: fractions must sum to 1");
}

}  // namespace

MixtureState::MixtureState(std::vector<double> lambda, std::vector<SymTensor2> eps_p) {
  check_state(lambda, eps_p);
  lambda_ = std::move(lambda);
  eps_p_ = std::move(eps_p);
}

MixtureState MixtureState::unchecked(std::vector<double> lambda, std::vector<SymTensor2> eps_p) {
#ifndef NDEBUG
  check_state(lambda, eps_p);
#endif
  MixtureState s;
  s.lambda_ = std::move(lambda);
  s.eps_p_ = std::move(eps_p);
  return s;
}

double phase_rate(const TransitionMatrix& g, int i) {
  const int k = g.phase_count();
  if (i < 0 || i >= k) throw std::out_of_range("phase_rate: bad phase index");
  double rate = 0.0;
  for (int j = 0; j < k; ++j) rate += g.g(j, i) - g.g(i, j);
  return rate;
}

MixtureState advance_fractions(const MixtureState& state, const TransitionMatrix& g, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("advance_fractions: dt must be > 0");
  const int k = state.phase_count();
  if (g.phase_count() != k) throw std::invalid_argument("advance_fractions: phase count mismatch");

  bool moving = false;
  std::vector<double> lambda = state.lambdas();
  for (int i = 0; i < k; ++i) {
    const double rate = phase_rate(g, i);
    if (rate != 0.0) moving = true;
    lambda[static_cast<std::size_t>(i)] += dt * rate;
  }
  if (!moving) return state;

  double sum = 0.0;
  for (double& l : lambda) {
    l = std::clamp(l, 0.0, 1.0);
    sum += l;
  }
  assert(sum > 0.5);
  for (double& l : lambda) l /= sum;
  return MixtureState::unchecked(std::move(lambda), state.plastic_strains());
}

}  // namespace mixplast

#pragma once

#include "chemoflow/model.hpp"
#include "chemoflow/state.hpp"

namespace chemoflow {

/// The five parts of the driving energy
///   H(u,v) = int( u^2/2 + u W + |Dv|^2/2 + kappa v^2/2 + eps u phi(v) ).
///
/// The Dirichlet part uses edge-centered differences (v_{i+1}-v_i)/h, the
/// quadratic form of the three-point Neumann Laplacian; this makes the
/// semi-implicit signal update dissipate H exactly and makes the entropy
/// decomposition below an identity up to the stationary residual.
struct EntropyBreakdown {
  double internal;   // int u^2/2
  double potential;  // int u W
  double dirichlet;  // int |Dv|^2 / 2
  double decay;      // kappa/2 int v^2
  double coupling;   // eps int u phi(v)
  double total;
};

EntropyBreakdown entropy_H(const SystemState& s, const ModelParams& p);

/// sum u log u h with 0 log 0 = 0.
double boltzmann_E(const ProbabilityDensity& u);

/// int (|Dv|^2/2 + kappa v^2/2), edge-centered differences.
double dirichlet_F(const ConcentrationField& v, double kappa);

/// Decomposition of H - H_inf into the convex principal parts and the
/// coupling remainder, relative to a stationary pair.
struct LyapunovBreakdown {
  double l_u;
  double l_v;
  double l_star;
  double decomposition_residual;  // (H - H_inf) - (L_u + L_v + eps L_*)
};

/// Requires the stationary pair to satisfy the discrete Euler-Lagrange
/// system; throws if its v-residual exceeds max_el_residual.
LyapunovBreakdown lyapunov(const SystemState& s, const SystemState& stationary,
                           const ModelParams& p, double max_el_residual = 1e-6);

/// Dissipation of the u-part:
///   (1 - eps/2) int u |D(u + W_eps)|^2  -  eps/2 int u |D(phi(v) - phi(v_inf))|^2,
/// central differences restricted to the support of u (one-sided at its edge).
double dissipation_Du(const SystemState& s, const SystemState& stationary, const ModelParams& p);

/// Dissipation of the v-part:
///   (1 - eps/2) int (Lap(v - v_inf) - kappa (v - v_inf))^2  -  eps/2 int (u phi'(v) - u_inf phi'(v_inf))^2,
/// with the three-point Neumann Laplacian.
double dissipation_Dv(const SystemState& s, const SystemState& stationary, const ModelParams& p);

/// Minimum over sample points of the second difference of H along the linear
/// interpolation from s0 to s1, divided by ||u1-u0||^2 + ||v1-v0||^2 (the
/// flat product metric).  Probes the joint convexity modulus.
double convexity_probe(const SystemState& s0, const SystemState& s1, const ModelParams& p,
                       int n_samples);

/// Smallest eigenvalue of the worst-case coupling matrix
/// [[1, e], [e, kappa]] with e = eps |phi'(0)|.
double flat_convexity_modulus(const ModelParams& p);

/// Discrete EL residual of the v-component: || (A3 + kappa) v_inf + eps u_inf phi'(v_inf) ||_2.
double stationary_el_residual(const SystemState& stationary, const ModelParams& p);

/// Perturbed potential W_eps(x_i) = W(x_i) + eps phi(v_inf(x_i)).
std::vector<double> perturbed_potential(const SystemState& stationary, const ModelParams& p);

}  // namespace chemoflow

#include "chemoflow/model.hpp"

#include <cmath>
#include <stdexcept>

#include "chemoflow/field.hpp"

namespace chemoflow {

ResponseFunction::ResponseFunction(ResponseFamily family, std::function<double(double)> phi,
                                   std::function<double(double)> dphi,
                                   std::function<double(double)> d2phi, double dphi0,
                                   double d2_bound)
    : family_(family),
      phi_(std::move(phi)),
      dphi_(std::move(dphi)),
      d2phi_(std::move(d2phi)),
      dphi0_(dphi0),
      d2_bound_(d2_bound) {}

ResponseFunction ResponseFunction::linear() {
  return ResponseFunction(
      ResponseFamily::kLinear, [](double w) { return -w; }, [](double) { return -1.0; },
      [](double) { return 0.0; }, -1.0, 0.0);
}

ResponseFunction ResponseFunction::log_saturation() {
  return ResponseFunction(
      ResponseFamily::kLogSaturation, [](double w) { return -std::log1p(w); },
      [](double w) { return -1.0 / (1.0 + w); },
      [](double w) { return 1.0 / ((1.0 + w) * (1.0 + w)); }, -1.0, 1.0);
}

ResponseFunction ResponseFunction::rational_saturation() {
  return ResponseFunction(
      ResponseFamily::kRationalSaturation, [](double w) { return 1.0 / (1.0 + w); },
      [](double w) {
        const double d = 1.0 + w;
        return -1.0 / (d * d);
      },
      [](double w) {
        const double d = 1.0 + w;
        return 2.0 / (d * d * d);
      },
      -1.0, 2.0);
}

ResponseFunction ResponseFunction::from_name(const std::string& name) {
  if (name == "linear") return linear();
  if (name == "log") return log_saturation();
  if (name == "rational") return rational_saturation();
  throw std::invalid_argument("unknown response function family: " + name);
}

std::string ResponseFunction::name() const {
  switch (family_) {
    case ResponseFamily::kLinear:
      return "linear";
    case ResponseFamily::kLogSaturation:
      return "log";
    case ResponseFamily::kRationalSaturation:
      return "rational";
  }
  return "?";
}

Confinement::Confinement(std::function<double(double)> w, std::function<double(double)> dw,
                         std::function<double(double)> d2w, double lambda0)
    : w_(std::move(w)), dw_(std::move(dw)), d2w_(std::move(d2w)), lambda0_(lambda0) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("Confinement: lambda0 must be positive");
}

Confinement Confinement::quadratic(double lambda0, double center) {
  return Confinement([lambda0, center](double x) { return 0.5 * lambda0 * (x - center) * (x - center); },
                     [lambda0, center](double x) { return lambda0 * (x - center); },
                     [lambda0](double) { return lambda0; }, lambda0);
}

Confinement Confinement::custom(std::function<double(double)> w, std::function<double(double)> dw,
                                std::function<double(double)> d2w, double lambda0) {
  return Confinement(std::move(w), std::move(dw), std::move(d2w), lambda0);
}

ModelParams::ModelParams(double eps, double kap, ResponseFunction response, Confinement w)
    : epsilon(eps), kappa(kap), phi(std::move(response)), potential(std::move(w)) {
  if (!(kappa > 0.0)) throw std::invalid_argument("ModelParams: kappa must be strictly positive");
  if (epsilon < 0.0) throw std::invalid_argument("ModelParams: epsilon must be nonnegative");
}

bool AssumptionReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

AssumptionReport validate_params(const ModelParams& params, const Grid1D& grid) {
  AssumptionReport report;

  // response function on a 1000-point lattice of w in [0, 100]
  {
    bool dec = true, slope_bounded = true, curv = true;
    double wit_dec = 0, wit_slope = 0, wit_curv = 0;
    double val_dec = 0, val_slope = 0, val_curv = 0;
    const double dphi0 = params.phi.dphi0();
    for (int k = 0; k < 1000; ++k) {
      const double w = 100.0 * k / 999.0;
      const double d1 = params.phi.dphi(w);
      const double d2 = params.phi.d2phi(w);
      if (!(d1 < 0.0) && dec) {
        dec = false;
        wit_dec = w;
        val_dec = d1;
      }
      if (!(-d1 <= -dphi0 + 1e-14) && slope_bounded) {
        slope_bounded = false;
        wit_slope = w;
        val_slope = d1;
      }
      if ((d2 < -1e-14 || d2 > params.phi.d2phi_bound() + 1e-14) && curv) {
        curv = false;
        wit_curv = w;
        val_curv = d2;
      }
    }
    report.checks.push_back({"phi_strictly_decreasing", dec, wit_dec, val_dec});
    report.checks.push_back({"phi_slope_bounded_by_phi_prime_0", slope_bounded, wit_slope, val_slope});
    report.checks.push_back({"phi_second_derivative_in_range", curv, wit_curv, val_curv});
  }

  // confinement on the grid
  {
    bool nonneg = true, convex = true;
    double wit_n = 0, wit_c = 0, val_n = 0, val_c = 0;
    for (int i = 0; i < grid.n_cells(); ++i) {
      const double x = grid.center(i);
      const double w = params.potential(x);
      const double d2 = params.potential.hess(x);
      if (w < 0.0 && nonneg) {
        nonneg = false;
        wit_n = x;
        val_n = w;
      }
      if (d2 < params.potential.lambda0() - 1e-12 && convex) {
        convex = false;
        wit_c = x;
        val_c = d2;
      }
    }
    report.checks.push_back({"W_nonnegative", nonneg, wit_n, val_n});
    report.checks.push_back({"W_uniformly_convex", convex, wit_c, val_c});
  }

  report.checks.push_back({"kappa_positive", params.kappa > 0.0, 0.0, params.kappa});
  report.checks.push_back({"epsilon_nonnegative", params.epsilon >= 0.0, 0.0, params.epsilon});
  return report;
}

// --- ConcentrationField -----------------------------------------------------

ConcentrationField::ConcentrationField(std::vector<double> values, const Grid1D& grid)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid.n_cells())
    throw std::invalid_argument("ConcentrationField: value count != n_cells");
  for (double x : values_)
    if (!std::isfinite(x)) throw std::invalid_argument("ConcentrationField: non-finite value");
}

ConcentrationField ConcentrationField::zero(const Grid1D& grid) {
  return ConcentrationField(std::vector<double>(static_cast<size_t>(grid.n_cells()), 0.0), grid);
}

double ConcentrationField::min_value() const {
  double m = values_[0];
  for (double x : values_) m = std::min(m, x);
  return m;
}

double ConcentrationField::l2_norm() const {
  double s = 0.0;
  for (double x : values_) s += x * x;
  return std::sqrt(s * grid_.spacing());
}

double ConcentrationField::grad_l2_norm() const {
  const double h = grid_.spacing();
  double s = 0.0;
  for (size_t i = 0; i + 1 < values_.size(); ++i) {
    const double d = (values_[i + 1] - values_[i]) / h;
    s += d * d;
  }
  return std::sqrt(s * h);
}

double ConcentrationField::w12_norm() const {
  const double a = l2_norm(), b = grad_l2_norm();
  return std::sqrt(a * a + b * b);
}

double ConcentrationField::grad_lq_norm(double q) const {
  const double h = grid_.spacing();
  double s = 0.0;
  for (size_t i = 0; i + 1 < values_.size(); ++i) {
    const double d = std::abs(values_[i + 1] - values_[i]) / h;
    s += std::pow(d, q);
  }
  return std::pow(s * h, 1.0 / q);
}

}  // namespace chemoflow

#include "fdnet/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "fdnet/numerics.hpp"

namespace fdnet {

void NetworkConfig::validate() const {
  if (!(eta > 2.0 && eta <= 8.0)) {
    // The UL cross-interference term carries csc(2 pi / eta); keeping eta in
    // (2, 8] keeps it finite and positive alongside the convergence bound.
    throw std::invalid_argument("NetworkConfig: eta must lie in (2, 8]");
  }
  if (!(lambda_bs > 0.0)) {
    throw std::invalid_argument("NetworkConfig: lambda_bs must be positive");
  }
  if (!(p_dl > 0.0 && p_ul_max > 0.0 && rho > 0.0 && noise > 0.0)) {
    throw std::invalid_argument("NetworkConfig: powers must be positive");
  }
  if (!(rho <= p_ul_max)) {
    throw std::invalid_argument("NetworkConfig: rho must not exceed p_ul_max");
  }
  if (beta_dl < 0.0 || beta_ul < 0.0) {
    throw std::invalid_argument("NetworkConfig: beta values must be >= 0");
  }
}

double max_range(const NetworkConfig& cfg) {
  return std::pow(cfg.p_ul_max / cfg.rho, 1.0 / cfg.eta);
}

double ServingDistancePdf::operator()(double r) const {
  if (r < 0.0 || r > r_max) return 0.0;
  double pil = M_PI * lambda;
  return 2.0 * pil * r * std::exp(-pil * r * r) / norm;
}

double ServingDistancePdf::cdf(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= r_max) return 1.0;
  return -std::expm1(-M_PI * lambda * r * r) / norm;
}

double ServingDistancePdf::quantile(double u) const {
  return std::sqrt(-std::log1p(-u * norm) / (M_PI * lambda));
}

ServingDistancePdf serving_distance_pdf(const NetworkConfig& cfg) {
  double r_max = max_range(cfg);
  double norm = -std::expm1(-M_PI * cfg.lambda_bs * r_max * r_max);
  return {cfg.lambda_bs, r_max, norm};
}

double expected_ul_power_frac(const NetworkConfig& cfg) {
  double r_max = max_range(cfg);
  double c = M_PI * cfg.lambda_bs * r_max * r_max;
  return std::pow(cfg.rho, 2.0 / cfg.eta) * lower_incomplete_gamma(2.0, c) /
         (M_PI * cfg.lambda_bs * -std::expm1(-c));
}

double truncation_probability(const NetworkConfig& cfg) {
  double r_max = max_range(cfg);
  return std::exp(-M_PI * cfg.lambda_bs * r_max * r_max);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

}  // namespace fdnet

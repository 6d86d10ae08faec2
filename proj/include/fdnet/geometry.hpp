#pragma once

namespace fdnet {

enum class SiDistribution { Degenerate, Exponential };
enum class Topology { TwoNode, ThreeNode };

// Deployment and power-control parameters shared by both engines. All values
// linear; dB/dBm inputs are converted at the configuration boundary.
struct NetworkConfig {
  double lambda_bs;  // BS per m^2
  double eta;        // path-loss exponent, (2, 8]
  double p_dl;       // W, BS transmit power
  double p_ul_max;   // W, UL power cap
  double rho;        // W, UL power-control target received power
  double noise;      // W
  double beta_dl;    // linear residual SI attenuation at a 2NT UE
  double beta_ul;    // linear residual SI attenuation at a BS; 0 disables
  SiDistribution si_distribution = SiDistribution::Degenerate;

  // Throws std::invalid_argument on violation.
  void validate() const;
};

// R_M = (p_ul_max / rho)^{1/eta}: beyond this serving distance the power
// cap is hit and the UE goes silent.
double max_range(const NetworkConfig& cfg);

// Truncated Rayleigh law of the serving distance of a non-truncated UE.
struct ServingDistancePdf {
  double lambda;
  double r_max;
  double norm;  // 1 - exp(-pi lambda r_max^2)

  double operator()(double r) const;  // density, zero outside [0, r_max]
  double cdf(double r) const;
  double quantile(double u) const;  // inverse cdf, u in [0, 1)
};

ServingDistancePdf serving_distance_pdf(const NetworkConfig& cfg);

// E[P_u^{2/eta}] of the power-controlled transmit power, conditioned on
// non-truncation. Equals rho^{2/eta} E[r^2] under P_u = rho r^eta.
double expected_ul_power_frac(const NetworkConfig& cfg);

// Probability the nearest BS lies beyond R_M (the UE stays silent).
double truncation_probability(const NetworkConfig& cfg);

// Boundary conversions; everything past the boundary is linear.
double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

}  // namespace fdnet

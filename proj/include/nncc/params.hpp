#pragma once

#include <span>
#include <string_view>

#include "nncc/errors.hpp"

namespace nncc {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s, exact
inline constexpr double kPi = 3.14159265358979323846;

/// Radio and network constants of the two-user uplink scenario.
///
/// Frequencies, bandwidths and rates are in SI units; fields ending in _db
/// are power ratios in dB. Defaults are the short-range/cellular setup used
/// throughout the figure datasets, with thermal noise at -174 dBm/Hz and
/// unit-mean Rayleigh power gains.
struct SystemParams {
  double f_s = 2.4e9;  // short-range carrier, Hz
  double B_s = 2e6;    // short-range bandwidth, Hz
  double f_c = 2.1e9;  // cellular carrier, Hz
  double B_c = 5e6;    // cellular bandwidth, Hz
  double G_u1_db = 0.0;
  double G_u2_db = 0.0;
  double G_bs_db = 5.0;
  double gap_s_db = 4.0;
  double gap_c_db = 2.0;
  double n0 = 3.981071705534972e-21;  // W/Hz, 10^(-20.4)
  double sigma2_short = 1.0;
  double sigma2_cell = 1.0;
  double rho = 1e-4;  // MS per m^2
  double p_out_target = 1e-3;
  double rate = 1e5;  // bits/s

  bool operator==(const SystemParams&) const = default;
};

/// Validated parameters with the derived linear-scale constants.
struct LinearParams {
  SystemParams base;
  double lambda_s = 0.0;  // m
  double lambda_c = 0.0;  // m
  double g_u1 = 0.0;
  double g_u2 = 0.0;
  double g_bs = 0.0;
  double delta_s = 0.0;
  double delta_c = 0.0;

  bool operator==(const LinearParams&) const = default;
};

double db_to_linear(double x_db);

/// Free-space wavelength c / freq.
double wavelength(double freq);

/// Checks every SystemParams invariant and computes derived constants.
/// Throws ValidationError naming the first offending field.
LinearParams validate(const SystemParams& raw);

/// Flat key schema of SystemParams, used by config files and CLI overrides.
struct ParamField {
  std::string_view name;
  double SystemParams::*member;
  std::string_view description;
};

std::span<const ParamField> param_fields();

/// Sets the field named `key`; throws ValidationError(UnknownKey) otherwise.
void set_param(SystemParams& params, std::string_view key, double value);

}  // namespace nncc

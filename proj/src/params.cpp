#include "nncc/params.hpp"

#include <array>
#include <cmath>
#include <string>

namespace nncc {

namespace {

using Kind = ValidationError::Kind;

void require_finite(std::string_view field, double v) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string(field), Kind::NonFinite, "value must be finite");
  }
}

void require_positive(std::string_view field, double v) {
  require_finite(field, v);
  if (!(v > 0.0)) {
    throw ValidationError(std::string(field), Kind::NonPositive,
                          "value must be strictly positive, got " + std::to_string(v));
  }
}

const std::array<ParamField, 15> kFields{{
    {"f_s", &SystemParams::f_s, "short-range carrier frequency [Hz]"},
    {"B_s", &SystemParams::B_s, "short-range bandwidth [Hz]"},
    {"f_c", &SystemParams::f_c, "cellular carrier frequency [Hz]"},
    {"B_c", &SystemParams::B_c, "cellular bandwidth [Hz]"},
    {"G_u1_db", &SystemParams::G_u1_db, "U1 antenna gain [dB]"},
    {"G_u2_db", &SystemParams::G_u2_db, "U2 antenna gain [dB]"},
    {"G_bs_db", &SystemParams::G_bs_db, "BS antenna gain [dB]"},
    {"gap_s_db", &SystemParams::gap_s_db, "short-range capacity gap [dB]"},
    {"gap_c_db", &SystemParams::gap_c_db, "cellular capacity gap [dB]"},
    {"n0", &SystemParams::n0, "noise power spectral density [W/Hz]"},
    {"sigma2_short", &SystemParams::sigma2_short, "mean short-range fading power"},
    {"sigma2_cell", &SystemParams::sigma2_cell, "mean cellular fading power"},
    {"rho", &SystemParams::rho, "MS density [1/m^2]"},
    {"p_out_target", &SystemParams::p_out_target, "end-to-end target outage probability"},
    {"rate", &SystemParams::rate, "required data rate [bits/s]"},
}};

}  // namespace

double db_to_linear(double x_db) {
  require_finite("x_db", x_db);
  return std::pow(10.0, x_db / 10.0);
}

double wavelength(double freq) {
  require_positive("freq", freq);
  return kSpeedOfLight / freq;
}

LinearParams validate(const SystemParams& raw) {
  require_positive("f_s", raw.f_s);
  require_positive("B_s", raw.B_s);
  require_positive("f_c", raw.f_c);
  require_positive("B_c", raw.B_c);
  require_finite("G_u1_db", raw.G_u1_db);
  require_finite("G_u2_db", raw.G_u2_db);
  require_finite("G_bs_db", raw.G_bs_db);
  // A gap of 0 dB or less would exceed Shannon capacity.
  require_positive("gap_s_db", raw.gap_s_db);
  require_positive("gap_c_db", raw.gap_c_db);
  require_positive("n0", raw.n0);
  require_positive("sigma2_short", raw.sigma2_short);
  require_positive("sigma2_cell", raw.sigma2_cell);
  require_positive("rho", raw.rho);
  require_finite("p_out_target", raw.p_out_target);
  if (!(raw.p_out_target > 0.0 && raw.p_out_target < 1.0)) {
    throw ValidationError("p_out_target", Kind::OutOfRange,
                          "must lie in (0, 1), got " + std::to_string(raw.p_out_target));
  }
  require_positive("rate", raw.rate);

  LinearParams lp;
  lp.base = raw;
  lp.lambda_s = wavelength(raw.f_s);
  lp.lambda_c = wavelength(raw.f_c);
  lp.g_u1 = db_to_linear(raw.G_u1_db);
  lp.g_u2 = db_to_linear(raw.G_u2_db);
  lp.g_bs = db_to_linear(raw.G_bs_db);
  lp.delta_s = db_to_linear(raw.gap_s_db);
  lp.delta_c = db_to_linear(raw.gap_c_db);
  return lp;
}

std::span<const ParamField> param_fields() { return kFields; }

void set_param(SystemParams& params, std::string_view key, double value) {
  for (const auto& f : kFields) {
    if (f.name == key) {
      params.*(f.member) = value;
      return;
    }
  }
  throw ValidationError(std::string(key), Kind::UnknownKey, "unknown parameter name");
}

}  // namespace nncc

#include "ybm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ybm {

ValidationReport validate(const ModelParams& p) {
  ValidationReport r;
  auto err = [&](const std::string& m) { r.errors.push_back(m); };

  if (!(p.A0 > 0 && p.A1 > p.A0)) err("require 0 < A0 < A1");
  if (!(p.Omega0 > 0 && p.Omega1 > p.Omega0)) err("require 0 < Omega0 < Omega1");
  if (!(p.m0 > 0)) err("require m0 > 0");
  if (!(p.gamma >= 1)) err("require gamma >= 1");
  if (!(p.rho >= 0 && p.rho < 1)) err("require rho in [0, 1)");
  if (!(p.D0 > 0)) err("require D0 > 0");
  if (!(p.alphaD > 0)) err("require alphaD > 0");
  if (!(p.lambdaMkt > 0)) err("require lambdaMkt > 0");
  if (!(p.sigma >= 0)) err("require sigma >= 0");
  if (!(p.P0 > 0)) err("require P0 > 0");
  if (!(p.d > 0)) err("require d > 0");
  if (!(p.R0 >= 0 && p.R0 <= p.R1 && p.R1 <= 1)) {
    err("require 0 <= R0 <= R1 <= 1");
  } else if (p.R0 == 0) {
    // Persistence bounds (Nmin, Smin) degenerate to zero in this case.
    r.warnings.push_back("R0 = 0: persistence lower bounds are void");
  }
  return r;
}

ModelParams preset(std::string_view name) {
  ModelParams p; // defaults are H1
  if (name == "H1") return p;
  if (name == "H2") {
    p.A0 = 0.8;
    p.Omega0 = 0.8;
    p.m0 = 10.0;
    p.gamma = 7.0;
    p.d = 2.0;
    p.alphaD = 2.0;
    return p;
  }
  if (name == "FIG1") {
    p.rho = 0.30;
    p.m0 = 50.0;
    return p;
  }
  throw std::invalid_argument("unknown preset: " + std::string(name));
}

bool isPresetName(std::string_view name) {
  return name == "H1" || name == "H2" || name == "FIG1";
}

double fertility(double N, const ModelParams& p) {
  if (N < 0) throw std::domain_error("fertility: N < 0");
  return p.m0 * std::pow(std::max(N, 1.0), -p.gamma);
}

double seasonality(double t, const ModelParams& p) {
  if (p.rho >= 1) throw std::domain_error("seasonality: rho >= 1");
  const double frac = t - std::floor(t);
  return frac < 1.0 - p.rho ? 1.0 / (1.0 - p.rho) : 0.0;
}

double seasonalityIntegral(double x, double rho) {
  const double fl = std::floor(x);
  const double u = x - fl;
  return fl + std::min(u, 1.0 - rho) / (1.0 - rho);
}

double demand(double P, const ModelParams& p) {
  if (P < 0) throw std::domain_error("demand: P < 0");
  return p.D0 * std::exp(-p.alphaD * P);
}

double breederFraction(double P, const ModelParams& p) {
  if (P < 0) throw std::domain_error("breederFraction: P < 0");
  if (p.P0 <= 0 || p.d <= 0) throw std::domain_error("breederFraction: P0, d must be > 0");
  const double x = P / p.P0;
  const double f = x < 1.0 ? 0.5 * std::pow(x, p.d)
                           : 1.0 / (1.0 + std::exp(-2.0 * p.d * (x - 1.0)));
  return p.R0 + (p.R1 - p.R0) * f;
}

double marketPressure(double D, double S) {
  if (D < 0 || S < 0) throw std::domain_error("marketPressure: negative argument");
  const double tot = D + S;
  if (tot == 0) return 0.0;
  return (D - S) / tot;
}

std::pair<double, double> windowIntegralExtrema(double w0, double w1, double rho) {
  // c(t) = I(t - w0) - I(t - w1) is 1-periodic and piecewise linear in t;
  // its breakpoints are where t - w0 or t - w1 hits the season edges mod 1.
  auto at = [&](double t) {
    return seasonalityIntegral(t - w0, rho) - seasonalityIntegral(t - w1, rho);
  };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = at(static_cast<double>(i) / n);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double edge = 1.0 - rho;
  for (double base : {w0, w1}) {
    for (double off : {0.0, edge}) {
      double t = base + off;
      t -= std::floor(t);
      for (double jitter : {0.0, -1e-12, 1e-12}) {
        const double v = at(t + jitter);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  return {lo, hi};
}

DerivedConstants derivedConstants(const ModelParams& p) {
  DerivedConstants dc;
  auto [c0, c1] = windowIntegralExtrema(p.A0, p.A1, p.rho);
  dc.c0 = c0;
  dc.c1 = c1;
  dc.Nmax = p.m0 * p.R1 * c1;
  dc.L1 = 2.0 * p.m0 * p.R1 / (1.0 - p.rho);
  dc.Nmin = 0.5 * p.m0 * p.R0 * c0 * std::pow(dc.Nmax, 1.0 - p.gamma);
  const auto [om0, om1] = windowIntegralExtrema(p.Omega0, p.Omega1, p.rho);
  const double dOmega = p.Omega1 - p.Omega0;
  dc.Smax = p.m0 * (2.0 - p.R0) / dOmega * om1;
  dc.Smin = p.m0 * (2.0 - p.R1) / (2.0 * dOmega) * std::pow(dc.Nmax, 1.0 - p.gamma) * om0;
  dc.persistenceOK = p.m0 * p.R0 * c0 > 2.0;
  return dc;
}

std::optional<PriceBand> priceBand(const ModelParams& p, const DerivedConstants& dc,
                                   double C) {
  if (C < 1.0) throw std::domain_error("priceBand: C must be >= 1");
  if (!(dc.Smin > 0) || !(p.D0 > dc.Smax)) return std::nullopt;
  const double pMin = std::log(p.D0 / dc.Smax) / p.alphaD;
  const double pMax = std::log(p.D0 / dc.Smin) / p.alphaD;
  return PriceBand{pMin / C, C * pMax};
}

namespace {

std::map<std::string, double ModelParams::*> paramFields() {
  return {
      {"A0", &ModelParams::A0},       {"A1", &ModelParams::A1},
      {"Omega0", &ModelParams::Omega0}, {"Omega1", &ModelParams::Omega1},
      {"m0", &ModelParams::m0},       {"gamma", &ModelParams::gamma},
      {"rho", &ModelParams::rho},     {"D0", &ModelParams::D0},
      {"alphaD", &ModelParams::alphaD}, {"R0", &ModelParams::R0},
      {"R1", &ModelParams::R1},       {"P0", &ModelParams::P0},
      {"d", &ModelParams::d},         {"lambdaMkt", &ModelParams::lambdaMkt},
      {"sigma", &ModelParams::sigma},
  };
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

} // namespace

ModelParams parseModelParams(const std::string& text, ModelParams base) {
  const auto fields = paramFields();
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';' || s[0] == '[') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("parameter file: expected 'key = value', got: " + s);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    const auto it = fields.find(key);
    if (it == fields.end())
      throw std::invalid_argument("parameter file: unknown key: " + key);
    try {
      size_t used = 0;
      const double v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      base.*(it->second) = v;
    } catch (const std::exception&) {
      throw std::invalid_argument("parameter file: bad value for " + key + ": " + val);
    }
  }
  return base;
}

std::string formatModelParams(const ModelParams& p) {
  std::ostringstream out;
  out.precision(17);
  ModelParams tmp = p;
  for (const auto& [key, ptr] : paramFields()) out << key << " = " << tmp.*ptr << "\n";
  return out.str();
}

} // namespace ybm

#pragma once

// Universal competitive-ratio constants.
//
//   gamma_iid : root of I(G) = int_0^1 dy / (y (1 - ln y) + 1/G - 1) = 1
//   alpha     : root of Y(z) = int_z^1 (ln z + 1) / ((ln z + 1)(-x ln x + x) - z) dx + 1/ln z
//   gamma_sel : (ln alpha + 1) / (ln alpha + 1 - alpha)
//   z1        : 1 - alpha, where the curves H and K cross

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace prophet {

// I(G) by adaptive quadrature. Strictly increasing in G.
double gamma_iid_integral(double gamma);
double solve_gamma_iid(double tol = 1e-12);

// Throws std::domain_error for z outside (0, 1).
double y_function(double z);

struct AlphaSolution {
  double alpha = 0.0;
  double gamma_sel = 0.0;
};
AlphaSolution solve_alpha(double tol = 1e-12);

double gamma_from_alpha(double alpha);

// H(z) = G * (-(1-z) ln(1-z)) / (G * (-(1-z) ln(1-z) - z) + 1),  K(z) = G (1-z) / (1 - G z).
double h_function(double gamma, double z);
double k_function(double gamma, double z);

// int_alpha^1 G / (G (-y ln y + y - 1) + 1) dy + 1/ln alpha, which vanishes when
// G = gamma_from_alpha(alpha) and alpha solves Y = 0.
double alpha_consistency_residual(double gamma, double alpha);

struct HkRow {
  double z, h, k;
};

struct HkTable {
  std::vector<HkRow> rows;  // z = j / M, j = 0..M-1
  double z1 = 0.0;
  bool crossing_ok = false;  // H < K before z1 and H > K after, on the grid
  std::vector<std::string> violations;
};

// M >= 2.
HkTable hk_curves(double gamma, double alpha, std::size_t m);
void write_hk_csv(std::ostream& out, const HkTable& table);

struct Constants {
  double gamma_iid = 0.0;
  double alpha = 0.0;
  double gamma_sel = 0.0;
  double z1 = 0.0;
  double residual_gamma_iid = 0.0;    // |I(gamma_iid) - 1|
  double residual_alpha = 0.0;        // |Y(alpha)|
  double residual_consistency = 0.0;  // |alpha_consistency_residual|
};

// Solved once per process and cached.
const Constants& constants();

std::string constants_to_json(const Constants& c);

}  // namespace prophet

#pragma once

#include <span>
#include <string>
#include <vector>

namespace qkdjam {

/// One constituent of a dielectric medium, in the gram-based units the
/// electron-density formula is stated in (converted nowhere else).
struct Constituent {
  std::string name;
  double fraction = 0.0;               // fractional composition, [0, 1]
  double electrons_per_molecule = 0.0; // integer-valued, >= 1
  double mass_density_g_per_m3 = 0.0;  // medium mass density attributed here
  double molar_mass_g_per_mol = 0.0;
};

enum class MediumKind { DielectricComposition, FiberEmpirical, DirectVerdet };

/// A medium the photons traverse, with everything needed to evaluate its
/// Verdet constant at the configured wavelength.
///
/// Composition media use the dielectric formula with n and the constituent
/// list; fiber media use the empirical fit V = a * 1e-28 * (c/lambda)^2;
/// direct media carry a Verdet constant verbatim. Dispersion n(lambda) is
/// not modeled: n is whatever the preset stores for its wavelength.
struct MediumSpec {
  std::string name;
  MediumKind kind = MediumKind::DirectVerdet;
  std::vector<Constituent> constituents; // composition kind
  double refractive_index = 0.0;         // composition kind, > 1
  double fiber_a_coeff = 0.0;            // fiber kind, in 1e-28 rad s^2 T^-1 m^-1
  double verdet_rad_per_T_m = 0.0;       // direct kind
  double wavelength_m = 0.0;

  /// Verdet constant at the configured wavelength, rad T^-1 m^-1.
  double verdet() const;
  /// Electron number density, 1/m^3 (composition kind only).
  double electron_density_per_m3() const;
};

/// Throws std::domain_error when a MediumSpec violates its invariants.
/// Composition fractions may sum to anything in (0, 1.005]: trace
/// constituents may be omitted, and up to 0.5% excess is accepted as-is
/// (standard air tables sum to 1.001) rather than renormalized.
void validate(const MediumSpec& medium);

/// Uniform field region along the propagation direction. b0 is the field
/// component parallel to propagation and may be negative (antiparallel
/// field reverses the rotation sense).
struct FieldRegion {
  double b0_tesla = 0.0;
  double length_m = 0.0;
};

/// Electron number density rho = N_A * sum_i f_i y_i mu_i / m_i, in 1/m^3.
/// Throws std::domain_error on an empty list or invalid constituent.
double electron_density(std::span<const Constituent> constituents);

/// Verdet constant of a dielectric:
/// V = (n^2 - 1)^2 / n * 2 pi^2 c eps0 / (rho e lambda^2).
/// Requires n > 1, rho > 0, lambda > 0.
double verdet_dielectric(double refractive_index, double electron_density_per_m3,
                         double wavelength_m);

/// Empirical fiber Verdet fit V = a * 1e-28 * (c/lambda)^2.
/// Requires lambda > 0, a > 0.
double verdet_fiber(double wavelength_m, double a_coeff);

/// Faraday rotation angle beta = V * B0 * L, signed with B0.
double faraday_angle(double verdet_rad_per_T_m, const FieldRegion& region);

/// Electric field magnitude that shifts the refractive index by delta_n
/// through the Kerr effect: E0 = sqrt(delta_n / (lambda K)). delta_n may
/// be zero; lambda and K must be positive.
double kerr_field_for_index_shift(double wavelength_m,
                                  double kerr_constant_m_per_V2,
                                  double delta_n);

} // namespace qkdjam

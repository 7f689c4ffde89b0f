#include "qkdjam/faraday.hpp"

#include <cmath>
#include <stdexcept>

#include "qkdjam/constants.hpp"

namespace qkdjam {

namespace {

constexpr double kFractionExcess = 0.005; // accept sums up to 1.005 as-is

void check_constituent(const Constituent& c) {
  if (!(c.fraction >= 0.0 && c.fraction <= 1.0)) {
    throw std::domain_error("Constituent " + c.name +
                            ": fraction must lie in [0, 1]");
  }
  if (!(c.electrons_per_molecule >= 1.0)) {
    throw std::domain_error("Constituent " + c.name +
                            ": electrons per molecule must be >= 1");
  }
  if (!(c.mass_density_g_per_m3 > 0.0)) {
    throw std::domain_error("Constituent " + c.name +
                            ": mass density must be positive");
  }
  if (!(c.molar_mass_g_per_mol > 0.0)) {
    throw std::domain_error("Constituent " + c.name +
                            ": molar mass must be positive");
  }
}

} // namespace

double electron_density(std::span<const Constituent> constituents) {
  if (constituents.empty()) {
    throw std::domain_error("electron_density: empty constituent list");
  }
  double moles_of_electrons_per_m3 = 0.0;
  for (const Constituent& c : constituents) {
    check_constituent(c);
    moles_of_electrons_per_m3 += c.fraction * c.electrons_per_molecule *
                                 c.mass_density_g_per_m3 /
                                 c.molar_mass_g_per_mol;
  }
  return constants::avogadro_per_mol * moles_of_electrons_per_m3;
}

double verdet_dielectric(double refractive_index, double electron_density_per_m3,
                         double wavelength_m) {
  if (!(refractive_index > 1.0)) {
    throw std::domain_error("verdet_dielectric: refractive index must be > 1");
  }
  if (!(electron_density_per_m3 > 0.0)) {
    throw std::domain_error("verdet_dielectric: electron density must be > 0");
  }
  if (!(wavelength_m > 0.0)) {
    throw std::domain_error("verdet_dielectric: wavelength must be > 0");
  }
  const double n = refractive_index;
  const double n2m1 = n * n - 1.0;
  using namespace constants;
  return (n2m1 * n2m1 / n) * 2.0 * pi * pi * speed_of_light_m_per_s *
         vacuum_permittivity_F_per_m /
         (electron_density_per_m3 * electron_charge_C * wavelength_m *
          wavelength_m);
}

double verdet_fiber(double wavelength_m, double a_coeff) {
  if (!(wavelength_m > 0.0)) {
    throw std::domain_error("verdet_fiber: wavelength must be > 0");
  }
  if (!(a_coeff > 0.0)) {
    throw std::domain_error("verdet_fiber: coefficient must be > 0");
  }
  const double nu = constants::speed_of_light_m_per_s / wavelength_m;
  return a_coeff * 1e-28 * nu * nu;
}

double faraday_angle(double verdet_rad_per_T_m, const FieldRegion& region) {
  if (!(region.length_m >= 0.0)) {
    throw std::domain_error("faraday_angle: length must be >= 0");
  }
  if (!std::isfinite(region.b0_tesla)) {
    throw std::domain_error("faraday_angle: non-finite field");
  }
  return verdet_rad_per_T_m * region.b0_tesla * region.length_m;
}

double kerr_field_for_index_shift(double wavelength_m,
                                  double kerr_constant_m_per_V2,
                                  double delta_n) {
  if (!(wavelength_m > 0.0) || !(kerr_constant_m_per_V2 > 0.0)) {
    throw std::domain_error(
        "kerr_field_for_index_shift: wavelength and Kerr constant must be > 0");
  }
  if (!(delta_n >= 0.0)) {
    throw std::domain_error("kerr_field_for_index_shift: delta_n must be >= 0");
  }
  return std::sqrt(delta_n / (wavelength_m * kerr_constant_m_per_V2));
}

double MediumSpec::verdet() const {
  switch (kind) {
    case MediumKind::DielectricComposition:
      return verdet_dielectric(refractive_index, electron_density_per_m3(),
                               wavelength_m);
    case MediumKind::FiberEmpirical:
      return verdet_fiber(wavelength_m, fiber_a_coeff);
    case MediumKind::DirectVerdet:
      return verdet_rad_per_T_m;
  }
  throw std::domain_error("MediumSpec: unknown kind");
}

double MediumSpec::electron_density_per_m3() const {
  if (kind != MediumKind::DielectricComposition) {
    throw std::domain_error("MediumSpec " + name +
                            ": electron density needs a composition medium");
  }
  return electron_density(constituents);
}

void validate(const MediumSpec& medium) {
  switch (medium.kind) {
    case MediumKind::DielectricComposition: {
      if (medium.constituents.empty()) {
        throw std::domain_error("MediumSpec " + medium.name +
                                ": composition medium needs constituents");
      }
      double sum = 0.0;
      for (const Constituent& c : medium.constituents) {
        check_constituent(c);
        sum += c.fraction;
      }
      if (sum > 1.0 + kFractionExcess) {
        throw std::domain_error("MediumSpec " + medium.name +
                                ": constituent fractions sum above 1.005");
      }
      if (!(medium.refractive_index > 1.0)) {
        throw std::domain_error("MediumSpec " + medium.name +
                                ": refractive index must be > 1");
      }
      break;
    }
    case MediumKind::FiberEmpirical:
      if (!(medium.fiber_a_coeff > 0.0)) {
        throw std::domain_error("MediumSpec " + medium.name +
                                ": fiber coefficient must be > 0");
      }
      break;
    case MediumKind::DirectVerdet:
      if (!(medium.verdet_rad_per_T_m > 0.0)) {
        throw std::domain_error("MediumSpec " + medium.name +
                                ": Verdet constant must be > 0");
      }
      // wavelength is informational for direct media
      return;
  }
  if (!(medium.wavelength_m > 0.0)) {
    throw std::domain_error("MediumSpec " + medium.name +
                            ": wavelength must be > 0");
  }
}

} // namespace qkdjam

#pragma once

#include <optional>

namespace sparq::channel {

// Dimensionless optical transmissivity, validated to lie in [0, 1].
// Values within 1e-12 of the interval are clamped; anything further out
// is rejected.
class Transmissivity {
public:
    explicit Transmissivity(double value);
    double value() const { return value_; }

private:
    double value_;
};

// Fiber channel described by a natural-exponent attenuation rate (1/km).
struct FiberParams {
    double attenuation_per_km = 0.0;
};

// Free-space optical channel parameters. Lengths in metres.
// curvature_radius_m == nullopt models a collimated beam (infinite initial
// radius of curvature).
struct FsoParams {
    double aperture_radius_m = 5.0;
    double waist_radius_m = 0.2;
    double wavelength_m = 800e-9;
    std::optional<double> curvature_radius_m = std::nullopt;
    double sea_level_extinction_per_m = 5e-6;
    double inner_scale_m = 1e-3;
    double cn2 = 1e-15;  // refractive index structure constant, m^(-2/3)
    double receiver_efficiency = 1.0;

    // Throws std::domain_error when a field is outside its physical range.
    void validate() const;
};

// Converts a 10*log10 attenuation figure (dB/km) to the natural-exponent
// rate (1/km) used by fiber_transmissivity.
double db_per_km_to_rate(double db_per_km);

// eta = exp(-attenuation * length)
Transmissivity fiber_transmissivity(double attenuation_per_km, double length_km);

// Beer-Lambert extinction with an exponential altitude falloff (6.6 km
// scale height). altitude_m is the altitude of the densest air the beam
// traverses.
Transmissivity atmospheric_transmissivity(const FsoParams& params, double path_length_m,
                                          double altitude_m);

// Spot size of a Gaussian beam after propagating z metres.
double diffracted_beam_waist(const FsoParams& params, double z_m);

// Scintillation strength over a path of length z.
double rytov_variance(const FsoParams& params, double z_m);

// Fraction of the long-term-broadened beam captured by the receiver
// aperture. z must be strictly positive; zero-length links are the
// caller's special case (no broadening, eta = 1).
Transmissivity turbulence_transmissivity(const FsoParams& params, double z_m);

// Product of turbulence capture, receiver efficiency and atmospheric
// extinction.
Transmissivity fso_transmissivity(const FsoParams& params, double z_m, double altitude_m);

}  // namespace sparq::channel

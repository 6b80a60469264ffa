#include "sparq/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sparq::channel {

namespace {

constexpr double kClampTol = 1e-12;
constexpr double kExtinctionScaleHeightM = 6600.0;

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw std::domain_error(what);
    }
}

}  // namespace

Transmissivity::Transmissivity(double value) {
    require(std::isfinite(value), "transmissivity must be finite");
    require(value >= -kClampTol && value <= 1.0 + kClampTol,
            "transmissivity " + std::to_string(value) + " outside [0, 1]");
    value_ = std::min(1.0, std::max(0.0, value));
}

void FsoParams::validate() const {
    require(aperture_radius_m > 0.0, "aperture radius must be positive");
    require(waist_radius_m > 0.0, "initial beam waist must be positive");
    require(wavelength_m > 0.0, "wavelength must be positive");
    if (curvature_radius_m) {
        require(*curvature_radius_m > 0.0 && std::isfinite(*curvature_radius_m),
                "curvature radius must be a positive finite value when set");
    }
    require(sea_level_extinction_per_m >= 0.0, "sea-level extinction must be non-negative");
    require(inner_scale_m > 0.0, "turbulence inner scale must be positive");
    require(cn2 >= 0.0, "Cn2 must be non-negative");
    require(receiver_efficiency >= 0.0 && receiver_efficiency <= 1.0,
            "receiver efficiency must lie in [0, 1]");
}

double db_per_km_to_rate(double db_per_km) {
    require(db_per_km >= 0.0, "attenuation in dB/km must be non-negative");
    return db_per_km * std::log(10.0) / 10.0;
}

Transmissivity fiber_transmissivity(double attenuation_per_km, double length_km) {
    require(attenuation_per_km >= 0.0, "fiber attenuation must be non-negative");
    require(length_km >= 0.0, "fiber length must be non-negative");
    return Transmissivity(std::exp(-attenuation_per_km * length_km));
}

Transmissivity atmospheric_transmissivity(const FsoParams& params, double path_length_m,
                                          double altitude_m) {
    params.validate();
    require(path_length_m >= 0.0, "path length must be non-negative");
    require(altitude_m >= 0.0, "altitude must be non-negative");
    const double extinction =
        params.sea_level_extinction_per_m * std::exp(-altitude_m / kExtinctionScaleHeightM);
    return Transmissivity(std::exp(-extinction * path_length_m));
}

double diffracted_beam_waist(const FsoParams& params, double z_m) {
    params.validate();
    require(z_m >= 0.0, "propagation distance must be non-negative");
    const double rayleigh_length =
        M_PI * params.waist_radius_m * params.waist_radius_m / params.wavelength_m;
    const double diffraction = z_m / rayleigh_length;
    // A collimated beam has no curvature term.
    double curvature = 1.0;
    if (params.curvature_radius_m) {
        const double c = 1.0 - z_m / *params.curvature_radius_m;
        curvature = c * c;
    }
    return params.waist_radius_m * std::sqrt(curvature + diffraction * diffraction);
}

double rytov_variance(const FsoParams& params, double z_m) {
    params.validate();
    require(z_m >= 0.0, "propagation distance must be non-negative");
    const double k = 2.0 * M_PI / params.wavelength_m;
    return 2.25 * params.cn2 * std::pow(k, 7.0 / 6.0) * std::pow(z_m, 11.0 / 6.0);
}

Transmissivity turbulence_transmissivity(const FsoParams& params, double z_m) {
    params.validate();
    require(z_m > 0.0, "turbulence capture is undefined for a zero-length path");
    const double k = 2.0 * M_PI / params.wavelength_m;
    const double w_z = diffracted_beam_waist(params, z_m);
    const double sigma2 = rytov_variance(params, z_m);
    const double beam_param = 2.0 * z_m / (k * w_z * w_z);
    const double m = 35.05 * z_m / (k * params.inner_scale_m * params.inner_scale_m);
    const double q = 0.74 * sigma2 * std::pow(m, 1.0 / 6.0);
    // Long-term beam waist: diffraction spot size broadened by turbulence.
    const double w_lt = w_z * std::sqrt(1.0 + (4.0 / 3.0) * q * beam_param);
    const double a = params.aperture_radius_m;
    return Transmissivity(1.0 - std::exp(-2.0 * a * a / (w_lt * w_lt)));
}

Transmissivity fso_transmissivity(const FsoParams& params, double z_m, double altitude_m) {
    const double turbulence = turbulence_transmissivity(params, z_m).value();
    const double atmosphere = atmospheric_transmissivity(params, z_m, altitude_m).value();
    return Transmissivity(turbulence * params.receiver_efficiency * atmosphere);
}

}  // namespace sparq::channel

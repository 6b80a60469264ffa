#include "sparq/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sparq::topo {

namespace {

constexpr double kDegToRad = M_PI / 180.0;
constexpr double kRadToDeg = 180.0 / M_PI;

double wrap_longitude_deg(double lon) {
    lon = std::fmod(lon + 180.0, 360.0);
    if (lon < 0.0) {
        lon += 360.0;
    }
    return lon - 180.0;
}

double norm(const Vec3& v) {
    return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

}  // namespace

Vec3 propagate_satellite_eci(const OrbitSpec& orbit, double t_s) {
    const double r = kOrbitRadiusBaseM + orbit.altitude_km * 1000.0;
    const double mean_motion = std::sqrt(kMuEarth / (r * r * r));
    const double u = mean_motion * t_s;  // argument of latitude
    const double inc = orbit.inclination_deg * kDegToRad;
    const double raan = orbit.raan_deg * kDegToRad;
    const double cu = std::cos(u), su = std::sin(u);
    const double ci = std::cos(inc), si = std::sin(inc);
    const double co = std::cos(raan), so = std::sin(raan);
    return Vec3{r * (co * cu - so * su * ci), r * (so * cu + co * su * ci), r * su * si};
}

Geodetic propagate_satellite(const OrbitSpec& orbit, double t_s) {
    const Vec3 p = propagate_satellite_eci(orbit, t_s);
    const double r = norm(p);
    Geodetic out;
    out.latitude_deg = std::asin(std::clamp(p.z / r, -1.0, 1.0)) * kRadToDeg;
    const double inertial_lon = std::atan2(p.y, p.x);
    out.longitude_deg = wrap_longitude_deg((inertial_lon - kEarthRotationRadPerS * t_s) * kRadToDeg);
    out.altitude_m = orbit.altitude_km * 1000.0;
    return out;
}

Vec3 geodetic_to_ecef(const Geodetic& position) {
    const double r = kEarthRadiusM + position.altitude_m;
    const double lat = position.latitude_deg * kDegToRad;
    const double lon = position.longitude_deg * kDegToRad;
    return Vec3{r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon),
                r * std::sin(lat)};
}

double link_distance_m(const Node& a, const Node& b) {
    const Vec3 pa = geodetic_to_ecef(a.position);
    const Vec3 pb = geodetic_to_ecef(b.position);
    const double dx = pa.x - pb.x, dy = pa.y - pb.y, dz = pa.z - pb.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool line_of_sight(const Node& a, const Node& b) {
    const Vec3 pa = geodetic_to_ecef(a.position);
    const Vec3 pb = geodetic_to_ecef(b.position);
    const Vec3 d{pb.x - pa.x, pb.y - pa.y, pb.z - pa.z};
    const double len2 = d.x * d.x + d.y * d.y + d.z * d.z;
    if (len2 == 0.0) {
        return true;
    }
    // Closest approach of the segment to the Earth's centre.
    double t = -(pa.x * d.x + pa.y * d.y + pa.z * d.z) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const Vec3 closest{pa.x + t * d.x, pa.y + t * d.y, pa.z + t * d.z};
    return norm(closest) >= kEarthRadiusM - 1e-6;
}

ChannelKind edge_channel(const Node& a, const Node& b) {
    return (a.kind == NodeKind::Ground && b.kind == NodeKind::Ground) ? ChannelKind::Fiber
                                                                      : ChannelKind::Fso;
}

void NetworkConfig::validate() const {
    auto check_geodetic = [](const Geodetic& g) {
        if (g.latitude_deg < -90.0 || g.latitude_deg > 90.0 || g.longitude_deg < -180.0 ||
            g.longitude_deg > 180.0 || g.altitude_m < 0.0) {
            throw std::invalid_argument("node position outside valid geodetic ranges");
        }
    };
    for (const Geodetic& g : ground_nodes) check_geodetic(g);
    for (const Geodetic& g : haps) check_geodetic(g);
    for (const OrbitSpec& o : satellites) {
        if (o.inclination_deg < 0.0 || o.inclination_deg > 180.0 || o.raan_deg < 0.0 ||
            o.raan_deg >= 360.0 || o.altitude_km <= 0.0) {
            throw std::invalid_argument("satellite orbit outside valid ranges");
        }
    }
    if (fiber_attenuation_db_per_km < 0.0) {
        throw std::invalid_argument("fiber attenuation must be non-negative");
    }
    if (threshold < 0.0 || threshold > 1.0) {
        throw std::invalid_argument("transmissivity threshold must lie in [0, 1]");
    }
    if (step_seconds <= 0.0) {
        throw std::invalid_argument("step_seconds must be positive");
    }
    if (max_degree < 1) {
        throw std::invalid_argument("max_degree must be at least 1");
    }
    fso.validate();
}

std::vector<Node> NetworkConfig::build_nodes() const {
    std::vector<Node> nodes;
    nodes.reserve(ground_nodes.size() + haps.size() + satellites.size());
    int id = 0;
    for (const Geodetic& g : ground_nodes) {
        nodes.push_back(Node{id++, NodeKind::Ground, g, std::nullopt});
    }
    for (const Geodetic& g : haps) {
        nodes.push_back(Node{id++, NodeKind::Hap, g, std::nullopt});
    }
    for (const OrbitSpec& o : satellites) {
        nodes.push_back(Node{id++, NodeKind::Satellite, propagate_satellite(o, 0.0), o});
    }
    return nodes;
}

NetworkConfig NetworkConfig::from_json(const nlohmann::json& doc) {
    NetworkConfig config;
    auto read_geodetic = [](const nlohmann::json& j) {
        Geodetic g;
        g.latitude_deg = j.at("lat").get<double>();
        g.longitude_deg = j.at("lon").get<double>();
        g.altitude_m = j.value("alt_m", 0.0);
        return g;
    };
    for (const auto& j : doc.at("ground_nodes")) {
        config.ground_nodes.push_back(read_geodetic(j));
    }
    for (const auto& j : doc.value("haps", nlohmann::json::array())) {
        config.haps.push_back(read_geodetic(j));
    }
    for (const auto& j : doc.value("satellites", nlohmann::json::array())) {
        OrbitSpec o;
        o.inclination_deg = j.at("inclination_deg").get<double>();
        o.raan_deg = j.at("raan_deg").get<double>();
        o.altitude_km = j.at("altitude_km").get<double>();
        config.satellites.push_back(o);
    }
    if (doc.contains("fiber")) {
        config.fiber_attenuation_db_per_km = doc["fiber"].value("alpha_db_per_km", 0.15);
    }
    if (doc.contains("fso")) {
        const auto& f = doc["fso"];
        config.fso.aperture_radius_m = f.value("a_R", config.fso.aperture_radius_m);
        config.fso.waist_radius_m = f.value("w0", config.fso.waist_radius_m);
        config.fso.wavelength_m = f.value("lambda", config.fso.wavelength_m);
        if (f.contains("R0") && !f["R0"].is_null()) {
            config.fso.curvature_radius_m = f["R0"].get<double>();
        } else {
            config.fso.curvature_radius_m = std::nullopt;
        }
        config.fso.sea_level_extinction_per_m = f.value("alpha0", config.fso.sea_level_extinction_per_m);
        config.fso.inner_scale_m = f.value("l0", config.fso.inner_scale_m);
        config.fso.cn2 = f.value("Cn2", config.fso.cn2);
        config.fso.receiver_efficiency = f.value("eta_eff", config.fso.receiver_efficiency);
    }
    config.threshold = doc.value("threshold", 0.7);
    config.check_los = doc.value("check_los", true);
    config.step_seconds = doc.value("step_seconds", 30.0);
    config.max_degree = doc.value("max_degree", 24);
    config.validate();
    return config;
}

NetworkConfig NetworkConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open network config: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed network config " + path + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json NetworkConfig::to_json() const {
    nlohmann::json doc;
    doc["ground_nodes"] = nlohmann::json::array();
    for (const Geodetic& g : ground_nodes) {
        doc["ground_nodes"].push_back({{"lat", g.latitude_deg}, {"lon", g.longitude_deg},
                                       {"alt_m", g.altitude_m}});
    }
    doc["haps"] = nlohmann::json::array();
    for (const Geodetic& g : haps) {
        doc["haps"].push_back({{"lat", g.latitude_deg}, {"lon", g.longitude_deg},
                               {"alt_m", g.altitude_m}});
    }
    doc["satellites"] = nlohmann::json::array();
    for (const OrbitSpec& o : satellites) {
        doc["satellites"].push_back({{"inclination_deg", o.inclination_deg},
                                     {"raan_deg", o.raan_deg},
                                     {"altitude_km", o.altitude_km}});
    }
    doc["fiber"] = {{"alpha_db_per_km", fiber_attenuation_db_per_km}};
    doc["fso"] = {{"a_R", fso.aperture_radius_m},
                  {"w0", fso.waist_radius_m},
                  {"lambda", fso.wavelength_m},
                  {"alpha0", fso.sea_level_extinction_per_m},
                  {"l0", fso.inner_scale_m},
                  {"Cn2", fso.cn2},
                  {"eta_eff", fso.receiver_efficiency}};
    doc["fso"]["R0"] =
        fso.curvature_radius_m ? nlohmann::json(*fso.curvature_radius_m) : nlohmann::json();
    doc["threshold"] = threshold;
    doc["check_los"] = check_los;
    doc["step_seconds"] = step_seconds;
    doc["max_degree"] = max_degree;
    return doc;
}

GraphSnapshot snapshot(const NetworkConfig& config, double t_s, double threshold) {
    config.validate();
    if (threshold < 0.0 || threshold > 1.0) {
        throw std::invalid_argument("transmissivity threshold must lie in [0, 1]");
    }
    GraphSnapshot snap;
    snap.time_s = t_s;
    snap.nodes = config.build_nodes();
    for (Node& node : snap.nodes) {
        if (node.kind == NodeKind::Satellite) {
            node.position = propagate_satellite(*node.orbit, t_s);
        }
    }
    const double fiber_rate = channel::db_per_km_to_rate(config.fiber_attenuation_db_per_km);
    const int n = static_cast<int>(snap.nodes.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Node& a = snap.nodes[i];
            const Node& b = snap.nodes[j];
            const ChannelKind kind = edge_channel(a, b);
            const double distance = link_distance_m(a, b);
            double eta = 0.0;
            if (kind == ChannelKind::Fiber) {
                eta = channel::fiber_transmissivity(fiber_rate, distance / 1000.0).value();
            } else {
                if (config.check_los && !line_of_sight(a, b)) {
                    continue;
                }
                // Extinction is dominated by the densest air on the path.
                const double h0 = std::min(a.position.altitude_m, b.position.altitude_m);
                if (distance == 0.0) {
                    eta = config.fso.receiver_efficiency;
                } else {
                    eta = channel::fso_transmissivity(config.fso, distance, h0).value();
                }
            }
            if (eta >= threshold) {
                snap.edges.push_back(Edge{i, j, eta, kind});
            }
        }
    }
    return snap;
}

GraphSnapshot snapshot(const NetworkConfig& config, double t_s) {
    return snapshot(config, t_s, config.threshold);
}

std::vector<GraphSnapshot> snapshot_series(const NetworkConfig& config, double t0_s, double dt_s,
                                           int count) {
    if (count < 1) {
        throw std::invalid_argument("snapshot series needs at least one step");
    }
    std::vector<GraphSnapshot> series;
    series.reserve(count);
    for (int i = 0; i < count; ++i) {
        series.push_back(snapshot(config, t0_s + i * dt_s));
    }
    return series;
}

}  // namespace sparq::topo

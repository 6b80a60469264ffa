#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sparq/channel.hpp"

namespace sparq::topo {

// Spherical-Earth radius used for positions, link geometry and
// line-of-sight checks.
constexpr double kEarthRadiusM = 6371e3;
// Circular orbits are propagated about the equatorial radius so that a
// 500 km orbit has its conventional ~94.6-minute period.
constexpr double kOrbitRadiusBaseM = 6378.137e3;
constexpr double kMuEarth = 3.986004418e14;           // m^3/s^2
constexpr double kEarthRotationRadPerS = 7.2921159e-5;

struct Geodetic {
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    double altitude_m = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

enum class NodeKind { Ground, Hap, Satellite };

struct OrbitSpec {
    double inclination_deg = 0.0;  // [0, 180]
    double raan_deg = 0.0;         // [0, 360)
    double altitude_km = 0.0;
};

struct Node {
    int id = 0;
    NodeKind kind = NodeKind::Ground;
    Geodetic position;
    std::optional<OrbitSpec> orbit;  // satellites only
};

enum class ChannelKind { Fiber, Fso };

struct Edge {
    int a = 0;  // a < b
    int b = 0;
    double transmissivity = 0.0;
    ChannelKind channel = ChannelKind::Fiber;
};

// The network at one instant: node positions plus the threshold-gated
// undirected edge set.
struct GraphSnapshot {
    double time_s = 0.0;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
};

// Inertial position of a satellite on a circular two-body orbit with the
// ascending node crossed at t = 0.
Vec3 propagate_satellite_eci(const OrbitSpec& orbit, double t_s);

// Geodetic position at time t; longitude is corrected for Earth rotation
// and the reported altitude is the (constant) orbit altitude.
Geodetic propagate_satellite(const OrbitSpec& orbit, double t_s);

Vec3 geodetic_to_ecef(const Geodetic& position);

// Euclidean chord distance between node positions.
double link_distance_m(const Node& a, const Node& b);

// True when the segment between the two nodes does not dip below the
// Earth sphere (endpoint contact does not count as blockage).
bool line_of_sight(const Node& a, const Node& b);

// Fiber between two ground nodes, free-space optics otherwise.
ChannelKind edge_channel(const Node& a, const Node& b);

struct NetworkConfig {
    std::vector<Geodetic> ground_nodes;
    std::vector<Geodetic> haps;
    std::vector<OrbitSpec> satellites;
    double fiber_attenuation_db_per_km = 0.15;
    channel::FsoParams fso;
    double threshold = 0.7;
    bool check_los = true;
    double step_seconds = 30.0;
    int max_degree = 24;

    static NetworkConfig from_json(const nlohmann::json& doc);
    static NetworkConfig load(const std::string& path);
    nlohmann::json to_json() const;

    // Nodes in id order: ground nodes, then HAPs, then satellites.
    std::vector<Node> build_nodes() const;

    // Throws std::invalid_argument on out-of-range fields.
    void validate() const;
};

GraphSnapshot snapshot(const NetworkConfig& config, double t_s, double threshold);
GraphSnapshot snapshot(const NetworkConfig& config, double t_s);
std::vector<GraphSnapshot> snapshot_series(const NetworkConfig& config, double t0_s, double dt_s,
                                           int count);

}  // namespace sparq::topo

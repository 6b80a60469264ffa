#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "doctest.h"
#include "sparq/topology.hpp"

using namespace sparq;
using namespace sparq::topo;

namespace {

Node make_node(int id, NodeKind kind, double lat, double lon, double alt_m) {
    return Node{id, kind, Geodetic{lat, lon, alt_m}, std::nullopt};
}

double circular_period_s(double altitude_km) {
    const double r = kOrbitRadiusBaseM + altitude_km * 1000.0;
    return 2.0 * M_PI * std::sqrt(r * r * r / kMuEarth);
}

// Dense sampling of the segment as an independent check of the blockage
// geometry.
double sampled_min_radius(const Node& a, const Node& b) {
    const Vec3 pa = geodetic_to_ecef(a.position);
    const Vec3 pb = geodetic_to_ecef(b.position);
    double best = 1e18;
    for (int i = 0; i <= 20000; ++i) {
        const double t = i / 20000.0;
        const double x = pa.x + t * (pb.x - pa.x);
        const double y = pa.y + t * (pb.y - pa.y);
        const double z = pa.z + t * (pb.z - pa.z);
        best = std::min(best, std::sqrt(x * x + y * y + z * z));
    }
    return best;
}

NetworkConfig bundled_config() {
    return NetworkConfig::load(std::string(SPARQ_DATA_DIR) + "/network54.json");
}

}  // namespace

TEST_SUITE_BEGIN("topology");

TEST_CASE("geodetic to ecef") {
    const Vec3 origin = geodetic_to_ecef(Geodetic{0.0, 0.0, 0.0});
    CHECK(origin.x == doctest::Approx(6371000.0).epsilon(1e-12));
    CHECK(origin.y == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    CHECK(origin.z == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));

    const Vec3 pole = geodetic_to_ecef(Geodetic{90.0, 0.0, 0.0});
    CHECK(std::abs(pole.x) < 1e-6);
    CHECK(std::abs(pole.z - 6371000.0) < 1e-6);

    const Vec3 east = geodetic_to_ecef(Geodetic{0.0, 90.0, 500000.0});
    CHECK(std::abs(east.x) < 1e-6);
    CHECK(std::abs(east.y - 6871000.0) < 1e-6);
    CHECK(std::abs(east.z) < 1e-6);
}

TEST_CASE("link distances") {
    const Node a = make_node(0, NodeKind::Ground, 0.0, 0.0, 0.0);
    CHECK(link_distance_m(a, a) == 0.0);
    const Node antipode = make_node(1, NodeKind::Ground, 0.0, 180.0, 0.0);
    CHECK(link_distance_m(a, antipode) == doctest::Approx(2.0 * 6371000.0).epsilon(1e-12));
    const Node overhead = make_node(2, NodeKind::Satellite, 0.0, 0.0, 500000.0);
    CHECK(link_distance_m(a, overhead) == doctest::Approx(500000.0).epsilon(1e-12));
}

TEST_CASE("line of sight") {
    const Node ground = make_node(0, NodeKind::Ground, 0.0, 0.0, 0.0);
    const Node overhead = make_node(1, NodeKind::Satellite, 0.0, 0.0, 500000.0);
    CHECK(line_of_sight(ground, overhead));

    const Node far_side = make_node(2, NodeKind::Ground, 0.0, 180.0, 0.0);
    CHECK_FALSE(line_of_sight(ground, far_side));

    // Two satellites with a grazing chord; the blockage boundary sits
    // where the chord's closest approach crosses the Earth radius.
    const Node sat_west_clear = make_node(3, NodeKind::Satellite, 0.0, -21.5, 500000.0);
    const Node sat_east_clear = make_node(4, NodeKind::Satellite, 0.0, 21.5, 500000.0);
    CHECK(sampled_min_radius(sat_west_clear, sat_east_clear) >= kEarthRadiusM);
    CHECK(line_of_sight(sat_west_clear, sat_east_clear));

    const Node sat_west_blocked = make_node(5, NodeKind::Satellite, 0.0, -22.5, 500000.0);
    const Node sat_east_blocked = make_node(6, NodeKind::Satellite, 0.0, 22.5, 500000.0);
    CHECK(sampled_min_radius(sat_west_blocked, sat_east_blocked) < kEarthRadiusM);
    CHECK_FALSE(line_of_sight(sat_west_blocked, sat_east_blocked));
}

TEST_CASE("edge channel kinds") {
    const Node ground_a = make_node(0, NodeKind::Ground, 0.0, 0.0, 0.0);
    const Node ground_b = make_node(1, NodeKind::Ground, 1.0, 1.0, 0.0);
    const Node hap = make_node(2, NodeKind::Hap, 0.0, 0.0, 50000.0);
    const Node sat = make_node(3, NodeKind::Satellite, 0.0, 0.0, 500000.0);
    CHECK(edge_channel(ground_a, ground_b) == ChannelKind::Fiber);
    CHECK(edge_channel(sat, hap) == ChannelKind::Fso);
    CHECK(edge_channel(hap, ground_a) == ChannelKind::Fso);
    CHECK(edge_channel(sat, ground_a) == ChannelKind::Fso);
}

TEST_CASE("equatorial orbit starts on the equator") {
    const OrbitSpec orbit{0.0, 0.0, 500.0};
    const Geodetic at_zero = propagate_satellite(orbit, 0.0);
    CHECK(at_zero.latitude_deg == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(at_zero.longitude_deg == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(at_zero.altitude_m == doctest::Approx(500000.0).epsilon(1e-15));
}

TEST_CASE("orbital period") {
    const double period = circular_period_s(500.0);
    CHECK(std::abs(period - 5676.98) / 5676.98 < 1e-3);
    // Sanity on the rate itself: a quarter period reaches 90 degrees of
    // arc for a polar orbit.
    const OrbitSpec polar{90.0, 0.0, 500.0};
    const Geodetic quarter = propagate_satellite(polar, period / 4.0);
    CHECK(quarter.latitude_deg == doctest::Approx(90.0).epsilon(1e-6));
}

TEST_CASE("polar orbit sweeps the full latitude range") {
    const OrbitSpec polar{90.0, 0.0, 500.0};
    double lowest = 90.0, highest = -90.0;
    const double period = circular_period_s(500.0);
    for (int i = 0; i < 720; ++i) {
        const Geodetic g = propagate_satellite(polar, period * i / 720.0);
        lowest = std::min(lowest, g.latitude_deg);
        highest = std::max(highest, g.latitude_deg);
    }
    CHECK(lowest < -89.5);
    CHECK(highest > 89.5);
}

TEST_CASE("orbit is periodic in the inertial frame") {
    const OrbitSpec orbit{63.4, 211.0, 500.0};
    const double period = circular_period_s(500.0);
    for (double t0 : {0.0, 1234.5, 98765.0}) {
        const Vec3 a = propagate_satellite_eci(orbit, t0);
        const Vec3 b = propagate_satellite_eci(orbit, t0 + period);
        const double radius = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
        CHECK(std::abs(a.x - b.x) / radius < 1e-6);
        CHECK(std::abs(a.y - b.y) / radius < 1e-6);
        CHECK(std::abs(a.z - b.z) / radius < 1e-6);
    }
    // Latitude is frame independent, so it must also return.
    const Geodetic g0 = propagate_satellite(orbit, 0.0);
    const Geodetic g1 = propagate_satellite(orbit, period);
    CHECK(std::abs(g0.latitude_deg - g1.latitude_deg) < 1e-6);
}

TEST_CASE("snapshots are deterministic and well formed") {
    const NetworkConfig config = bundled_config();
    const GraphSnapshot a = snapshot(config, 4321.0);
    const GraphSnapshot b = snapshot(config, 4321.0);
    REQUIRE(a.edges.size() == b.edges.size());
    for (size_t i = 0; i < a.edges.size(); ++i) {
        CHECK(a.edges[i].a == b.edges[i].a);
        CHECK(a.edges[i].b == b.edges[i].b);
        CHECK(a.edges[i].transmissivity == b.edges[i].transmissivity);  // bit identical
    }
    std::set<std::pair<int, int>> seen;
    for (const Edge& edge : a.edges) {
        CHECK(edge.a < edge.b);
        CHECK(edge.transmissivity >= config.threshold);
        CHECK(seen.insert({edge.a, edge.b}).second);
    }
}

TEST_CASE("stored transmissivities match recomputation") {
    const NetworkConfig config = bundled_config();
    const GraphSnapshot snap = snapshot(config, 1800.0);
    const double fiber_rate = channel::db_per_km_to_rate(config.fiber_attenuation_db_per_km);
    for (const Edge& edge : snap.edges) {
        const Node& a = snap.nodes[edge.a];
        const Node& b = snap.nodes[edge.b];
        const double distance = link_distance_m(a, b);
        double expected = 0.0;
        if (edge.channel == ChannelKind::Fiber) {
            expected = channel::fiber_transmissivity(fiber_rate, distance / 1000.0).value();
        } else {
            const double h0 = std::min(a.position.altitude_m, b.position.altitude_m);
            expected = channel::fso_transmissivity(config.fso, distance, h0).value();
        }
        CHECK(std::abs(edge.transmissivity - expected) <= 1e-12);
    }
}

TEST_CASE("threshold gating limits") {
    NetworkConfig config = bundled_config();
    // Keep this cheap: drop the satellites for the complete-graph check.
    config.satellites.clear();
    config.check_los = false;
    const GraphSnapshot everything = snapshot(config, 0.0, 0.0);
    const size_t n = config.ground_nodes.size() + config.haps.size();
    CHECK(everything.edges.size() == n * (n - 1) / 2);

    const GraphSnapshot lossless_only = snapshot(config, 0.0, 1.0);
    for (const Edge& edge : lossless_only.edges) {
        CHECK(edge.transmissivity >= 1.0);
    }
}

TEST_CASE("ground clusters connect by fiber and stay mutually isolated") {
    const NetworkConfig config = bundled_config();
    const GraphSnapshot snap = snapshot(config, 0.0, 0.7);
    // Union-find over fiber edges only.
    std::vector<int> parent(snap.nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const Edge& edge : snap.edges) {
        if (edge.channel == ChannelKind::Fiber) {
            parent[find(edge.a)] = find(edge.b);
        }
    }
    const std::vector<std::vector<int>> clusters = {
        {0, 1, 2, 3, 4, 5}, {6, 7, 8, 9}, {10, 11, 12, 13}, {14, 15},
        {16, 17},           {18, 19},     {20, 21},          {22, 23}};
    for (const auto& cluster : clusters) {
        for (int member : cluster) {
            CHECK(find(member) == find(cluster.front()));
        }
    }
    for (size_t i = 0; i < clusters.size(); ++i) {
        for (size_t j = i + 1; j < clusters.size(); ++j) {
            CHECK(find(clusters[i].front()) != find(clusters[j].front()));
        }
    }
}

TEST_CASE("series steps only move satellite edges") {
    const NetworkConfig config = bundled_config();
    const auto series = snapshot_series(config, 0.0, config.step_seconds, 2);
    REQUIRE(series.size() == 2);
    auto static_edges = [&](const GraphSnapshot& snap) {
        std::set<std::tuple<int, int, double>> out;
        for (const Edge& edge : snap.edges) {
            if (snap.nodes[edge.a].kind != NodeKind::Satellite &&
                snap.nodes[edge.b].kind != NodeKind::Satellite) {
                out.insert({edge.a, edge.b, edge.transmissivity});
            }
        }
        return out;
    };
    CHECK(static_edges(series[0]) == static_edges(series[1]));

    const GraphSnapshot single = snapshot(config, 0.0);
    CHECK(series[0].edges.size() == single.edges.size());
}

TEST_CASE("config validation rejects nonsense") {
    NetworkConfig config = bundled_config();
    config.threshold = 1.5;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = bundled_config();
    config.satellites[0].raan_deg = 380.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = bundled_config();
    config.ground_nodes[0].latitude_deg = 95.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    CHECK_THROWS_AS(snapshot_series(bundled_config(), 0.0, 30.0, 0), std::invalid_argument);
}

TEST_CASE("bundled network matches the published layout") {
    const NetworkConfig config = bundled_config();
    CHECK(config.ground_nodes.size() == 24);
    CHECK(config.haps.size() == 10);
    CHECK(config.satellites.size() == 20);
    for (const Geodetic& hap : config.haps) {
        CHECK(hap.altitude_m == 50000.0);
    }
    for (const OrbitSpec& orbit : config.satellites) {
        CHECK(orbit.altitude_km == 500.0);
    }
    CHECK(config.threshold == 0.7);
}

TEST_SUITE_END();

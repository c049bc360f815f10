#pragma once

#include "support.hpp"

#include "tropitherm/airflow.hpp"
#include "tropitherm/constants.hpp"

#include <cmath>
#include <random>

// Independent oracles shared by the unit tests and the acceptance binary.
namespace tropitherm::testing {

// Midpoint-rule strip integration of the orifice equation over the opening.
struct StripOracle {
  double forward = 0.0, reverse = 0.0;
};
inline StripOracle strip_integrate(const LargeOpeningFlow& o, double bottom, PressureSide from, PressureSide to,
                                   int strips) {
  StripOracle out;
  const double dz = o.height / strips;
  for (int i = 0; i < strips; ++i) {
    const double z = bottom + (i + 0.5) * dz;
    const double dp = (from.datum_pressure - from.density * constants::gravity * z) -
                      (to.datum_pressure - to.density * constants::gravity * z);
    if (dp > 0.0) out.forward += o.discharge_coefficient * o.width * dz * std::sqrt(2.0 * from.density * dp);
    else out.reverse += o.discharge_coefficient * o.width * dz * std::sqrt(2.0 * to.density * -dp);
  }
  return out;
}

/// One room between a windward and a leeward crack.
inline BuildingModel cross_flow_zone(double exponent) {
  BuildingModel m;
  m.zones.push_back(plain_zone("room"));
  m.links.push_back(crack_to_exterior("windward", "room", 0.0, 0.002, exponent));
  m.links.push_back(crack_to_exterior("leeward", "room", 180.0, 0.002, exponent));
  return m;
}

// Random isothermal or stack-driven network over up to five zones.
inline BuildingModel random_network(std::mt19937& rng, std::size_t zones) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BuildingModel m;
  for (std::size_t z = 0; z < zones; ++z) m.zones.push_back(plain_zone("z" + std::to_string(z)));
  int k = 0;
  auto id = [&] { return "l" + std::to_string(k++); };
  for (std::size_t z = 0; z < zones; ++z) {
    const std::string zid = m.zones[z].id;
    // Every zone reaches the exterior, through a crack or an opening.
    const double az = 90.0 * static_cast<int>(4 * u(rng));
    if (u(rng) < 0.5) {
      m.links.push_back(crack_to_exterior(id(), zid, az, 0.001 + 0.01 * u(rng), 0.5 + 0.5 * u(rng),
                                                   0.2 + 2.5 * u(rng)));
    } else {
      AirflowLink l;
      l.id = id();
      l.kind = LargeOpeningFlow{0.3 + u(rng), 0.5 + 1.5 * u(rng), 0.6 + 0.3 * u(rng), true};
      l.from = ExteriorEndpoint{az};
      l.to = ZoneEndpoint{zid};
      l.mid_height = std::get<LargeOpeningFlow>(l.kind).height / 2.0 + u(rng);
      m.links.push_back(l);
    }
    for (std::size_t other = z + 1; other < zones; ++other) {
      if (u(rng) < 0.5) continue;
      if (u(rng) < 0.5) {
        auto l = door(id(), zid, m.zones[other].id, 0.5 + 0.5 * u(rng), 1.8 + 0.4 * u(rng));
        l.mid_height += 0.5 * u(rng);
        m.links.push_back(l);
      } else {
        AirflowLink l;
        l.id = id();
        l.kind = CrackFlow{0.001 + 0.01 * u(rng), 0.5 + 0.5 * u(rng)};
        l.from = ZoneEndpoint{zid};
        l.to = ZoneEndpoint{m.zones[other].id};
        l.mid_height = 0.2 + 2.5 * u(rng);
        m.links.push_back(l);
      }
    }
  }
  return m;
}

} // namespace tropitherm::testing

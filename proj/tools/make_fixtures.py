#!/usr/bin/env python3
"""Generates the bundled building and weather fixtures.

Run from the repository root: python3 tools/make_fixtures.py
"""
import copy
import json
import math
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
BUILDINGS = ROOT / "data" / "buildings"
WEATHER = ROOT / "data" / "weather"

WALL_HEIGHT = 2.7
LIVING_DEPTH = 4.0   # north-south
LIVING_WIDTH = 5.5   # east-west
BED_WIDTH = 2.75
SP = 22.0            # mean principal-room area per facade, m2

MATERIALS = [
    {"name": "steel_sheet", "conductivity": 50.0, "density": 7800.0, "specific_heat": 450.0},
    {"name": "air_gap", "conductivity": 0.31, "density": 1.2, "specific_heat": 1006.0},
    {"name": "plasterboard", "conductivity": 0.25, "density": 900.0, "specific_heat": 1000.0},
    {"name": "insulation", "conductivity": 0.041, "density": 30.0, "specific_heat": 1400.0},
    {"name": "concrete", "conductivity": 1.75, "density": 2300.0, "specific_heat": 920.0},
    {"name": "concrete_block", "conductivity": 1.1, "density": 1300.0, "specific_heat": 1000.0},
]


def layers(*pairs):
    return [{"material": m, "thickness": t} for m, t in pairs]


def constructions(structure, roof_abs, roof_insulation, wall_abs, wall_insulation):
    """Roof, wall, partition and floor constructions; names encode the variant."""
    ins_roof = [("insulation", roof_insulation)] if roof_insulation > 0 else []
    ins_wall = [("insulation", wall_insulation)] if wall_insulation > 0 else []
    if structure == "light":
        roof = layers(("steel_sheet", 0.0007), ("air_gap", 0.05), *ins_roof, ("plasterboard", 0.013))
        wall = layers(("steel_sheet", 0.0007), ("air_gap", 0.05), *ins_wall, ("plasterboard", 0.013))
        partition = layers(("plasterboard", 0.013), ("air_gap", 0.05), ("plasterboard", 0.013))
    else:
        # Same outer resistance as the light envelope; the mass sits on the room side.
        roof = layers(("steel_sheet", 0.0007), ("air_gap", 0.05), *ins_roof, ("concrete", 0.09))
        wall = layers(*ins_wall, ("concrete_block", 0.20), ("plasterboard", 0.013))
        partition = layers(("concrete_block", 0.10))
    roof_name = f"roof_{structure}_a{round(roof_abs * 100)}_i{round(roof_insulation * 100)}"
    wall_name = f"wall_{structure}_a{round(wall_abs * 100)}_i{round(wall_insulation * 100)}"
    return [
        {"name": roof_name, "layers": roof, "exterior_absorptivity": roof_abs, "exterior_emissivity": 0.9},
        {"name": wall_name, "layers": wall, "exterior_absorptivity": wall_abs, "exterior_emissivity": 0.9},
        {"name": "partition", "layers": partition, "exterior_absorptivity": 0.5, "exterior_emissivity": 0.9},
        {"name": "slab", "layers": layers(("concrete", 0.10)), "exterior_absorptivity": 0.5,
         "exterior_emissivity": 0.9},
    ]


def surface(sid, zone, area, azimuth, tilt, construction, boundary="exterior", overhang=None):
    s = {"id": sid, "zone": zone, "area": round(area, 6), "azimuth": azimuth, "tilt": tilt,
         "construction": construction, "boundary": boundary}
    if overhang:
        s["overhang"] = overhang
    return s


def opening(lid, width, height, frm, to, mid):
    return {"id": lid, "kind": "opening", "width": width, "height": height, "discharge_coefficient": 0.78,
            "openable": True, "from": frm, "to": to, "mid_height": mid}


def crack(lid, frm, to, mid, c=0.002):
    return {"id": lid, "kind": "crack", "coefficient": c, "exponent": 0.65, "from": frm, "to": to, "mid_height": mid}


def ext(az):
    return {"exterior": az}


def zone_ref(z):
    return {"zone": z}


LIVING_OPENING_H = 2.0
BED_OPENING_H = 1.6
DOOR_H = 2.0


def dwelling(name, structure, *, roof="exterior", floor="ground", east="exterior", west="exterior",
             roof_abs=0.9, roof_insulation=0.0, wall_abs=0.8, wall_insulation=0.0, wall_overhang=None,
             window_canopy=None, exterior=0.15, interior=0.15, good=False):
    """Three-room dwelling: living room on the North facade, two bedrooms on the South facade."""
    H = WALL_HEIGHT
    wall_oh = {"depth": wall_overhang, "height": H, "gap": 0.0} if wall_overhang else None
    surfaces = []
    cons = constructions(structure, roof_abs, roof_insulation, wall_abs, wall_insulation)
    roof_name, wall_name = cons[0]["name"], cons[1]["name"]
    rooms = {
        "living": {"floor": LIVING_WIDTH * LIVING_DEPTH},
        "bed1": {"floor": BED_WIDTH * LIVING_DEPTH},
        "bed2": {"floor": BED_WIDTH * LIVING_DEPTH},
    }
    for z, r in rooms.items():
        surfaces.append(surface(f"{z}_ceiling", z, r["floor"], 0, 0, roof_name if roof == "exterior" else "slab",
                                roof))
        surfaces.append(surface(f"{z}_floor", z, r["floor"], 0, 180, "slab", floor))

    def side(z, sid, area, az, kind):
        if kind == "exterior":
            surfaces.append(surface(sid, z, area, az, 90, wall_name, "exterior", wall_oh))
        else:
            surfaces.append(surface(sid, z, area, az, 90, "partition", "ground"))

    side("living", "living_north", LIVING_WIDTH * H, 0, "exterior")
    side("living", "living_east", LIVING_DEPTH * H, 90, east)
    side("living", "living_west", LIVING_DEPTH * H, 270, west)
    side("bed1", "bed1_south", BED_WIDTH * H, 180, "exterior")
    side("bed1", "bed1_west", LIVING_DEPTH * H, 270, west)
    side("bed2", "bed2_south", BED_WIDTH * H, 180, "exterior")
    side("bed2", "bed2_east", LIVING_DEPTH * H, 90, east)
    surfaces.append(surface("living_bed1", "living", BED_WIDTH * H, 180, 90, "partition", {"adjacent": "bed1"}))
    surfaces.append(surface("living_bed2", "living", BED_WIDTH * H, 180, 90, "partition", {"adjacent": "bed2"}))
    surfaces.append(surface("bed1_bed2", "bed1", LIVING_DEPTH * H, 90, 90, "partition", {"adjacent": "bed2"}))

    def canopy(height):
        if not window_canopy:
            return None
        return {"depth": window_canopy, "height": height, "gap": 0.3}

    glazings = [
        {"id": "living_window", "surface": "living_north", "area": round(0.22 * rooms["living"]["floor"], 6),
         "solar_transmittance": 0.8, "u_value": 5.8, "shading_multiplier": 1.0},
        {"id": "bed1_window", "surface": "bed1_south", "area": round(0.11 * rooms["bed1"]["floor"], 6),
         "solar_transmittance": 0.8, "u_value": 5.8, "shading_multiplier": 1.0},
        {"id": "bed2_window", "surface": "bed2_south", "area": round(0.11 * rooms["bed2"]["floor"], 6),
         "solar_transmittance": 0.8, "u_value": 5.8, "shading_multiplier": 1.0},
    ]
    if window_canopy:
        glazings[0]["overhang"] = canopy(1.2)
        glazings[1]["overhang"] = canopy(1.2)
        glazings[2]["overhang"] = canopy(1.2)

    so = exterior * SP
    si_door = interior * SP / 2.0
    links = [
        opening("living_north_opening", so / LIVING_OPENING_H, LIVING_OPENING_H, ext(0), zone_ref("living"), 1.0),
        opening("bed1_south_opening", so / 2 / BED_OPENING_H, BED_OPENING_H, ext(180), zone_ref("bed1"), 1.3),
        opening("bed2_south_opening", so / 2 / BED_OPENING_H, BED_OPENING_H, ext(180), zone_ref("bed2"), 1.3),
        opening("door_living_bed1", si_door / DOOR_H, DOOR_H, zone_ref("living"), zone_ref("bed1"), 1.0),
        opening("door_living_bed2", si_door / DOOR_H, DOOR_H, zone_ref("living"), zone_ref("bed2"), 1.0),
        crack("living_crack", ext(0), zone_ref("living"), 2.4),
        crack("bed1_crack", ext(180), zone_ref("bed1"), 2.4, 0.001),
        crack("bed2_crack", ext(180), zone_ref("bed2"), 2.4, 0.001),
    ]
    if east == "exterior":
        links.append(crack("living_east_crack", ext(90), zone_ref("living"), 2.4, 0.001))
    if west == "exterior":
        links.append(crack("bed1_west_crack", ext(270), zone_ref("bed1"), 2.4, 0.001))

    zones = [
        {"id": "living", "volume": 60.0, "floor_area": rooms["living"]["floor"],
         "gains": {"default": {"use": "living", "adults": 2, "children": 2}},
         "principal": True, "facades": [1], "fan_provision": good},
        {"id": "bed1", "volume": 30.0, "floor_area": rooms["bed1"]["floor"],
         "gains": {"default": {"use": "bedroom", "adults": 2, "children": 0}},
         "principal": True, "facades": [2], "fan_provision": good},
        {"id": "bed2", "volume": 30.0, "floor_area": rooms["bed2"]["floor"],
         "gains": {"default": {"use": "bedroom", "adults": 0, "children": 2}},
         "principal": True, "facades": [2], "fan_provision": good},
    ]

    if good:
        comp = {
            "principal_rooms": 3,
            "siting": {"protected_perimeter_fraction": 0.8, "strip_width": 3.0},
            "roof": {"type": "terrace", "loft_opening_area": 0.0, "roof_area": 0.0},
            "water_heater": {"kind": "solar", "certified": True, "annual_production": 750.0,
                             "storage_volume": 270.0, "collector_area": 3.0},
        }
    else:
        comp = {
            "principal_rooms": 3,
            "siting": {"protected_perimeter_fraction": 0.5, "strip_width": 1.0},
            "roof": {"type": "terrace", "loft_opening_area": 0.0, "roof_area": 0.0},
            "water_heater": {"kind": "electric", "certified": True, "instantaneous": True,
                             "off_peak_switch": False, "capacity": 0.0, "cooling_constant": 0.0},
        }

    return {
        "name": name,
        "structure_class": structure,
        "site": {"latitude": -21.0, "longitude": 55.0, "ground_albedo": 0.2, "utc_offset_hours": 4.0},
        "materials": MATERIALS,
        "constructions": cons,
        "zones": zones,
        "surfaces": surfaces,
        "glazings": glazings,
        "links": links,
        "airflow": {"mode": "network"},
        "compliance": comp,
    }


GOOD = dict(roof_abs=0.3, roof_insulation=0.05, wall_abs=0.3, wall_insulation=0.03, wall_overhang=1.0,
            window_canopy=1.0, exterior=0.25, interior=0.25, good=True)


FREE_ROOM_ACH = 20.0


def air_conditioned(model, name, renewal):
    m = copy.deepcopy(model)
    m["name"] = name
    for z in m["zones"]:
        if z["id"] == "bed1":
            z["conditioning"] = {"setpoint": 26.0, "from": 20, "to": 6}
    # Only the conditioned room's renewal is controlled; the others stay ventilated.
    m["airflow"] = {"mode": "fixed", "renewals": [
        {"zone": z["id"], "air_changes": renewal if z["id"] == "bed1" else FREE_ROOM_ACH} for z in m["zones"]]}
    if renewal <= 1.0:
        m["compliance"]["air_conditioning"] = {"unit_type": "split", "cop": 3.2, "mechanical_renewal": 25.0,
                                               "maintenance_contract": True}
    else:
        m["compliance"]["air_conditioning"] = {"unit_type": "window", "cop": 2.2, "mechanical_renewal": 0.0,
                                               "maintenance_contract": False}
    return m


def fixtures():
    out = {}
    for structure in ("light", "heavy"):
        base = dwelling(f"individual-{structure}", structure)
        good = dwelling(f"individual-{structure}-good", structure, **GOOD)
        out[f"individual-{structure}"] = base
        out[f"individual-{structure}-good"] = good
        out[f"individual-{structure}-ac-bad"] = air_conditioned(base, f"individual-{structure}-ac-bad", 5.0)
        out[f"individual-{structure}-ac-good"] = air_conditioned(good, f"individual-{structure}-ac-good", 1.0)
    out["flat-under-roof"] = dwelling("flat-under-roof", "heavy", floor="ground", east="party", west="party")
    out["flat-intermediate"] = dwelling("flat-intermediate", "heavy", roof="ground", east="party", west="party")
    out["flat-side"] = dwelling("flat-side", "heavy", roof="ground", east="party", west="exterior")
    return out


def spencer(doy):
    g = 2 * math.pi * (doy - 1) / 365
    decl = (0.006918 - 0.399912 * math.cos(g) + 0.070257 * math.sin(g) - 0.006758 * math.cos(2 * g)
            + 0.000907 * math.sin(2 * g) - 0.002697 * math.cos(3 * g) + 0.00148 * math.sin(3 * g))
    eot = 229.18 * (0.000075 + 0.001868 * math.cos(g) - 0.032077 * math.sin(g) - 0.014615 * math.cos(2 * g)
                    - 0.040849 * math.sin(2 * g))
    return decl, eot


def sun_altitude(doy, hour, lat=-21.0, lon=55.0, utc=4.0):
    decl, eot = spencer(doy)
    solar = hour + (4 * (lon - 15 * utc) + eot) / 60
    w = math.radians(15 * (solar - 12))
    phi = math.radians(lat)
    s = math.sin(phi) * math.sin(decl) + math.cos(phi) * math.cos(decl) * math.cos(w)
    return math.degrees(math.asin(max(-1.0, min(1.0, s))))


def typical_day(doy=15):
    rows = []
    for h in range(24):
        # Minimum 24.0 C at 05h, maximum 31.5 C at 14h, cosine branches in between.
        if 5 <= h <= 14:
            f = (1 - math.cos(math.pi * (h - 5) / 9)) / 2
        else:
            k = (h - 14) % 24
            f = (1 + math.cos(math.pi * k / 15)) / 2
        t = 24.0 + 7.5 * f
        rh = 85.0 - 23.0 * f
        alt = sun_altitude(doy, h)
        if alt > 0:
            am = 1 / math.sin(math.radians(alt))
            dni = 0.78 * 1353 * 0.7 ** (am ** 0.678)
            dhi = 60 + 110 * math.sin(math.radians(alt))
        else:
            dni = dhi = 0.0
        if 7 <= h <= 18:
            speed = 2.0 + math.sin(math.pi * (h - 7) / 11)
            direction = 30.0
        else:
            speed = 1.0
            direction = 180.0
        rows.append((h, round(t, 2), round(rh, 1), round(dni, 1), round(dhi, 1), round(speed, 2), direction))
    return rows


def main():
    BUILDINGS.mkdir(parents=True, exist_ok=True)
    WEATHER.mkdir(parents=True, exist_ok=True)
    for name, model in fixtures().items():
        (BUILDINGS / f"{name}.json").write_text(json.dumps(model, indent=2) + "\n")
    lines = [
        "# label: synthesized wet-season typical day, Gillot (21S 55E); not measured data",
        "# day_of_year: 15",
        "# utc_offset_hours: 4",
        "hour,dry_bulb_C,rh_pct,dni_wm2,dhi_wm2,wind_ms,wind_dir_deg",
    ]
    for r in typical_day():
        lines.append(",".join(f"{v:g}" if isinstance(v, float) else str(v) for v in r))
    (WEATHER / "typical_day.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

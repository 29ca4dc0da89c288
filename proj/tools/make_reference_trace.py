#!/usr/bin/env python3
"""Write a synthetic per-second delivery trip log (data/reference.trip.csv).

The path runs through Linz along a few straight legs, speeds follow the
reference limit profile with small noise. One GPS glitch row, one 10 s
logging gap and one red-light stop are included so ingest has something
to clean.
"""
import math
import random
import sys

R = 6371000.0
START = (48.3069, 14.2858)
START_TIME = (11, 0, 0)
LEGS = [  # heading deg, length m
    (182.5, 1200),
    (120.0, 1400),
    (95.0, 1700),
    (40.0, 1000),
    (75.0, 2100),
    (150.0, 1400),
    (110.0, 1800),
    (85.0, 3400),
]
LIMITS_KMH = [50, 40, 50, 30, 50, 40, 50, 70]
RED_STOP = (5800.0, 30)  # position m, seconds at standstill
GLITCH_ROW = 250
GAP_AT_ROW = 600
GAP_S = 10
SEED = 615


def move(lat, lon, heading, dist):
    d = dist / R
    h = math.radians(heading)
    la, lo = math.radians(lat), math.radians(lon)
    la2 = math.asin(math.sin(la) * math.cos(d) + math.cos(la) * math.sin(d) * math.cos(h))
    lo2 = lo + math.atan2(math.sin(h) * math.sin(d) * math.cos(la), math.cos(d) - math.sin(la) * math.sin(la2))
    return math.degrees(la2), math.degrees(lo2)


def leg_at(s):
    acc = 0.0
    for i, (_, length) in enumerate(LEGS):
        if s < acc + length:
            return i
        acc += length
    return len(LEGS) - 1


def main(out):
    rng = random.Random(SEED)
    total = sum(length for _, length in LEGS)
    out.write("day,date,time,lat,lat_hem,lon,lon_hem,height_m,speed_kmh,heading_deg,vox\n")
    lat, lon = START
    s, v, t, row = 0.0, 0.0, 0, 0
    stopped = 0
    while s < total:
        leg = leg_at(s)
        target = LIMITS_KMH[leg] / 3.6 * rng.uniform(0.85, 0.98)
        if RED_STOP[0] - 60 < s < RED_STOP[0] and stopped < RED_STOP[1]:
            target = min(target, max(0.0, (RED_STOP[0] - s) / 4))
            if v < 0.3:
                v, target = 0.0, 0.0
                stopped += 1
        v += max(-2.5, min(1.5, target - v))
        v = max(v, 0.0)
        step = min(v, total - s)
        heading = LEGS[leg][0]
        lat, lon = move(lat, lon, heading, step)
        s += step
        t += 1
        row += 1
        if row == GAP_AT_ROW:
            # logger dropout; the vehicle keeps moving
            for _ in range(GAP_S - 1):
                lat, lon = move(lat, lon, heading, v)
                s += v
                t += 1
        out_lat, out_lon = lat, lon
        if row == GLITCH_ROW:
            out_lat, out_lon = move(lat, lon, 20.0, 800.0)
        hh = START_TIME[0] + (START_TIME[1] * 60 + START_TIME[2] + t) // 3600
        mm = (START_TIME[1] * 60 + START_TIME[2] + t) // 60 % 60
        ss = (START_TIME[2] + t) % 60
        height = 260 + 10 * math.sin(s / 1500)
        out.write(f"Monday,2020-06-15,{hh:02}:{mm:02}:{ss:02},{out_lat:.6f},n,{out_lon:.6f},e,"
                  f"{height:.0f},{v * 3.6:.1f},{heading:.1f},-\n")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w") as fh:
            main(fh)
    else:
        main(sys.stdout)

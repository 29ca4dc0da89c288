#!/usr/bin/env python3
"""Write the reference corridor route file (data/reference.rt).

Speed-limit profile approximates the driven Linz corridor; signal positions,
cycles and offsets are fixed-seed draws plus the calibrated offset shift.
"""
import random
import sys

LENGTH = 14000.0
SEGMENTS = [  # start, end, km/h
    (0, 1200, 50),
    (1200, 2600, 40),
    (2600, 4300, 50),
    (4300, 5300, 30),
    (5300, 7400, 50),
    (7400, 8800, 40),
    (8800, 10600, 50),
    (10600, 14000, 70),
]
N_SIGNALS = 22
SEED = 2020
# common offset shift found by `platoonsim calibrate data/cfg_notconnected.scn`
OFFSET_SHIFT = 20


def main(out):
    rng = random.Random(SEED)
    lines = ["# reference delivery corridor, origin container stop to destination container stop",
             f"length_m {LENGTH:g}"]
    for a, b, kmh in SEGMENTS:
        lines.append(f"segment {a:g} {b:g} {kmh / 3.6:.4f}")
    lines.append("stop cs1 50 0")
    lines.append("stop cs2 13950 0")
    spacing = (13950 - 50) / (N_SIGNALS + 1)
    for i in range(N_SIGNALS):
        pos = round(50 + spacing * (i + 1) + rng.uniform(-150, 150))
        cycle = rng.choice([80, 90, 90, 100])
        green = round(cycle * rng.uniform(0.30, 0.45))
        offset = (round(rng.uniform(0, cycle)) + OFFSET_SHIFT) % cycle
        lines.append(f"signal {pos} {cycle} {green} {offset}")
    out.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w") as fh:
            main(fh)
    else:
        main(sys.stdout)

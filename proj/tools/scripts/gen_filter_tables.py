#!/usr/bin/env python3
"""Regenerates the receive filter tables in core/data/filters.

dwdm_1310.csv: Gaussian passband, 1.22 nm FWHM, 0.05 nm sampling over
+-3 nm, floored at -40 dB.
cwdm_1310.csv: flat top over +-7.5 nm with a linear-in-dB skirt reaching
-30 dB at about +-25.13 nm. The skirt end is solved so that the noise-bandwidth
ratio to the DWDM table is 11.9 dB.
"""
import math
import pathlib

CENTER_NM = 1310.0
OUT = pathlib.Path(__file__).resolve().parents[2] / "core" / "data" / "filters"


def dwdm_rows():
    fwhm = 1.22
    rows = []
    for i in range(-60, 61):
        d = i * 0.05
        db = -10 * math.log10(math.e) * 4 * math.log(2) * (d / fwhm) ** 2
        rows.append((CENTER_NM + d, max(db, -40.0)))
    return rows


REJECTION_DB = 11.9


def enbw(rows):
    # Linear-in-dB segments, integrated in closed form.
    peak = max(db for _, db in rows)
    area = 0.0
    for (w0, a), (w1, b) in zip(rows, rows[1:]):
        a, b = a - peak, b - peak
        if abs(b - a) < 1e-12:
            area += (w1 - w0) * 10 ** (a / 10)
        else:
            area += (w1 - w0) * (10 ** (b / 10) - 10 ** (a / 10)) / ((b - a) * math.log(10) / 10)
    return area


def cwdm_rows(dwdm):
    flat, floor = 7.5, -30.0
    target = enbw(dwdm) * 10 ** (REJECTION_DB / 10)
    skirt = (1 - 10 ** (floor / 10)) / (-floor * math.log(10) / 10)
    edge = flat + (target - 2 * flat) / (2 * skirt)
    rows = []
    for d in (-edge, -flat, flat, edge):
        rows.append((CENTER_NM + d, 0.0 if abs(d) == flat else floor))
    return rows


def write(name, rows, header):
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / name, "w") as f:
        f.write(header + "\n")
        for nm, db in rows:
            f.write(f"{nm:.12f},{db:.12f}\n")


if __name__ == "__main__":
    dwdm = [(round(nm, 12), round(db, 12)) for nm, db in dwdm_rows()]
    write("dwdm_1310.csv", dwdm, "wavelength_nm,relative_db")
    write("cwdm_1310.csv", cwdm_rows(dwdm), "wavelength_nm,relative_db")

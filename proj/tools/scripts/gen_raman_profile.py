#!/usr/bin/env python3
"""Regenerates the default silica Raman profile table.

The Stokes gain shape is the 13-mode intermediate-broadening fit of fused
silica (Hollenbeck & Cantrell, JOSA B 19, 2886, 2002): each vibrational mode
is a Voigt line antisymmetrized about zero shift. The spontaneous capture
coefficient weights it by the phonon occupation n(T): (n + 1) on the Stokes
side, n on the anti-Stokes side. The result is normalized to a Stokes peak
of 1; the absolute scale is a calibration parameter.

Writes core/data/raman_silica_300k.csv and core/src/raman_default_profile.cpp.
"""
import pathlib

import numpy as np
from scipy.special import voigt_profile

C = 299792458.0
H = 6.62607015e-34
KB = 1.380649e-23
TEMPERATURE_K = 300.0
CM1_TO_THZ = C * 100 / 1e12

# (center cm^-1, amplitude, gaussian FWHM cm^-1, lorentzian FWHM cm^-1)
MODES = [
    (56.25, 1.00, 52.10, 17.37), (100.00, 11.40, 110.42, 38.81),
    (231.25, 36.67, 175.00, 58.33), (362.50, 67.67, 162.50, 54.17),
    (463.00, 74.00, 135.33, 45.11), (497.00, 4.50, 24.50, 8.17),
    (611.50, 6.80, 41.50, 13.83), (691.67, 4.60, 155.00, 51.67),
    (793.67, 4.20, 59.50, 19.83), (835.50, 4.50, 64.30, 21.43),
    (930.00, 2.70, 150.00, 50.00), (1080.00, 3.10, 91.00, 30.33),
    (1215.00, 3.00, 160.00, 53.33),
]


def gain(shift_thz):
    w = abs(shift_thz) / CM1_TO_THZ
    g = 0.0
    for center, amp, gauss, lorentz in MODES:
        sigma = gauss / (2 * np.sqrt(2 * np.log(2)))
        gamma = lorentz / 2
        g += amp * (voigt_profile(w - center, sigma, gamma) - voigt_profile(w + center, sigma, gamma))
    return g


def occupation(shift_thz):
    x = H * abs(shift_thz) * 1e12 / (KB * TEMPERATURE_K)
    return 1.0 / np.expm1(x)


def coefficient(shift_thz):
    s = shift_thz if abs(shift_thz) > 1e-6 else 1e-3
    n = occupation(s)
    return gain(s) * (n + 1 if s > 0 else n)


def main():
    root = pathlib.Path(__file__).resolve().parents[2]
    shifts = np.round(np.arange(-50.0, 50.0001, 0.25), 4)
    values = np.array([coefficient(s) for s in shifts])
    values /= values.max()

    csv = root / "core" / "data" / "raman_silica_300k.csv"
    with csv.open("w") as f:
        f.write("# silica spontaneous Raman capture profile, 300 K, Stokes peak = 1\n")
        f.write("shift_thz,coefficient\n")
        for s, v in zip(shifts, values):
            f.write(f"{s:.2f},{v:.9e}\n")

    cpp = root / "core" / "src" / "raman_default_profile.cpp"
    with cpp.open("w") as f:
        f.write("// Generated by tools/scripts/gen_raman_profile.py; do not edit.\n")
        f.write('#include "dpsqkd/raman.hpp"\n\n#include <array>\n\nnamespace dpsqkd {\n\n')
        f.write("namespace {\n")
        f.write(f"constexpr std::array<double, {len(values)}> kSilica300K = {{\n")
        for i in range(0, len(values), 4):
            f.write("    " + ", ".join(f"{v:.9e}" for v in values[i:i + 4]) + ",\n")
        f.write("};\n")
        f.write(f"constexpr double kFirstShiftThz = {shifts[0]:.2f};\n")
        f.write("constexpr double kShiftStepThz = 0.25;\n")
        f.write("}  // namespace\n\n")
        f.write("RamanProfile RamanProfile::silica_default() {\n")
        f.write("  RamanProfile profile;\n")
        f.write("  profile.table.reserve(kSilica300K.size());\n")
        f.write("  for (std::size_t i = 0; i < kSilica300K.size(); ++i) {\n")
        f.write("    profile.table.push_back({kFirstShiftThz + kShiftStepThz * static_cast<double>(i), kSilica300K[i]});\n")
        f.write("  }\n  return profile;\n}\n\n}  // namespace dpsqkd\n")


if __name__ == "__main__":
    main()

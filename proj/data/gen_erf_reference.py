#!/usr/bin/env python3
"""Regenerates erf_reference.inc: 30-digit reference values for w(z), erf(z), erfi(z).

Run from this directory: python3 gen_erf_reference.py > erf_reference.inc
"""
import random

import mpmath as mp

mp.mp.dps = 40
rng = random.Random(20240611)


def fmt(v):
    return "%.17e" % float(v)


def faddeeva(z):
    return mp.exp(-z * z) * mp.erfc(-1j * z)


points = [0, 1j, 1 + 1j, 0.5, 2, 5 + 0.1j, 0.01 + 0.01j, 1e-6j, 6, 6j, 29.9, 29.9j,
          -3 + 2j, 3 - 0.5j, 7.9 + 0.3j, 8.1 + 0.3j, 0.2 + 7.95j, 15 + 15j]
for _ in range(160):
    r = 30 * rng.random() ** 1.5
    phase = rng.uniform(-mp.pi / 2, mp.pi)
    points.append(complex(r * mp.cos(phase), r * mp.sin(phase)))
for _ in range(40):
    points.append(complex(rng.uniform(-9, 9), rng.uniform(-0.05, 0.05)))

print("// Generated by gen_erf_reference.py (mpmath, 40 digits). Do not edit.")
print("// {re z, im z, re w, im w}")
print("static constexpr double kFaddeevaTable[][4] = {")
for p in points:
    z = mp.mpc(p)
    w = faddeeva(z)
    if abs(w) > 1e300 or abs(w) < 1e-300:
        continue
    print("    {%s, %s, %s, %s}," % (fmt(z.real), fmt(z.imag), fmt(w.real), fmt(w.imag)))
print("};")
print("// {re z, im z, re erf, im erf, re erfi, im erfi}")
print("static constexpr double kErfTable[][6] = {")
for p in points:
    z = mp.mpc(p)
    if abs(z) > 0 and abs(z) < 1e-300:
        continue
    e = mp.erf(z)
    ei = mp.erfi(z)
    if max(abs(e), abs(ei)) > 1e300:
        continue
    if (e != 0 and abs(e) < 1e-300) or (ei != 0 and abs(ei) < 1e-300):
        continue
    print("    {%s, %s, %s, %s, %s, %s}," % (fmt(z.real), fmt(z.imag), fmt(e.real), fmt(e.imag),
                                             fmt(ei.real), fmt(ei.imag)))
print("};")

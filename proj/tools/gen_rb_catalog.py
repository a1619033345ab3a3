#!/usr/bin/env python3
"""Regenerate data/rb_catalog.json from the ARC (Alkali Rydberg Calculator) tables.

Level energies come from ARC's NIST-derived level tables; reduced dipole matrix
elements use ARC's literature values where one exists and its numerical radial
integrals otherwise.  The source of every line is recorded in the output.
"""
import json
import sys

from arc import Rubidium87

EV_TO_CM = 8065.543937

atom = Rubidium87()
L_LETTER = "SPDF"


def label(n, l, j2):
    return f"{n}{L_LETTER[l]}{j2}/2"


levels = {}


def add_level(n, l, j2):
    key = label(n, l, j2)
    if key not in levels:
        levels[key] = dict(label=key, n=n, L=l, twoJ=j2,
                           energy_cm=atom.getEnergy(n, l, j2 / 2.0))
    return key


ground = add_level(5, 0, 1)
for n in range(5, 22):
    add_level(n, 1, 1)
    add_level(n, 1, 3)
for n in range(5, 11):
    add_level(n, 0, 1)
for n in range(4, 10):
    add_level(n, 2, 3)
    add_level(n, 2, 5)
for n in range(6, 10):
    add_level(n, 0, 1)

e0 = levels[ground]["energy_cm"]
for lv in levels.values():
    lv["energy_cm"] = round((lv["energy_cm"] - e0) * EV_TO_CM, 4)

lines = {}


def add_line(a, b):
    la, lb = levels[a], levels[b]
    up, lo = (la, lb) if la["energy_cm"] > lb["energy_cm"] else (lb, la)
    key = (up["label"], lo["label"])
    if key in lines:
        return
    args = (up["n"], up["L"], up["twoJ"] / 2.0, lo["n"], lo["L"], lo["twoJ"] / 2.0)
    d = abs(atom.getReducedMatrixElementJ(*args))
    lit = atom.getLiteratureDME(*args)
    if lit[0]:
        src = f"literature via ARC: {lit[2][3]} ({lit[2][2]})"
    else:
        src = "ARC numerical radial integral (Marinescu model potential)"
    wl_nm = 1e7 / (up["energy_cm"] - lo["energy_cm"])
    lines[key] = dict(upper=up["label"], lower=lo["label"],
                      reduced_d_au=round(d, 6), wavelength_nm=round(wl_nm, 6),
                      source=src)


inclusion = {}


def include(initial, targets):
    inclusion[initial] = targets
    for t in targets:
        add_line(initial, t)


# audit shells (one principal number beyond the production truncation) are
# listed separately so truncation can be checked without editing the file
include("5S1/2", [label(n, 1, j) for n in range(5, 9) for j in (1, 3)])
for j in (1, 3):
    tg = [label(n, 0, 1) for n in range(5, 9)] + [label(n, 2, 3) for n in range(4, 9)]
    if j == 3:
        tg += [label(n, 2, 5) for n in range(4, 9)]
    include(label(5, 1, j), tg)
for n0 in range(6, 11):
    include(label(n0, 0, 1), [label(n, 1, j) for n in range(5, 21) for j in (1, 3)])

audit = {
    "5S1/2": [label(9, 1, 1), label(9, 1, 3)],
    "5P1/2": [label(9, 0, 1), label(9, 2, 3)],
    "5P3/2": [label(9, 0, 1), label(9, 2, 3), label(9, 2, 5)],
}
for n0 in range(6, 11):
    audit[label(n0, 0, 1)] = [label(21, 1, 1), label(21, 1, 3)]
for k, v in audit.items():
    for t in v:
        add_line(k, t)

out = dict(
    schema="cpnf-atom-catalog/1",
    version="rb-2026.1",
    species="Rb",
    nuclear_spin_twice=3,
    mass_u=86.909180527,
    source="ARC 3.x (Sibalic et al., Comput. Phys. Commun. 220, 319 (2017)); "
           "energies from NIST ASD via ARC",
    levels=sorted(levels.values(), key=lambda x: x["energy_cm"]),
    lines=sorted(lines.values(), key=lambda x: (x["upper"], x["lower"])),
    inclusion=inclusion,
    audit_inclusion=audit,
)
json.dump(out, sys.stdout, indent=1)
sys.stdout.write("\n")

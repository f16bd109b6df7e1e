#!/usr/bin/env python3
# Copyright 2026 The vqelab Authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the FCIDUMP fixtures under tests/fixtures.

Requires PySCF. Each molecule directory receives one full-orbital FCIDUMP per
bond length, a reference.json with RHF and active-space FCI (CASCI) energies,
and a scan config consumed by the vqelab CLI.

Usage: python3 tools/make_fixtures.py [output-dir]
"""
import json
import math
import os
import sys

from pyscf import gto, mcscf, scf
from pyscf.tools import fcidump

LIH_R = [0.9, 1.2, 1.4, 1.6, 1.8, 2.0, 2.4, 2.8, 3.2, 3.8, 4.5, 5.3]
H2O_R = [0.7, 0.9, 1.1, 1.4, 1.7, 2.0, 2.3, 2.6, 2.9, 3.3]
H2O_ANGLE = 104.5


def rhf(mol, dm0=None):
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.max_cycle = 200
    mf.kernel(dm0)
    if not mf.converged:
        mf = mf.newton()
        mf.kernel()
    assert mf.converged, "RHF did not converge"
    return mf


def casci_energy(mf, ncas, nelecas, caslst):
    mc = mcscf.CASCI(mf, ncas, nelecas)
    mc.fcisolver.conv_tol = 1e-13
    mo = mc.sort_mo(caslst, base=0)
    mc.kernel(mo)
    return float(mc.e_tot)


def orbsym_ids(mf):
    return [int(s) for s in fcidump._convert_orbsym(mf.mol, mf.mo_coeff.orbsym, True)]


def write_config(path, molecule, radii, frozen, active, extra):
    lines = [
        f"molecule   = {molecule}",
        f"fcidump    = {molecule}_R{{R}}.FCIDUMP",
        "geometries = " + " ".join(f"{r:.2f}" for r in radii),
        "frozen     = " + " ".join(map(str, frozen)),
        "active     = " + " ".join(map(str, active)),
    ] + [f"{k:<10} = {v}" for k, v in extra]
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def write_lih(root):
    out = os.path.join(root, "lih")
    os.makedirs(out, exist_ok=True)
    refs = []
    for r in LIH_R:
        mol = gto.M(atom=f"Li 0 0 0; H 0 0 {r}", basis="sto-6g", symmetry="C2v",
                    unit="Angstrom", verbose=0)
        mf = rhf(mol)
        name = f"LiH_R{r:.2f}.FCIDUMP"
        fcidump.from_scf(mf, os.path.join(out, name), tol=1e-14, float_format=" %.17g",
                          molpro_orbsym=True)
        syms = orbsym_ids(mf)
        # frozen Li 1s; active = remaining totally symmetric (sigma) orbitals
        active = [i for i in range(1, len(syms)) if syms[i] == 1]
        e_fci = casci_energy(mf, len(active), 2, active)
        refs.append({"R": r, "fcidump": name, "e_hf": float(mf.e_tot), "e_fci": e_fci,
                     "frozen": [0], "active": active})
    with open(os.path.join(out, "reference.json"), "w") as f:
        json.dump({"molecule": "LiH", "basis": "STO-6G", "points": refs}, f, indent=1)
    write_config(os.path.join(out, "scan.conf"), "LiH", LIH_R, [0], refs[0]["active"],
                 [("ansatz", "ry_linear"), ("layers", "3"), ("restarts", "20"), ("seed", "2026")])


def write_h2o(root):
    out = os.path.join(root, "h2o")
    os.makedirs(out, exist_ok=True)
    refs = []
    half = math.radians(H2O_ANGLE / 2)
    dm = None
    for r in H2O_R:
        y, z = r * math.sin(half), r * math.cos(half)
        mol = gto.M(atom=f"O 0 0 0; H 0 {y} {z}; H 0 {-y} {z}", basis="sto-6g",
                    symmetry="C2v", unit="Angstrom", verbose=0)
        # follow the closed-shell solution along the curve
        mf = rhf(mol, dm)
        dm = mf.make_rdm1()
        name = f"H2O_R{r:.2f}.FCIDUMP"
        fcidump.from_scf(mf, os.path.join(out, name), tol=1e-14, float_format=" %.17g",
                          molpro_orbsym=True)
        active = [2, 3, 4, 5, 6]
        e_fci = casci_energy(mf, 5, 6, active)
        refs.append({"R": r, "fcidump": name, "e_hf": float(mf.e_tot), "e_fci": e_fci,
                     "frozen": [0, 1], "active": active})
    with open(os.path.join(out, "reference.json"), "w") as f:
        json.dump({"molecule": "H2O", "basis": "STO-6G", "points": refs}, f, indent=1)
    write_config(os.path.join(out, "scan.conf"), "H2O", H2O_R, [0, 1], [2, 3, 4, 5, 6],
                 [("ansatz", "ry_linear"), ("layers", "8"), ("restarts", "5"), ("seed", "2026")])


if __name__ == "__main__":
    root = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "tests", "fixtures")
    write_lih(root)
    write_h2o(root)

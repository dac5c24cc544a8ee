#!/usr/bin/env python3
# Copyright 2026 The dfkit Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerate the FCIDUMP fixtures under tests/data with PySCF.

Usage: python3 tools/make_fixtures.py [outdir]

All systems are RHF/minimal-basis active spaces small enough for exact CI.
"""
import json
import os
import sys

import numpy as np
from pyscf import ao2mo, fci, gto, mcscf, scf
from pyscf.tools import fcidump

BOHR = 0.52917721092
REFERENCE = {}


def spin_resolved(h1, eri, ecore, ncas, nelec):
    """Lowest singlet and triplet energies in the Ms=0 sector."""
    solver = fci.direct_spin1.FCI()
    solver.conv_tol = 1e-12
    nroots = min(10, fci.cistring.num_strings(ncas, nelec // 2) ** 2)
    es, vs = solver.kernel(h1, eri, ncas, (nelec // 2, nelec // 2),
                           nroots=nroots, ecore=ecore)
    es = np.atleast_1d(es)
    vs = vs if isinstance(vs, list) else [vs]
    out = {}
    for e, v in zip(es, vs):
        ss, _ = fci.spin_op.spin_square(v, ncas, (nelec // 2, nelec // 2))
        key = "singlet" if abs(ss) < 1e-4 else ("triplet" if abs(ss - 2) < 1e-4 else None)
        if key and key not in out:
            out[key] = float(e)
    return out


def write(path, mol, ncas, nelecas, ncore=0):
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    mc = mcscf.CASCI(mf, ncas, nelecas, ncore=ncore)
    h1, ecore = mc.get_h1eff()
    eri = ao2mo.restore(1, mc.get_h2eff(), ncas)
    nelec = sum(nelecas) if isinstance(nelecas, tuple) else nelecas
    fcidump.from_integrals(path, h1, eri, ncas, nelec, nuc=ecore, ms=0,
                           tol=1e-14, float_format=" %.17e")
    e_fci = mc.kernel()[0]
    entry = {"n": ncas, "nelec": nelec, "ground": float(e_fci)}
    entry.update(spin_resolved(h1, eri, ecore, ncas, nelec))
    REFERENCE[os.path.basename(path)] = entry
    print(f"{os.path.basename(path)}: {entry}")


def hchain(n, spacing_bohr, basis):
    atoms = [("H", (0.0, 0.0, i * spacing_bohr * BOHR)) for i in range(n)]
    return gto.M(atom=atoms, basis=basis, unit="Angstrom", verbose=0)


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "tests", "data")
    os.makedirs(out, exist_ok=True)

    h2 = gto.M(atom="H 0 0 0; H 0 0 0.735", basis="sto-3g", verbose=0)
    write(os.path.join(out, "h2_n1.fcidump"), h2, 1, 2)
    write(os.path.join(out, "h2_n2.fcidump"), h2, 2, 2)

    # Distorted H4 rectangle (4e, 4o).
    h4 = gto.M(atom="H 0 0 0; H 0 0 0.9; H 1.1 0 0; H 1.1 0 0.9",
               basis="sto-3g", verbose=0)
    write(os.path.join(out, "h4_n4.fcidump"), h4, 4, 4)

    # H2O (10e, 7o), full minimal basis.
    h2o = gto.M(atom="O 0 0 0.1173; H 0 0.7572 -0.4692; H 0 -0.7572 -0.4692",
                basis="sto-3g", verbose=0)
    write(os.path.join(out, "h2o_n7.fcidump"), h2o, 7, 10)

    # Hydrogen chains, STO-6G, 1.4 bohr spacing.
    for n in (4, 6, 8):
        write(os.path.join(out, f"hchain{n}_sto6g.fcidump"),
              hchain(n, 1.4, "sto-6g"), n, n)

    with open(os.path.join(out, "reference_energies.json"), "w") as f:
        json.dump(REFERENCE, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    np.set_printoptions(precision=12)
    main()

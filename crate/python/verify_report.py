#!/usr/bin/env python3
"""Standalone re-verification of a decision report.

Checks every certificate embedded in a report using only exact pairing
arithmetic on Python fractions (plus one Gaussian inertia count for
signature claims), independently of the library that produced it.

    python3 python/verify_report.py report.json
"""

import json
import sys
from fractions import Fraction


def rat(s):
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def pairing(gram, x, y):
    return sum(x[i] * gram[i][j] * y[j] for i in range(len(x)) for j in range(len(y)))


def signature(gram):
    """Inertia counts by symmetric Gaussian elimination."""
    n = len(gram)
    g = [row[:] for row in gram]
    pos = zero = neg = 0
    for k in range(n):
        if g[k][k] == 0:
            swap = next((j for j in range(k + 1, n) if g[j][j] != 0), None)
            if swap is not None:
                for row in g:
                    row[k], row[swap] = row[swap], row[k]
                g[k], g[swap] = g[swap], g[k]
            else:
                mix = next((j for j in range(k + 1, n) if g[k][j] != 0), None)
                if mix is None:
                    zero += 1
                    continue
                for i in range(n):
                    g[i][k] += g[i][mix]
                for j in range(n):
                    g[k][j] += g[mix][j]
        pivot = g[k][k]
        for i in range(k + 1, n):
            if g[i][k] != 0:
                f = g[i][k] / pivot
                for j in range(n):
                    g[i][j] -= f * g[k][j]
                for j in range(n):
                    g[j][i] -= f * g[j][k]
        if pivot > 0:
            pos += 1
        elif pivot < 0:
            neg += 1
        else:
            zero += 1
    return pos, zero, neg


def embed(ns_basis, coefficients):
    dim = len(ns_basis[0]) if ns_basis else 0
    out = [Fraction(0)] * dim
    for c, basis_vector in zip(coefficients, ns_basis):
        for i, b in enumerate(basis_vector):
            out[i] += c * b
    return out


def check(condition, message):
    if not condition:
        sys.exit(f"FAIL: {message}")


def in_closure(gram, kappa, cuts, v):
    if pairing(gram, v, v) < 0 or pairing(gram, v, kappa) < 0:
        return False
    return all(pairing(gram, v, c) >= 0 for c in cuts)


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    report = json.load(open(sys.argv[1]))
    model = report["model"]
    gram = [[rat(e) for e in row] for row in model["gram"]]
    kappa = [rat(e) for e in model["kappa_ref"]]
    cuts = [[Fraction(e) for e in c["class"]] for c in model["curves"]]
    ns_basis = [[Fraction(e) for e in b] for b in model["ns_basis"]]
    verdict = report["verdict"]

    if verdict == "projective":
        witness = report["witness"]
        coefficients = [Fraction(int(c)) for c in witness["coefficients"]]
        x = [rat(e) for e in witness["class"]]
        check(embed(ns_basis, coefficients) == x, "witness class mismatch")
        cert = report["inner_certificate"]
        y = [rat(e) for e in cert["interior"]]
        coeffs = [rat(e) for e in cert["cut_coeffs"]]
        check(all(a >= 0 for a in coeffs), "negative cut coefficient")
        recomposed = y[:]
        for a, c in zip(coeffs, cuts):
            recomposed = [r + a * ci for r, ci in zip(recomposed, c)]
        check(recomposed == x, "decomposition does not recompose the witness")
        check(pairing(gram, y, y) > 0, "interior part square not positive")
        check(pairing(gram, y, kappa) > 0, "interior part not forward")
        if report.get("margin_sq") is not None:
            m = rat(report["margin_sq"])
            lam = rat(report["margin_lambda"])
            check(m > 0 and lam >= 0, "margin multipliers out of range")
            v = [pairing(gram, y, [Fraction(i == j) for j in range(len(y))]) for i in range(len(y))]
            mat = [
                [v[i] * v[j] - lam * gram[i][j] - (m if i == j else 0) for j in range(len(y))]
                for i in range(len(y))
            ]
            pos, zero, neg = signature(mat)
            check(neg == 0, "margin matrix is not positive semidefinite")
    elif verdict == "not-projective":
        obstruction = report["obstruction"]
        kind = obstruction["kind"]
        if kind in ("ns-negative-definite", "ns-negative-semidefinite"):
            ns_gram = [
                [pairing(gram, a, b) for b in ns_basis] for a in ns_basis
            ]
            pos, zero, neg = signature(ns_gram)
            check((pos, zero, neg) == tuple(obstruction["ns_signature"]), "ns signature mismatch")
            check(pos == 0, "ns form has a positive part")
            if kind == "ns-negative-definite":
                check(zero == 0, "ns form is not definite")
        elif kind == "per-candidate-certificates":
            bound = obstruction["bound"]
            rho = len(ns_basis)
            expected = (2 * bound + 1) ** rho - 1 if rho else 0
            certs = obstruction["certificates"]
            check(len(certs) == expected, f"expected {expected} certificates, got {len(certs)}")
            for entry in certs:
                coefficients = [Fraction(int(c)) for c in entry["coefficients"]]
                x = embed(ns_basis, coefficients)
                eta = [rat(e) for e in entry["eta"]]
                check(any(e != 0 for e in eta), "zero certificate class")
                check(in_closure(gram, kappa, cuts, eta), "certificate not in the cone closure")
                check(pairing(gram, x, eta) <= 0, "certificate pairs positively")
        else:
            sys.exit(f"FAIL: unknown obstruction kind {kind}")
    elif verdict != "undetermined":
        sys.exit(f"FAIL: unknown verdict {verdict}")

    print(f"OK: {sys.argv[1]} verdict={verdict} re-verified")


if __name__ == "__main__":
    main()

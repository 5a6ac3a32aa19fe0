#!/usr/bin/env python3
"""Re-solve an exported LP file with scipy's HiGHS backend.

Parses the LP text subset written by `medoid-lp export-lp`, solves it, prints
the objective, and optionally writes the solution vector as CSV so it can be
fed back through `--external-solution` / `--check-solution`.
"""

import argparse
import re
import sys

import numpy as np
from scipy.optimize import linprog


def tokenize(text):
    text = re.sub(r"\\[^\n]*", " ", text)  # comments
    return re.findall(r"<=|>=|=<|=>|[<>=:+-]|[A-Za-z_][\w.]*|[0-9.][0-9.eE+-]*", text)


def parse_lp(text):
    toks = tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def word_is(s):
        t = peek()
        return t is not None and t.lower() == s

    sense = 1
    if word_is("minimize") or word_is("min"):
        pos += 1
    elif word_is("maximize") or word_is("max"):
        sense = -1
        pos += 1
    else:
        raise ValueError("expected Minimize/Maximize")

    var_index = {}
    var_names = []

    def var_of(name):
        if name not in var_index:
            var_index[name] = len(var_names)
            var_names.append(name)
        return var_index[name]

    sections = {"subject", "st", "s.t.", "bounds", "end"}

    def parse_number(tok):
        if tok.lower() in ("inf", "+inf", "infinity"):
            return np.inf
        return float(tok)

    def is_number(tok):
        if tok is None:
            return False
        if tok.lower() in ("inf", "+inf", "infinity"):
            return True
        try:
            float(tok)
            return True
        except ValueError:
            return False

    def parse_expr():
        nonlocal pos
        terms = {}
        if (
            pos + 1 < len(toks)
            and re.match(r"[A-Za-z_]", toks[pos])
            and toks[pos + 1] == ":"
            and toks[pos].lower() not in sections
        ):
            pos += 2
        while pos < len(toks):
            t = toks[pos]
            if t in ("<=", ">=", "=<", "=>", "<", ">", "="):
                break
            if t.lower() in sections:
                break
            sign = 1.0
            while toks[pos] in ("+", "-"):
                if toks[pos] == "-":
                    sign = -sign
                pos += 1
            coef = 1.0
            if is_number(toks[pos]):
                coef = parse_number(toks[pos])
                pos += 1
            name = toks[pos]
            pos += 1
            j = var_of(name)
            terms[j] = terms.get(j, 0.0) + sign * coef
        return terms

    obj = parse_expr()
    if word_is("subject"):
        pos += 1
        if word_is("to"):
            pos += 1
    elif word_is("st") or word_is("s.t."):
        pos += 1

    rows = []
    while pos < len(toks) and not (word_is("bounds") or word_is("end")):
        lhs = parse_expr()
        rel = toks[pos]
        pos += 1
        sign = 1.0
        while toks[pos] in ("+", "-"):
            if toks[pos] == "-":
                sign = -sign
            pos += 1
        rhs = sign * parse_number(toks[pos])
        pos += 1
        rows.append((lhs, rel, rhs))

    nvars_hint = len(var_names)
    lo = [0.0] * nvars_hint
    hi = [np.inf] * nvars_hint

    def ensure_bounds():
        while len(lo) < len(var_names):
            lo.append(0.0)
            hi.append(np.inf)

    if word_is("bounds"):
        pos += 1
        while pos < len(toks) and not word_is("end"):
            if (
                re.match(r"[A-Za-z_]", toks[pos])
                and pos + 1 < len(toks)
                and toks[pos + 1].lower() == "free"
            ):
                j = var_of(toks[pos])
                ensure_bounds()
                lo[j], hi[j] = -np.inf, np.inf
                pos += 2
                continue
            sign = 1.0
            while toks[pos] in ("+", "-"):
                if toks[pos] == "-":
                    sign = -sign
                pos += 1
            if is_number(toks[pos]):
                lov = sign * parse_number(toks[pos])
                pos += 1
                assert toks[pos] in ("<=", "=<", "<")
                pos += 1
                j = var_of(toks[pos])
                ensure_bounds()
                lo[j] = lov
                pos += 1
                if pos < len(toks) and toks[pos] in ("<=", "=<", "<"):
                    pos += 1
                    s2 = 1.0
                    while toks[pos] in ("+", "-"):
                        if toks[pos] == "-":
                            s2 = -s2
                        pos += 1
                    hi[j] = s2 * parse_number(toks[pos])
                    pos += 1
            else:
                j = var_of(toks[pos])
                ensure_bounds()
                pos += 1
                rel = toks[pos]
                pos += 1
                s2 = 1.0
                while toks[pos] in ("+", "-"):
                    if toks[pos] == "-":
                        s2 = -s2
                    pos += 1
                v = s2 * parse_number(toks[pos])
                pos += 1
                if rel in ("<=", "=<", "<"):
                    hi[j] = v
                elif rel in (">=", "=>", ">"):
                    lo[j] = v
                else:
                    lo[j] = hi[j] = v
    ensure_bounds()

    n = len(var_names)
    c = np.zeros(n)
    for j, v in obj.items():
        c[j] = v
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for lhs, rel, rhs in rows:
        row = np.zeros(n)
        for j, v in lhs.items():
            row[j] = v
        if rel in ("<=", "=<", "<"):
            a_ub.append(row)
            b_ub.append(rhs)
        elif rel in (">=", "=>", ">"):
            a_ub.append(-row)
            b_ub.append(-rhs)
        else:
            a_eq.append(row)
            b_eq.append(rhs)
    return {
        "sense": sense,
        "c": c,
        "A_ub": np.array(a_ub) if a_ub else None,
        "b_ub": np.array(b_ub) if b_ub else None,
        "A_eq": np.array(a_eq) if a_eq else None,
        "b_eq": np.array(b_eq) if b_eq else None,
        "bounds": list(zip(lo, hi)),
        "names": var_names,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("lp_file")
    ap.add_argument("--solution-out", help="write the solution vector as CSV")
    args = ap.parse_args()

    with open(args.lp_file) as f:
        prob = parse_lp(f.read())

    res = linprog(
        prob["sense"] * prob["c"],
        A_ub=prob["A_ub"],
        b_ub=prob["b_ub"],
        A_eq=prob["A_eq"],
        b_eq=prob["b_eq"],
        bounds=prob["bounds"],
        method="highs",
    )
    if not res.success:
        print(f"solver status: {res.status} ({res.message})", file=sys.stderr)
        return 2

    objective = prob["sense"] * res.fun
    print(f"variables: {len(prob['names'])}")
    print(f"objective: {objective:.17g}")
    if args.solution_out:
        with open(args.solution_out, "w") as f:
            for v in res.x:
                f.write(f"{v:.17g}\n")
        print(f"wrote {args.solution_out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Convert the KnotInfo table into the knotstat CSV layout.

The KnotInfo table ships with the `database_knotinfo` Python package:

    pip install database_knotinfo
    python3 scripts/export_knotinfo.py --max-crossings 13 --out data/export/knotinfo_13.csv

or point --source at an extracted knotinfo_data_complete.csv.
"""

import argparse
import ast
import csv
import os
import re
import sys

COLUMNS = [
    "name", "crossings", "alternating", "jones", "vol", "longitude_length", "meridian_length",
    "mu_x", "mu_y", "cusp_volume", "chern_simons", "khovanov",
]


def locate_source():
    try:
        import database_knotinfo
    except ImportError:
        sys.exit("database_knotinfo is not installed; pass --source")
    base = os.path.dirname(database_knotinfo.__file__)
    return os.path.join(base, "csv_data", "knotinfo_data_complete.csv")


def number(text):
    text = (text or "").strip()
    try:
        return float(text)
    except ValueError:
        return None


TERM = re.compile(r"^(\d*)\*?(/)?(t(?:\^\(?(-?\d+)\)?)?)?$")


def jones_from_string(text):
    """Parses KnotInfo's printed form, e.g. `47 + t^(-8) - 4/t^7 + 37*t`."""
    s = text.replace(" ", "")
    terms, start = [], 0
    for k in range(1, len(s) + 1):
        if k == len(s) or (s[k] in "+-" and s[k - 1] not in "(^"):
            terms.append(s[start:k])
            start = k
    poly = {}
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        m = TERM.match(body)
        if not m or not body:
            raise ValueError(f"cannot parse Jones term {term!r} in {text!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        exp = 0
        if m.group(3):
            exp = int(m.group(4)) if m.group(4) else 1
            if m.group(2):
                exp = -exp
        elif m.group(2):
            raise ValueError(f"cannot parse Jones term {term!r}")
        poly[exp] = poly.get(exp, 0) + sign * coeff
    poly = {e: c for e, c in poly.items() if c != 0}
    lo, hi = min(poly), max(poly)
    return [lo, hi] + [poly.get(e, 0) for e in range(lo, hi + 1)]


def jones(vector_text, printed):
    if vector_text.strip():
        v = ast.literal_eval(vector_text)
    else:
        v = jones_from_string(printed)
    lo, coeffs = v[0], v[2:]
    if len(coeffs) != v[1] - lo + 1:
        raise ValueError(f"inconsistent Jones vector {v}")
    return f"{lo};" + " ".join(str(c) for c in coeffs)


def khovanov(text):
    text = (text or "").strip()
    if not text.startswith("["):
        return ""
    # entries are [torsion, rank, i, j]; keep the free part
    terms = {}
    for torsion, rank, i, j in ast.literal_eval(text):
        if torsion == 0 and rank != 0:
            terms[(i, j)] = terms.get((i, j), 0) + rank
    return ";".join(f"{i},{j},{c}" for (i, j), c in sorted(terms.items()) if c != 0)


def convert(row):
    vol = number(row["volume"])
    mu = row["meridian_translation"].strip()
    mu_x = mu_y = None
    if mu.startswith("("):
        mu_x, mu_y = (float(t) for t in mu.strip("()").split(","))
    fmt = lambda v: "" if v is None else repr(v)
    return {
        "name": row["name"],
        "crossings": row["crossing_number"],
        "alternating": "Y" if row["alternating"].strip() == "Y" else "N",
        "jones": jones(row["jones_polynomial_vector"], row["jones_polynomial"]),
        "vol": fmt(vol if vol and vol > 0 else None),
        "longitude_length": fmt(number(row["longitude_length"])),
        "meridian_length": fmt(number(row["meridian_length"])),
        "mu_x": fmt(mu_x),
        "mu_y": fmt(mu_y),
        "cusp_volume": fmt(number(row["maximum_cusp_volume"])),
        "chern_simons": fmt(number(row["chern_simons_invariant"])),
        "khovanov": khovanov(row["khovanov_reduced_integral_vector"]),
    }


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--source", help="knotinfo_data_complete.csv (default: from database_knotinfo)")
    p.add_argument("--out", required=True)
    p.add_argument("--max-crossings", type=int, default=13)
    p.add_argument("--names", help="comma separated knot names to keep")
    p.add_argument("--all-types", action="store_true", help="keep non-hyperbolic knots too")
    args = p.parse_args()

    csv.field_size_limit(1 << 30)
    source = args.source or locate_source()
    names = set(args.names.split(",")) if args.names else None
    kept = 0
    with open(source, newline="") as src, open(args.out, "w", newline="") as dst:
        writer = csv.DictWriter(dst, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in csv.DictReader(src, delimiter="|"):
            if not row["crossing_number"].isdigit():
                continue  # second header line with column labels
            if int(row["crossing_number"]) > args.max_crossings:
                continue
            if names is not None and row["name"] not in names:
                continue
            if not args.all_types and row["geometric_type"].strip() != "hyperbolic":
                continue
            writer.writerow(convert(row))
            kept += 1
    print(f"wrote {kept} knots to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()

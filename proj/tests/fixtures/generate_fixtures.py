#!/usr/bin/env python3
# SPDX-License-Identifier: BSD-3-Clause
# Copyright (c) 2026, The rosetta-pd Authors
"""Writes the generated Bookshelf and LEF/DEF round-trip fixtures and the
corpus manifest read by the acceptance suite. Output is a pure function of
the seeds below."""

import json
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent
COUNT = 10


def bookshelf_fixture(index):
    rng = random.Random(7000 + index)
    name = f"gen{index:02d}"
    out = ROOT / "bookshelf" / name
    out.mkdir(parents=True, exist_ok=True)

    row_h = rng.choice([1, 2, 4, 8, 9, 12])
    site_w = rng.choice([1, 2])
    rows = rng.randint(3, 20)
    movable = rng.randint(10, 80) * (index + 1)
    terms = rng.randint(2, 12)
    terms_ni = rng.randint(0, 3)
    num_sites = max(60, movable * 6 // rows)

    nodes = []
    for i in range(movable):
        nodes.append((f"o{i}", site_w * rng.randint(1, 6), row_h, ""))
    for i in range(terms):
        nodes.append((f"p{i}", rng.choice([1, 2]), rng.choice([1, 2]), "terminal"))
    for i in range(terms_ni):
        nodes.append((f"q{i}", 1, 1, "terminal_NI"))

    lines = ["UCLA nodes 1.0", f"# {name}", "",
             f"NumNodes : {len(nodes)}", f"NumTerminals : {terms + terms_ni}"]
    lines += [f"  {n}  {w}  {h}" + (f"  {k}" if k else "") for n, w, h, k in nodes]
    (out / f"{name}.nodes").write_text("\n".join(lines) + "\n")

    width = num_sites * site_w
    pl = ["UCLA pl 1.0", ""]
    for n, w, h, k in nodes:
        if k:
            x = rng.choice([0, width]) if rng.random() < 0.5 else rng.randint(0, width)
            y = rng.randint(0, rows * row_h)
            pl.append(f"{n}  {x}  {y} : N /FIXED" + ("_NI" if k == "terminal_NI" else ""))
        else:
            x = site_w * rng.randint(0, num_sites - w // site_w)
            y = row_h * rng.randint(0, rows - 1)
            orient = "N" if (y // row_h) % 2 == 0 else "FS"
            fixed = " /FIXED" if rng.random() < 0.05 else ""
            pl.append(f"{n}  {x}  {y} : {orient}{fixed}")
    (out / f"{name}.pl").write_text("\n".join(pl) + "\n")

    names = [n for n, *_ in nodes]
    sizes = {n: (w, h) for n, w, h, _ in nodes}
    nets = []
    for i in range(int(movable * rng.uniform(0.8, 1.2))):
        degree = min(len(names), rng.choice([2, 2, 2, 3, 3, 4, 5, 8]))
        members = rng.sample(names, degree)
        pins = []
        for j, m in enumerate(members):
            d = "O" if j == 0 else rng.choice(["I", "I", "I", "B"])
            w, h = sizes[m]
            if rng.random() < 0.2:
                pins.append(f"  {m} {d}")
            else:
                dx = rng.randint(-w, w) / 2
                dy = rng.randint(-h, h) / 2
                pins.append(f"  {m} {d} : {dx:g} {dy:g}")
        nets.append((f"n{i}", pins))
    text = ["UCLA nets 1.0", "", f"NumNets : {len(nets)}",
            f"NumPins : {sum(len(p) for _, p in nets)}"]
    for n, pins in nets:
        text.append(f"NetDegree : {len(pins)} {n}")
        text += pins
    (out / f"{name}.nets").write_text("\n".join(text) + "\n")

    wts = ["UCLA wts 1.0"]
    for n, _ in nets:
        if rng.random() < 0.1:
            wts.append(f"{n} {rng.randint(2, 5)}")
    (out / f"{name}.wts").write_text("\n".join(wts) + "\n")

    scl = ["UCLA scl 1.0", "", f"NumRows : {rows}"]
    for r in range(rows):
        scl += ["CoreRow Horizontal",
                f"  Coordinate    :  {r * row_h}",
                f"  Height        :  {row_h}",
                f"  Sitewidth     :  {site_w}",
                f"  Sitespacing   :  {site_w}",
                f"  Siteorient    :  {'N' if r % 2 == 0 else 'FS'}",
                "  Sitesymmetry  :  Y",
                f"  SubrowOrigin  :  0  NumSites  :  {num_sites}",
                "End"]
    (out / f"{name}.scl").write_text("\n".join(scl) + "\n")

    (out / f"{name}.aux").write_text(
        f"RowBasedPlacement : {name}.nodes {name}.nets {name}.wts {name}.pl {name}.scl\n")
    return f"bookshelf/{name}/{name}.aux"


def um(dbu):
    return f"{dbu / 1000:g}"


def lef_text(rng, metals, site_w, site_h, macros):
    lines = ["VERSION 5.8 ;", 'BUSBITCHARS "[]" ;', 'DIVIDERCHAR "/" ;', "",
             "UNITS", "  DATABASE MICRONS 1000 ;", "END UNITS", ""]
    for m in range(1, metals + 1):
        direction = "HORIZONTAL" if m % 2 else "VERTICAL"
        pitch = site_w * (1 if m < 3 else 2)
        lines += [f"LAYER M{m}", "  TYPE ROUTING ;", f"  DIRECTION {direction} ;",
                  f"  PITCH {um(pitch)} ;", f"  WIDTH {um(pitch // 2)} ;",
                  f"  SPACING {um(pitch // 2)} ;", f"END M{m}", ""]
        if m < metals:
            lines += [f"LAYER V{m}{m + 1}", "  TYPE CUT ;", f"  WIDTH {um(pitch // 2)} ;",
                      f"  SPACING {um(pitch // 2)} ;", f"END V{m}{m + 1}", ""]
    for m in range(1, metals):
        h = site_w // 4
        lines += [f"VIA VIA{m}{m + 1} DEFAULT", f"  RESISTANCE {rng.choice([1.5, 2, 4.5])} ;",
                  f"  LAYER M{m} ;", f"    RECT {um(-h)} {um(-h)} {um(h)} {um(h)} ;",
                  f"  LAYER V{m}{m + 1} ;", f"    RECT {um(-h)} {um(-h)} {um(h)} {um(h)} ;",
                  f"  LAYER M{m + 1} ;", f"    RECT {um(-h)} {um(-h)} {um(h)} {um(h)} ;",
                  f"END VIA{m}{m + 1}", ""]
    lines += ["SITE core", "  CLASS CORE ;", "  SYMMETRY Y ;",
              f"  SIZE {um(site_w)} BY {um(site_h)} ;", "END core", ""]
    for name, sites, inputs, output in macros:
        w = sites * site_w
        lines += [f"MACRO {name}", "  CLASS CORE ;", "  ORIGIN 0 0 ;",
                  f"  SIZE {um(w)} BY {um(site_h)} ;", "  SYMMETRY X Y ;", "  SITE core ;"]
        pins = [(p, "INPUT", "SIGNAL") for p in inputs] + [(output, "OUTPUT", "SIGNAL")]
        pins += [("VDD", "INOUT", "POWER"), ("VSS", "INOUT", "GROUND")]
        for k, (p, d, use) in enumerate(pins):
            if use == "SIGNAL":
                x = (k + 1) * w // (len(inputs) + 2)
                rect = f"{um(x - 20)} {um(site_h // 4)} {um(x + 20)} {um(3 * site_h // 4)}"
            else:
                y = site_h if use == "POWER" else 0
                rect = f"0 {um(y - 40)} {um(w)} {um(y + 40)}"
            lines += [f"  PIN {p}", f"    DIRECTION {d} ;", f"    USE {use} ;", "    PORT",
                      "      LAYER M1 ;", f"        RECT {rect} ;", "    END", f"  END {p}"]
        lines += ["  OBS", "    LAYER M1 ;",
                  f"      RECT {um(10)} {um(site_h // 2 - 10)} {um(w - 10)} {um(site_h // 2 + 10)} ;",
                  "  END", f"END {name}", ""]
    lines.append("END LIBRARY")
    return "\n".join(lines) + "\n"


def lefdef_fixture(index):
    rng = random.Random(9000 + index)
    name = f"gen{index:02d}"
    out = ROOT / "lefdef" / name
    out.mkdir(parents=True, exist_ok=True)

    metals = rng.randint(3, 8)
    site_w = rng.choice([190, 200, 260])
    site_h = site_w * rng.choice([7, 9])
    catalog = [("INV", 2, ["A"], "ZN"), ("BUF", 3, ["A"], "Z"),
               ("NAND2", 3, ["A1", "A2"], "ZN"), ("NOR2", 3, ["A1", "A2"], "ZN"),
               ("AOI21", 4, ["A", "B1", "B2"], "ZN"), ("XOR2", 5, ["A", "B"], "Z"),
               ("DFF", 10, ["D", "CK"], "Q")]
    macros = [(f"{c}_X{rng.choice([1, 2])}_{index}", s, i, o)
              for c, s, i, o in rng.sample(catalog, rng.randint(3, len(catalog)))]
    (out / "tech.lef").write_text(lef_text(rng, metals, site_w, site_h, macros))

    rows = rng.randint(4, 24)
    cells = rng.randint(20, 60) * (index + 1)
    num_sites = max(40, cells * 8 // rows)
    die_w = num_sites * site_w
    die_h = rows * site_h
    occupied = {}
    comps = []
    for i in range(cells):
        m = rng.choice(macros)
        status = rng.random()
        if status < 0.06:
            comps.append((f"u{i}", m, None, None, "UNPLACED"))
            continue
        for _ in range(50):
            r = rng.randrange(rows)
            s = rng.randrange(num_sites - m[1])
            span = range(s, s + m[1])
            if all((r, k) not in occupied for k in span):
                for k in span:
                    occupied[(r, k)] = True
                orient = "N" if r % 2 == 0 else "FS"
                kind = "FIXED" if status > 0.95 else "PLACED"
                comps.append((f"u{i}", m, (s * site_w, r * site_h), orient, kind))
                break
        else:
            comps.append((f"u{i}", m, None, None, "UNPLACED"))

    lines = ["VERSION 5.8 ;", 'DIVIDERCHAR "/" ;', 'BUSBITCHARS "[]" ;', f"DESIGN {name} ;",
             "UNITS DISTANCE MICRONS 1000 ;", "", f"DIEAREA ( 0 0 ) ( {die_w} {die_h} ) ;", ""]
    for r in range(rows):
        orient = "N" if r % 2 == 0 else "FS"
        lines.append(f"ROW ROW_{r} core 0 {r * site_h} {orient} DO {num_sites} BY 1 "
                     f"STEP {site_w} 0 ;")
    lines += ["", f"COMPONENTS {len(comps)} ;"]
    for n, m, loc, orient, kind in comps:
        if loc is None:
            lines.append(f"  - {n} {m[0]} + UNPLACED ;")
        else:
            lines.append(f"  - {n} {m[0]} + {kind} ( {loc[0]} {loc[1]} ) {orient} ;")
    lines += ["END COMPONENTS", ""]

    ios = rng.randint(2, 16)
    lines.append(f"PINS {ios} ;")
    for i in range(ios):
        d = rng.choice(["INPUT", "OUTPUT"])
        x = rng.choice([0, die_w])
        y = site_h * rng.randint(0, rows - 1) + site_h // 2
        lines += [f"  - io{i} + NET io{i} + DIRECTION {d} + USE SIGNAL",
                  "    + LAYER M2 ( -50 -50 ) ( 50 50 )", f"    + PLACED ( {x} {y} ) N ;"]
    lines += ["END PINS", ""]

    nets = []
    outputs = [(n, m) for n, m, *_ in comps]
    used = set()

    def free_input(inst, m):
        choices = [p for p in m[2] if (inst, p) not in used]
        if not choices:
            return None
        pin = rng.choice(choices)
        used.add((inst, pin))
        return pin

    drivers = outputs[:]
    rng.shuffle(drivers)
    for i, (driver, dm) in enumerate(drivers[: int(cells * rng.uniform(0.7, 0.95))]):
        pins = [f"( {driver} {dm[3]} )"]
        for s, sm in rng.sample(outputs, min(len(outputs), rng.choice([1, 1, 2, 3, 4]))):
            pin = free_input(s, sm) if s != driver else None
            if pin is not None:
                pins.append(f"( {s} {pin} )")
        if len(pins) < 2:
            continue
        route = ""
        if rng.random() < 0.3:
            x0 = rng.randint(0, die_w)
            y0 = rng.randint(0, die_h)
            x1 = rng.randint(0, die_w)
            y1 = rng.randint(0, die_h)
            route = (f"\n    + ROUTED M1 ( {x0} {y0} ) ( {x1} * ) VIA12"
                     f"\n    NEW M2 ( {x1} {y0} ) ( * {y1} )")
        nets.append(f"  - n{i} {' '.join(pins)}{route} ;")
    for i in range(ios):
        for _ in range(20):
            n, m = rng.choice(outputs)
            pin = free_input(n, m)
            if pin is not None:
                nets.append(f"  - io{i} ( PIN io{i} ) ( {n} {pin} ) ;")
                break
        else:
            nets.append(f"  - io{i} ( PIN io{i} ) ;")
    lines += [f"NETS {len(nets)} ;", *nets, "END NETS", "", "END DESIGN"]
    (out / f"{name}.def").write_text("\n".join(lines) + "\n")
    return {"lef": f"lefdef/{name}/tech.lef", "def": f"lefdef/{name}/{name}.def"}


def main():
    bookshelf = ["bookshelf/tiny3/tiny3.aux", "bookshelf/excerpt/adaptec_x.aux"]
    bookshelf += [bookshelf_fixture(i) for i in range(COUNT)]
    lefdef = [{"lef": "lefdef/basic/tech.lef", "def": "lefdef/basic/two_comp.def"}]
    lefdef += [lefdef_fixture(i) for i in range(COUNT)]
    synthetic = [{"instances": n, "seed": s}
                 for n, s in [(100, 1), (500, 2), (1000, 3), (2500, 4), (5000, 5), (10000, 6)]]
    manifest = {"bookshelf": bookshelf, "lefdef": lefdef, "synthetic": synthetic}
    (ROOT / "corpus.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()

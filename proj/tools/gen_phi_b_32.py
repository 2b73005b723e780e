#!/usr/bin/env python3
"""Generate a Buchi automaton for the A-B-C-D patrol formula by an
obligation-subset construction with a breakpoint.

A state (P, O) holds the pending until-obligations P (1: wait B, 2: wait C,
3: wait D, 4: wait A) and the breakpoint set O of obligations still owed since
the last accepting visit. States with O empty are accepting.

Usage: gen_phi_b_32.py [output.hoa]
"""
import itertools
import sys

from sympy import symbols
from sympy.logic import SOPform

A, B, C, D = 1, 2, 4, 8
NAMES = ["A", "B", "C", "D"]
GOAL = {1: B, 2: C, 3: D, 4: A}
FORBID = {1: A | D | C, 2: B | A | D, 3: C | B | A, 4: D | C | B}


def successors(pending, letter):
    options = []
    for u in sorted(pending):
        opts = []
        if letter & GOAL[u]:
            opts.append(("fulfil", u))
        if not letter & FORBID[u]:
            opts.append(("keep", u))
        if not opts:
            return set()
        options.append(opts)
    out = set()
    for choice in itertools.product(*options):
        nxt, kept = set(), set()
        for action, u in choice:
            if action == "fulfil":
                if u < 4:
                    nxt.add(u + 1)
            else:
                nxt.add(u)
                kept.add(u)
        if letter & A:
            nxt.add(1)
        out.add((frozenset(nxt), frozenset(kept)))
    return out


def build():
    init = (frozenset(), frozenset())
    order, index = [init], {init: 0}
    edges = {}
    i = 0
    while i < len(order):
        p, o = order[i]
        for letter in range(16):
            for nxt, kept in successors(p, letter):
                owed = kept if not o else frozenset(u for u in o if u in kept)
                dst = (nxt, owed)
                if dst not in index:
                    index[dst] = len(order)
                    order.append(dst)
                edges.setdefault((index[(p, o)], index[dst]), set()).add(letter)
        i += 1
    return order, edges


def guard(letters):
    if len(letters) == 16:
        return "t"
    syms = symbols("p0:4")
    minterms = [[(l >> b) & 1 for b in range(4)] for l in sorted(letters)]
    expr = SOPform(syms, minterms)
    text = str(expr)
    for b in range(4):
        text = text.replace(f"p{b}", str(b))
    return text.replace("~", "!")


def main():
    order, edges = build()
    lines = [
        "HOA: v1",
        'name: "A-B-C-D patrol (obligation subsets with breakpoint)"',
        f"States: {len(order)}",
        "Start: 0",
        "AP: 4 " + " ".join(f'"{n}"' for n in NAMES),
        "acc-name: Buchi",
        "Acceptance: 1 Inf(0)",
        "--BODY--",
    ]
    for s, (p, o) in enumerate(order):
        acc = " {0}" if not o else ""
        lines.append(f"State: {s}{acc}")
        for (src, dst), letters in sorted(edges.items()):
            if src == s:
                lines.append(f"  [{guard(letters)}] {dst}")
    lines.append("--END--")
    text = "\n".join(lines) + "\n"
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    print(f"states={len(order)} transitions={len(edges)}", file=sys.stderr)


if __name__ == "__main__":
    main()

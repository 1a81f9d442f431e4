"""
A small phase diagram
=====================

Classify a grid of (c, L) and run the matching simulation check in each cell.
"""
from shearlattice.cli import sweep

if __name__ == "__main__":
    # the grid points run in worker processes
    rows = sweep({"c": [0.01, 0.03], "L": [1.0, 30.0, 300.0]}, J=6, workers=2)
    print(f"{'c':>6} {'L':>6} {'label':16s} {'max growth':>12} check")
    for r in rows:
        print(f"{r['c']:6g} {r['L']:6g} {r['label']:16s} {r['max_growth']:12.4g} {r['check']}")

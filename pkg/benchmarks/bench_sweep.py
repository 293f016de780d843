"""Compare the compiled and pure-Python level sweeps on large meshes.

Usage: python3 benchmarks/bench_sweep.py [--sizes 40 80 120] [--repeat 3]

Each mesh is swept by both backends on the same prepared arrays; the
outputs must agree before any timing is reported.
"""
import argparse
import random
import time

from reebreal import reeb
from reebreal.morse import assemble
from reebreal.oracles import random_feasible_graph
from reebreal.reeb import compute_reeb, prepare_arrays, sweep_backend
from reebreal.surface import TriangulatedSurface, realize_surface


def grid_torus(n: int, rng: random.Random) -> TriangulatedSurface:
    """An n-by-n periodic grid with random integer heights (many saddles and plateaus)."""
    def vid(i, j):
        return (i % n) * n + j % n

    tris = []
    for i in range(n):
        for j in range(n):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            tris += [(a, b, c), (a, c, d)]
    heights = tuple(rng.randrange(4 * n) for _ in range(n * n))
    return TriangulatedSurface(heights, tuple(tris))


def realized(rng: random.Random) -> TriangulatedSurface:
    g = random_feasible_graph(rng, 2, max_vertices=40, max_edges=60)
    return realize_surface(assemble(g))


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def normalize(out):
    ncomp, plateau, slabs = out
    return [int(x) for x in ncomp], [int(x) for x in plateau], \
        sorted(tuple(int(x) for x in r) for r in slabs)


def bench(name: str, mesh: TriangulatedSurface, repeat: int) -> None:
    levels, *arrays = prepare_arrays(mesh)
    K = len(levels)
    py = sweep_backend("python")
    row = f"{name:<22} {len(mesh.triangles):>8} {K:>7}"
    t_py = best_of(lambda: py(*arrays, K), repeat)
    if reeb.BACKEND == "cython":
        cy = sweep_backend("cython")
        assert normalize(cy(*arrays, K)) == normalize(py(*arrays, K)), name
        t_cy = best_of(lambda: cy(*arrays, K), repeat)
        row += f" {t_py * 1e3:>10.1f} {t_cy * 1e3:>10.2f} {t_py / t_cy:>8.1f}x"
    else:
        row += f" {t_py * 1e3:>10.1f} {'n/a':>10} {'n/a':>9}"
    t_full = best_of(lambda: compute_reeb(mesh, check=False), 1)
    print(row + f" {t_full * 1e3:>10.1f}", flush=True)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 120])
    ap.add_argument("--realized", type=int, default=3, help="number of block-built meshes")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(f"default backend: {reeb.BACKEND}")
    print(f"{'mesh':<22} {'tris':>8} {'levels':>7} {'python ms':>10} {'cython ms':>10}"
          f" {'speedup':>9} {'reeb ms':>10}")
    for n in args.sizes:
        bench(f"grid torus {n}x{n}", grid_torus(n, rng), args.repeat)
    for i in range(args.realized):
        bench(f"realized #{i}", realized(rng), args.repeat)


if __name__ == "__main__":
    main()

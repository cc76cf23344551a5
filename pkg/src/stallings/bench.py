"""Random instances and timing runs for the free-factor search.

An instance at parameters (l, d) is a tuple of random reduced generators of
total length l whose graph uses exactly rank + d letters, so the search
runs at depth d.  The report is a CSV table ``l,d,nodes,millis`` and,
optionally, a log-log scaling figure rendered to a file next to it.
"""

from __future__ import annotations

import csv
import random
import time
from dataclasses import dataclass
from typing import IO, Sequence

from .automaton import stallings_graph
from .freefactor import is_free_factor_of_free
from .words import Alphabet, Word

CSV_HEADER = ("l", "d", "nodes", "millis")


@dataclass(frozen=True)
class BenchRow:
    l: int
    d: int
    nodes: int
    millis: float


def random_reduced_word(rng: random.Random, alphabet: Alphabet, length: int) -> Word:
    """Uniform random reduced word of exactly the given length."""
    letters: list[int] = []
    choices = [a for a in range(-alphabet.size, alphabet.size + 1) if a != 0]
    for _ in range(length):
        a = rng.choice(choices)
        while letters and a == -letters[-1]:
            a = rng.choice(choices)
        letters.append(a)
    return Word(tuple(letters), alphabet)


def random_instance(
    rng: random.Random,
    total_length: int,
    d: int,
    n_gens: int = 1,
    max_attempts: int = 1000,
) -> tuple[list[Word], Alphabet]:
    """Random generator tuple whose graph has rank ``n_gens`` and uses
    ``n_gens + d`` letters, i.e. search depth exactly d."""
    if total_length < n_gens:
        raise ValueError("total length must cover at least one letter per generator")
    alphabet = Alphabet(n_gens + d)
    share, extra = divmod(total_length, n_gens)
    lengths = [share + (1 if i < extra else 0) for i in range(n_gens)]
    for _ in range(max_attempts):
        gens = [random_reduced_word(rng, alphabet, n) for n in lengths]
        graph = stallings_graph(gens, alphabet)
        if graph.rank() == n_gens and len(graph.letters_used()) == alphabet.size:
            return gens, alphabet
    raise ValueError(f"no instance at (l={total_length}, d={d}, n={n_gens}) after {max_attempts} attempts")


def run_bench(
    sizes: Sequence[int],
    d: int = 1,
    repeats: int = 3,
    seed: int = 0,
    n_gens: int = 1,
    prune: bool = True,
) -> list[BenchRow]:
    """Time the ambient free-factor decision on random instances; one row
    per instance."""
    rng = random.Random(seed)
    rows: list[BenchRow] = []
    for l in sizes:
        for _ in range(repeats):
            gens, alphabet = random_instance(rng, l, d, n_gens)
            start = time.perf_counter()
            verdict = is_free_factor_of_free(gens, alphabet, prune=prune)
            millis = (time.perf_counter() - start) * 1000.0
            rows.append(BenchRow(l, d, verdict.nodes_explored, millis))
    return rows


def write_csv(rows: Sequence[BenchRow], stream: IO[str]) -> None:
    writer = csv.writer(stream)
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow((row.l, row.d, row.nodes, f"{row.millis:.3f}"))


def median_nodes(rows: Sequence[BenchRow]) -> dict[int, float]:
    """Median explored-node count per instance size."""
    import statistics

    by_size: dict[int, list[int]] = {}
    for row in rows:
        by_size.setdefault(row.l, []).append(row.nodes)
    return {l: statistics.median(nodes) for l, nodes in sorted(by_size.items())}


def fit_exponent(rows: Sequence[BenchRow]) -> float:
    """Least-squares slope of log(median nodes) against log(l)."""
    import math

    med = median_nodes(rows)
    points = [(math.log(l), math.log(max(n, 1.0))) for l, n in med.items() if l > 0]
    if len(points) < 2:
        raise ValueError("need at least two sizes to fit an exponent")
    mean_x = sum(x for x, _ in points) / len(points)
    mean_y = sum(y for _, y in points) / len(points)
    sxx = sum((x - mean_x) ** 2 for x, _ in points)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in points)
    return sxy / sxx


def render_scaling_plot(rows: Sequence[BenchRow], path: str) -> None:
    """Log-log scatter of explored nodes against instance size, with the
    per-size medians and a quadratic reference curve."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    med = median_nodes(rows)
    sizes = sorted(med)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.scatter([r.l for r in rows], [r.nodes for r in rows], s=18, alpha=0.5, label="instances")
    ax.plot(sizes, [med[l] for l in sizes], "o-", color="C1", label="median")
    if sizes:
        c = med[sizes[0]] / (sizes[0] ** 2)
        ref = [c * l**2 for l in sizes]
        ax.plot(sizes, ref, "--", color="gray", label="c * l^2")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("total generator length l")
    ax.set_ylabel("search nodes")
    d_values = sorted({r.d for r in rows})
    ax.set_title(f"identification-step search scaling (d = {', '.join(map(str, d_values))})")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

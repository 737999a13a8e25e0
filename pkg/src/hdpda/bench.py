"""Succinctness benchmark harness: tabulates size trends across family
parameters and renders them as CSV plus a matplotlib figure."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field

from .families import FAMILIES, gen_cn, gen_ln, gen_ln_prime_vpa
from .vpa import vpa_determinize


@dataclass
class BenchRow:
    parameter: int
    input_size: int
    output_size: int
    seconds: float


@dataclass
class BenchReport:
    family: str
    parameters: tuple
    rows: list = field(default_factory=list)
    verdict: str = ""

    def as_table(self) -> str:
        lines = [f"family: {self.family}",
                 f"{'n':>6} {'in-size':>8} {'out-size':>9} {'seconds':>8}"]
        for r in self.rows:
            lines.append(f"{r.parameter:>6} {r.input_size:>8} "
                         f"{r.output_size:>9} {r.seconds:>8.3f}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fp:
            w = csv.writer(fp)
            w.writerow(["family", "parameter", "input_size", "output_size",
                        "seconds"])
            for r in self.rows:
                w.writerow([self.family, r.parameter, r.input_size,
                            r.output_size, f"{r.seconds:.6f}"])

    def write_figure(self, path: str) -> None:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        xs = [r.parameter for r in self.rows]
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(xs, [r.input_size for r in self.rows], "o-", label="input size")
        ax.plot(xs, [r.output_size for r in self.rows], "s-", label="output size")
        if any(r.output_size > 0 for r in self.rows):
            ax.set_yscale("log", base=2)
        ax.set_xlabel("parameter n")
        ax.set_ylabel("size (|Q| + |Gamma|)")
        ax.set_title(f"{self.family}: size growth")
        ax.legend()
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)


def bench_succinctness(family: str, parameters) -> BenchReport:
    """Size-trend table for a parametrized family.

    For ``lnprime`` the output is the reachable determinization and the
    verdict checks the 2^ceil(n/2) lower bound per row; for ``cn`` and ``ln``
    the output equals the input and the verdict restates the size formula.
    """
    parameters = tuple(parameters)
    report = BenchReport(family, parameters)
    if family == "lnprime":
        ok = True
        for n in parameters:
            v = gen_ln_prime_vpa(n)
            t0 = time.perf_counter()
            det = vpa_determinize(v)
            dt = time.perf_counter() - t0
            report.rows.append(BenchRow(n, v.size, det.size, dt))
            if len(det.states) < 2 ** math.ceil(n / 2):
                ok = False
        report.verdict = ("determinization >= 2^ceil(n/2) states per row"
                          if ok else "LOWER BOUND VIOLATED")
    elif family == "cn":
        ok = True
        for n in parameters:
            t0 = time.perf_counter()
            pda, _ = gen_cn(n)
            dt = time.perf_counter() - t0
            report.rows.append(BenchRow(n, pda.size, pda.size, dt))
            if len(pda.states) != 9 * n + 12:
                ok = False
        report.verdict = ("states = 3(n+1)+6(n+1)+3 per row"
                          if ok else "SIZE FORMULA VIOLATED")
    elif family == "ln":
        ok = True
        for n in parameters:
            t0 = time.perf_counter()
            pda = gen_ln(n)
            dt = time.perf_counter() - t0
            report.rows.append(BenchRow(n, pda.size, pda.size, dt))
            if len(pda.states) > 4 * max(1, math.ceil(math.log2(n))):
                ok = False
        report.verdict = ("states <= 4 ceil(log2 n), 3 stack symbols"
                          if ok else "SIZE BOUND VIOLATED")
    elif family in FAMILIES and not FAMILIES[family].parameters:
        entry = FAMILIES[family]
        t0 = time.perf_counter()
        pda = entry.generate()
        dt = time.perf_counter() - t0
        for n in parameters or (0,):
            report.rows.append(BenchRow(n, pda.size, pda.size, dt))
        report.verdict = "constant size"
    else:
        raise ValueError(f"family {family!r} does not support benchmarking")
    return report

"""Published reference table of Fisher information, second moments and
uncertainty products, and the cell-by-cell comparison against closed forms."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .measures import closed_measures
from .oscillator import TrapConfig, effective_oscillator

COLUMNS = ("I_x", "I_p", "IxIp", "x2", "p2", "dxdp")

# (block, n, omega, kappa, I_x, I_p, IxIp, x2, p2, dxdp) exactly as printed
PUBLISHED = (
    ("kappa", 0, 1.0, 0.2, 1.78885, 2.23607, 4.0000, 0.559017, 3.91312, 0.5000),
    ("kappa", 0, 1.0, 0.4, 1.54919, 2.58199, 4.0000, 0.645497, 4.51848, 0.5000),
    ("kappa", 0, 1.0, 0.8, 0.894427, 4.47214, 4.0000, 1.11803, 7.82624, 0.5000),
    ("kappa", 1, 1.0, 0.2, 5.36656, 6.7082, 36.0000, 1.67705, 1.34164, 1.5000),
    ("kappa", 1, 1.0, 0.4, 4.64758, 7.74597, 36.0000, 1.93649, 1.1619, 1.5000),
    ("kappa", 1, 1.0, 0.8, 2.68328, 13.4164, 36.0000, 3.3541, 0.67082, 1.5000),
    ("kappa", 2, 1.0, 0.2, 8.94427, 11.1803, 100.0000, 2.79508, 2.23607, 2.5000),
    ("kappa", 2, 1.0, 0.4, 7.74597, 12.9099, 100.0000, 3.22749, 1.93649, 2.5000),
    ("kappa", 2, 1.0, 0.8, 4.47214, 22.3607, 100.0000, 5.59017, 1.11803, 2.5000),
    ("kappa", 3, 1.0, 0.2, 8.94427, 15.6525, 196.0000, 3.91312, 3.1305, 3.5000),
    ("kappa", 3, 1.0, 0.4, 7.74597, 18.0739, 196.0000, 4.51848, 2.71109, 3.5000),
    ("kappa", 3, 1.0, 0.8, 4.47214, 31.305, 196.0000, 7.82624, 1.56525, 3.5000),
    ("omega", 0, 1.0, 0.5, 1.41421, 2.82843, 4.0000, 0.707107, 0.353553, 0.5000),
    ("omega", 0, 2.0, 0.5, 2.82843, 1.41421, 4.0000, 0.353553, 0.707107, 0.5000),
    ("omega", 0, 3.0, 0.5, 4.24264, 0.942809, 4.0000, 0.235702, 1.06066, 0.5000),
    ("omega", 1, 1.0, 0.5, 4.24264, 8.48528, 36.0000, 2.12132, 1.06066, 1.5000),
    ("omega", 1, 2.0, 0.5, 8.48528, 4.24264, 36.0000, 1.06066, 2.12132, 1.5000),
    ("omega", 1, 3.0, 0.5, 12.7279, 2.82843, 36.0000, 0.707107, 3.18198, 1.5000),
    ("omega", 2, 1.0, 0.5, 7.07107, 14.1421, 100.0000, 3.53553, 1.76777, 2.5000),
    ("omega", 2, 2.0, 0.5, 14.1421, 7.07107, 100.0000, 1.76777, 3.53553, 2.5000),
    ("omega", 2, 3.0, 0.5, 21.2132, 4.71405, 100.0000, 1.17851, 5.3033, 2.5000),
    ("omega", 3, 1.0, 0.5, 9.89949, 19.799, 196.0000, 4.94975, 2.47487, 3.5000),
    ("omega", 3, 2.0, 0.5, 19.799, 9.89949, 196.000, 2.47487, 4.94975, 3.5000),
    ("omega", 3, 3.0, 0.5, 29.6985, 6.59966, 196.000, 1.64992, 7.42462, 3.5000),
)

BLOCKS = {
    "kappa": {"omega": (1.0,), "kappa": (0.2, 0.4, 0.8), "n": (0, 1, 2, 3)},
    "omega": {"omega": (1.0, 2.0, 3.0), "kappa": (0.5,), "n": (0, 1, 2, 3)},
}


@dataclass(frozen=True)
class ErratumFlag:
    omega: float
    kappa: float
    n: int
    column: str
    published: float
    computed: float
    implied: float
    justification: str

    def as_dict(self) -> dict:
        return asdict(self)

    def describe(self) -> str:
        return (f"omega={self.omega:g} kappa={self.kappa:g} n={self.n} {self.column}: "
                f"published {self.published:g}, computed {self.computed:.9g}; {self.justification}")


def published_rows(block: str | None = None):
    for row in PUBLISHED:
        if block is None or row[0] == block:
            yield dict(zip(("block", "n", "omega", "kappa") + COLUMNS, row))


def lookup(omega: float, kappa: float, n: int):
    for row in published_rows():
        if row["n"] == n and math.isclose(row["omega"], omega, rel_tol=1e-12) \
                and math.isclose(row["kappa"], kappa, rel_tol=1e-12, abs_tol=1e-15):
            return row
    return None


def matches_printed(computed: float, published: float, digits: int = 5) -> bool:
    """True when ``computed`` lies within half a unit of the last of ``digits``
    significant figures of ``published``."""
    if published == 0:
        return computed == 0
    exponent = math.floor(math.log10(abs(published)))
    return abs(computed - published) <= 0.5 * 10.0 ** (exponent - digits + 1) * (1 + 1e-9)


def computed_cells(omega: float, kappa: float, n: int) -> dict:
    m = closed_measures(effective_oscillator(TrapConfig(omega, kappa)), n)
    return {"I_x": m.I_x, "I_p": m.I_p, "IxIp": m.I_x * m.I_p,
            "x2": m.x2_mean, "p2": m.p2_mean, "dxdp": m.uncertainty}


def _implied(row: dict, column: str):
    """Value of ``column`` forced by the other printed cells of the same row."""
    if column == "I_x":
        return row["IxIp"] / row["I_p"], "the printed I_x*I_p and I_p force I_x = {:.6g}"
    if column == "I_p":
        return row["IxIp"] / row["I_x"], "the printed I_x*I_p and I_x force I_p = {:.6g}"
    if column == "x2":
        return row["dxdp"] ** 2 / row["p2"], "the printed dx*dp and <p^2> force <x^2> = {:.6g}"
    if column == "p2":
        return row["dxdp"] ** 2 / row["x2"], "the printed dx*dp and <x^2> force <p^2> = {:.6g}"
    return math.nan, "no independent cell constrains {}"


def check_row(omega: float, kappa: float, n: int) -> list[ErratumFlag]:
    row = lookup(omega, kappa, n)
    if row is None:
        return []
    cells = computed_cells(omega, kappa, n)
    flags = []
    for column in COLUMNS:
        if matches_printed(cells[column], row[column]):
            continue
        implied, why = _implied(row, column)
        flags.append(ErratumFlag(row["omega"], row["kappa"], n, column, row[column],
                                 cells[column], implied, why.format(implied)))
    return flags


def errata(block: str | None = None) -> list[ErratumFlag]:
    found = []
    for row in published_rows(block):
        found.extend(check_row(row["omega"], row["kappa"], row["n"]))
    return found

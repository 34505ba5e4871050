"""Grid sweeps over (beta, sigma_c) emitting one CSV row per quantity.

Config files are plain ``key = value`` lines; ``#`` starts a comment and
list values are comma separated::

    preset = figure1
    beta = 0, 0.2, 0.4
    sigma_c = 0.3
    quantities = ser-matched, ser-euclidean
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Iterator

from .bounds import euclidean_ser_bounds
from .channel import DecoderKind
from .errors import ConfigError, CurveCommError
from .geometry import build_uniform_codebook
from .montecarlo import (
    PepEstimate,
    antipodal_pair,
    compare_ser,
    derive_seed,
    pairwise_error_counts,
)
from .pairwise import (
    DEFAULT_QUAD_ORDER,
    NoiseParams,
    antipodal_pep_euclidean,
)

CSV_HEADER = ("k", "M", "beta", "sigma_c", "kind", "value", "ci_low", "ci_high", "trials")

# emitted in this order within each grid point
KINDS = (
    "pep-anti-matched",
    "pep-anti-euclidean",
    "ser-matched",
    "ser-euclidean",
    "bound-lower",
    "bound-upper",
    "bound-matched-lower",
)
# analytic antipodal curves; not part of the default set
EXTRA_KINDS = ("pep-anti-matched-analytic", "pep-anti-euclidean-analytic")
ALL_KINDS = KINDS + EXTRA_KINDS
_NEEDS_EVEN_M = {k for k in ALL_KINDS if not k.startswith("ser-")}

DEFAULT_TRIALS_PAIRWISE = 50_000
DEFAULT_TRIALS_SER = 20_000


def fmt(x: float) -> str:
    """Locale-free decimal with 12 significant digits."""
    return format(float(x), ".12g")


@dataclass(frozen=True)
class SweepRow:
    k: int
    M: int
    beta: float
    sigma_c: float
    kind: str
    value: float
    ci_low: float
    ci_high: float
    trials: int

    @classmethod
    def analytic(cls, k: int, M: int, n: NoiseParams, kind: str, value: float) -> "SweepRow":
        return cls(k, M, n.beta, n.sigma_c, kind, value, value, value, 0)

    @classmethod
    def estimate(cls, k: int, M: int, n: NoiseParams, kind: str, est: PepEstimate) -> "SweepRow":
        return cls(k, M, n.beta, n.sigma_c, kind, est.value, est.ci_low, est.ci_high, est.trials)

    def fields(self) -> list[str]:
        return [
            str(self.k),
            str(self.M),
            fmt(self.beta),
            fmt(self.sigma_c),
            self.kind,
            fmt(self.value),
            fmt(self.ci_low),
            fmt(self.ci_high),
            str(self.trials),
        ]


@dataclass(frozen=True)
class SweepConfig:
    k: int = 20
    M: int = 12
    betas: tuple[float, ...] = ()
    sigmas: tuple[float, ...] = (0.3,)
    quantities: tuple[str, ...] = KINDS
    trials_pairwise: int = DEFAULT_TRIALS_PAIRWISE
    trials_ser: int = DEFAULT_TRIALS_SER
    quad_order: int = DEFAULT_QUAD_ORDER
    seed: int = 0
    workers: int = 1
    out: str | None = None

    def validate(self) -> "SweepConfig":
        problems = []
        if self.k < 1:
            problems.append(f"k must be >= 1, got {self.k}")
        if self.M < 2:
            problems.append(f"M must be >= 2, got {self.M}")
        unknown = [q for q in self.quantities if q not in ALL_KINDS]
        if unknown:
            problems.append(f"unknown quantities {unknown}; choose from {list(ALL_KINDS)}")
        if self.M % 2 and _NEEDS_EVEN_M.intersection(self.quantities):
            problems.append("antipodal and bound quantities need an even M")
        for b in self.betas:
            if not (math.isfinite(b) and 0.0 <= b < 1.0):
                problems.append(f"beta {b} outside [0, 1)")
        for s in self.sigmas:
            if not (math.isfinite(s) and s > 0.0):
                problems.append(f"sigma_c {s} must be positive")
        if self.trials_pairwise < 1 or self.trials_ser < 1:
            problems.append("trial counts must be >= 1")
        if self.quad_order < 8:
            problems.append("quad_order must be >= 8")
        if self.seed < 0:
            problems.append("seed must be nonnegative")
        if self.workers < 1:
            problems.append("workers must be >= 1")
        if problems:
            raise ConfigError("; ".join(problems))
        return self


FIGURE1 = SweepConfig(
    k=20,
    M=12,
    betas=tuple(round(0.1 * i, 1) for i in range(10)),
    sigmas=(0.3,),
    quantities=KINDS,
    trials_pairwise=DEFAULT_TRIALS_PAIRWISE,
    trials_ser=DEFAULT_TRIALS_SER,
)
PRESETS = {"figure1": FIGURE1}


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


_PARSERS = {
    "k": ("k", int),
    "m": ("M", int),
    "beta": ("betas", _float_list),
    "sigma_c": ("sigmas", _float_list),
    "quantities": ("quantities", _str_list),
    "trials_pairwise": ("trials_pairwise", int),
    "trials_ser": ("trials_ser", int),
    "quad_order": ("quad_order", int),
    "seed": ("seed", int),
    "workers": ("workers", int),
    "out": ("out", str),
}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines into SweepConfig field overrides.

    A ``preset`` key expands to that preset's fields; later keys override it.
    """
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key == "preset":
            if value not in PRESETS:
                raise ConfigError(f"{source}:{lineno}: unknown preset {value!r}")
            fields.update(PRESETS[value].__dict__)
            continue
        if key not in _PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        name, conv = _PARSERS[key]
        try:
            fields[name] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {value!r}") from exc
    return fields


def load_config(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, str(path))


def make_config(base: SweepConfig | None = None, **overrides) -> SweepConfig:
    cfg = replace(base or SweepConfig(), **{k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()


def iter_sweep(config: SweepConfig) -> Iterator[SweepRow]:
    """Yield rows grid point by grid point (sigma_c outer, beta inner)."""
    cfg = config.validate()
    wanted = set(cfg.quantities)
    if not wanted:
        return
    kinds = [q for q in ALL_KINDS if q in wanted]
    codebook = build_uniform_codebook(cfg.k, cfg.M)
    point = 0
    for sigma in cfg.sigmas:
        for beta in cfg.betas:
            n = NoiseParams(beta, sigma)
            values: dict[str, SweepRow] = {}
            if wanted & {"pep-anti-matched", "pep-anti-euclidean"}:
                seed = derive_seed(cfg.seed, point, 1)
                i, j = antipodal_pair(codebook)
                counts = pairwise_error_counts(codebook, i, j, n, cfg.trials_pairwise, seed, cfg.workers)
                for kind, dec in (("pep-anti-matched", DecoderKind.MATCHED), ("pep-anti-euclidean", DecoderKind.EUCLIDEAN)):
                    est = PepEstimate.from_counts(counts[dec], cfg.trials_pairwise, seed, dec)
                    values[kind] = SweepRow.estimate(cfg.k, cfg.M, n, kind, est)
            if wanted & {"ser-matched", "ser-euclidean"}:
                seed = derive_seed(cfg.seed, point, 2)
                cmp = compare_ser(codebook, n, cfg.trials_ser, seed, cfg.workers)
                values["ser-matched"] = SweepRow.estimate(cfg.k, cfg.M, n, "ser-matched", cmp.matched)
                values["ser-euclidean"] = SweepRow.estimate(cfg.k, cfg.M, n, "ser-euclidean", cmp.euclidean)
            if wanted & {"bound-lower", "bound-upper", "bound-matched-lower", "pep-anti-matched-analytic"}:
                b = euclidean_ser_bounds(cfg.k, cfg.M, n, cfg.quad_order)
                values["bound-lower"] = SweepRow.analytic(cfg.k, cfg.M, n, "bound-lower", b.lower)
                values["bound-upper"] = SweepRow.analytic(cfg.k, cfg.M, n, "bound-upper", b.upper_raw)
                values["bound-matched-lower"] = SweepRow.analytic(cfg.k, cfg.M, n, "bound-matched-lower", b.matched_lower)
                values["pep-anti-matched-analytic"] = SweepRow.analytic(
                    cfg.k, cfg.M, n, "pep-anti-matched-analytic", b.matched_lower
                )
            if "pep-anti-euclidean-analytic" in wanted:
                values["pep-anti-euclidean-analytic"] = SweepRow.analytic(
                    cfg.k, cfg.M, n, "pep-anti-euclidean-analytic", antipodal_pep_euclidean(cfg.k, n)
                )
            for kind in kinds:
                yield values[kind]
            point += 1


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    return list(iter_sweep(config))


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.fields())
    return buf.getvalue()


def write_csv(rows: Iterable[SweepRow], path: str | Path) -> None:
    text = rows_to_csv(rows)
    try:
        Path(path).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise CurveCommError(f"cannot write {path}: {exc}") from exc

"""
Recorded diagnostics of a run and the blow-up / plateau verdict on them
"""
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from config.config import Config
from core.errors import EmptySeries, FileFormatError

COMPLETED = "Completed"
BOUNDED = "Bounded"
BLOWUP_SUSPECTED = "BlowupSuspected"
INCONCLUSIVE = "Inconclusive"

BASE_COLUMNS = ("t", "mass", "sup_u", "sup_v", "sup_w", "dt", "phi_p")


@dataclass(frozen=True)
class Verdict:
    """Run or series verdict, e.g. BlowupSuspected(threshold)"""

    kind: str
    reason: Optional[str] = None

    def __str__(self):
        return f"{self.kind}({self.reason})" if self.reason else self.kind

    @classmethod
    def parse(cls, text: str) -> "Verdict":
        text = text.strip()
        if text.endswith(")") and "(" in text:
            kind, _, reason = text[:-1].partition("(")
            return cls(kind, reason)
        return cls(text)

    @property
    def blowup(self) -> bool:
        return self.kind == BLOWUP_SUSPECTED


@dataclass(frozen=True)
class BlowupThresholds:
    blowup_threshold: float = Config.BLOWUP_THRESHOLD
    dt_min: float = Config.DT_MIN
    growth_factor: float = Config.GROWTH_FACTOR
    tail_fraction: float = Config.TAIL_FRACTION
    plateau_tol: float = Config.PLATEAU_TOL


def _lp_column(p: float) -> str:
    return f"lp_{p:g}"


@dataclass
class TimeSeries:
    """Per-sample mass, sup norms, dt, φ_p and L^p norms"""

    p_list: Sequence[float] = (2.0,)
    phi_p: float = 2.0
    times: List[float] = field(default_factory=list)
    mass: List[float] = field(default_factory=list)
    sup_u: List[float] = field(default_factory=list)
    sup_v: List[float] = field(default_factory=list)
    sup_w: List[float] = field(default_factory=list)
    dt: List[float] = field(default_factory=list)
    phi: List[float] = field(default_factory=list)
    lp: Dict[float, List[float]] = field(default_factory=dict)
    verdict: Optional[Verdict] = None
    assessment: Optional[Verdict] = None

    def __post_init__(self):
        self.p_list = tuple(float(p) for p in self.p_list)
        for p in self.p_list:
            self.lp.setdefault(p, [])

    def __len__(self):
        return len(self.times)

    def append(self, t, mass, sup_u, sup_v, sup_w, dt, phi, lp: Dict[float, float]):
        if self.times and not t > self.times[-1]:
            raise ValueError(f"sample time {t} does not follow {self.times[-1]}")
        self.times.append(float(t))
        self.mass.append(float(mass))
        self.sup_u.append(float(sup_u))
        self.sup_v.append(float(sup_v))
        self.sup_w.append(float(sup_w))
        self.dt.append(float(dt))
        self.phi.append(float(phi))
        for p in self.p_list:
            self.lp[p].append(float(lp[p]))

    def columns(self) -> List[str]:
        return list(BASE_COLUMNS) + [_lp_column(p) for p in self.p_list]

    def as_array(self) -> np.ndarray:
        data = [self.times, self.mass, self.sup_u, self.sup_v, self.sup_w, self.dt, self.phi]
        data += [self.lp[p] for p in self.p_list]
        return np.array(data, dtype=float).T.reshape(len(self), len(data))

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w") as handle:
            handle.write(",".join(self.columns()) + "\n")
            for row in self.as_array():
                handle.write(",".join(f"{value:.17g}" for value in row) + "\n")
            if self.assessment is not None:
                handle.write(f"# assessment={self.assessment}\n")
            if self.verdict is not None:
                handle.write(f"# verdict={self.verdict}\n")
        return path

    @classmethod
    def read_csv(cls, path, phi_p: float = 2.0) -> "TimeSeries":
        path = Path(path)
        try:
            lines = path.read_text().splitlines()
        except OSError as e:
            raise FileFormatError(f"cannot read {path}: {e}") from e
        if not lines:
            raise FileFormatError(f"{path}: empty file")

        header = lines[0].split(",")
        if tuple(header[: len(BASE_COLUMNS)]) != BASE_COLUMNS:
            raise FileFormatError(f"{path}: unexpected header {lines[0]!r}")
        try:
            p_list = [float(name[3:]) for name in header[len(BASE_COLUMNS):]]
        except ValueError as e:
            raise FileFormatError(f"{path}: bad L^p column ({e})") from e

        series = cls(p_list=p_list, phi_p=phi_p)
        for number, line in enumerate(lines[1:], start=2):
            if line.startswith("# verdict="):
                series.verdict = Verdict.parse(line.split("=", 1)[1])
            elif line.startswith("# assessment="):
                series.assessment = Verdict.parse(line.split("=", 1)[1])
            elif line.strip() and not line.startswith("#"):
                try:
                    values = [float(x) for x in line.split(",")]
                except ValueError as e:
                    raise FileFormatError(f"{path}: line {number}: {e}") from e
                if len(values) != len(header):
                    raise FileFormatError(f"{path}: line {number} has {len(values)} fields")
                t, mass, su, sv, sw, dt, phi, *lps = values
                series.append(t, mass, su, sv, sw, dt, phi, dict(zip(series.p_list, lps)))
        return series


def detect_blowup(series: TimeSeries, thresholds: BlowupThresholds = BlowupThresholds()) -> Verdict:
    """
    BlowupSuspected: sup u above the threshold, dt at dt_min, or sup u growing
    by growth_factor across the final tail of samples.
    Bounded: the maximum over the later half of the run (by time) stays within
    plateau_tol of the maximum over the earlier half.
    Inconclusive otherwise, including single-sample series.
    """
    if len(series) == 0:
        raise EmptySeries("cannot assess an empty series")

    sup_u = np.asarray(series.sup_u)
    dt = np.asarray(series.dt)
    times = np.asarray(series.times)

    if np.any(~np.isfinite(sup_u)) or np.any(sup_u > thresholds.blowup_threshold):
        return Verdict(BLOWUP_SUSPECTED, "threshold")
    if np.any(dt <= thresholds.dt_min):
        return Verdict(BLOWUP_SUSPECTED, "dt_min")

    tail = max(2, math.ceil(thresholds.tail_fraction * len(sup_u)))
    if len(sup_u) >= 2:
        window = sup_u[-tail:]
        low = window.min()
        if window[-1] > 0 and (low == 0 or window[-1] / low >= thresholds.growth_factor):
            return Verdict(BLOWUP_SUSPECTED, "growth")

    midpoint = 0.5 * (times[0] + times[-1])
    early = sup_u[times <= midpoint]
    late = sup_u[times > midpoint]
    if late.size and late.max() <= (1.0 + thresholds.plateau_tol) * early.max():
        return Verdict(BOUNDED)
    return Verdict(INCONCLUSIVE)

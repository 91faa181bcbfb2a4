"""
Sojourn decomposition of an orbit into laminar phases (inside W) and bursts.

W is the union of the ball |z| < epsilon and the far field |z| > r including
infinity. T_0 is the first time in W, T_1 the next exit, T_2 the next
entry and so on; eta_k = T_{2k-1} - T_{2k-2} and xi_k = T_{2k} - T_{2k-1}.
Steps before T_0 are the lead. The phase still running at the end of the run
is kept as a partial count (eta_partial or xi_partial).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional

import pandas as pd
from loguru import logger

from ..engine.orbit import OrbitEvent, run_orbit
from ..engine.symbols import SymbolStream
from ..exceptions import InvalidParameterError
from ..systems.catalog import IfsSystem
from .occupation import ensure_regular_start

SOJOURN_COLUMNS = ["k", "T_2k-1", "T_2k", "eta_k", "xi_k"]


@dataclass
class SojournRecord:
    escape_times: List[int]
    etas: List[int]
    xis: List[int]
    eta_partial: int = 0
    xi_partial: int = 0
    lead: int = 0
    length: int = 0
    inside_count: int = 0
    single_phase: bool = False

    @property
    def laminar_total(self) -> int:
        return sum(self.etas) + self.eta_partial

    @property
    def burst_total(self) -> int:
        return sum(self.xis) + self.xi_partial

    def membership(self) -> List[bool]:
        """Membership bits rebuilt from the phases"""
        bits = [False] * self.lead
        for k, eta in enumerate(self.etas):
            bits.extend([True] * eta)
            if k < len(self.xis):
                bits.extend([False] * self.xis[k])
        bits.extend([True] * self.eta_partial)
        bits.extend([False] * self.xi_partial)
        return bits

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for k, eta in enumerate(self.etas, start=1):
            exit_time = self.escape_times[2 * k - 1] if 2 * k - 1 < len(self.escape_times) else None
            entry_time = self.escape_times[2 * k] if 2 * k < len(self.escape_times) else None
            xi = self.xis[k - 1] if k - 1 < len(self.xis) else None
            rows.append((k, exit_time, entry_time, eta, xi))
        return pd.DataFrame(rows, columns=SOJOURN_COLUMNS).astype(
            {"T_2k-1": "Int64", "T_2k": "Int64", "xi_k": "Int64"}
        )

    def summary(self) -> dict:
        return {
            "length": self.length,
            "lead": self.lead,
            "completed_laminar": len(self.etas),
            "completed_bursts": len(self.xis),
            "mean_eta": sum(self.etas) / len(self.etas) if self.etas else None,
            "mean_xi": sum(self.xis) / len(self.xis) if self.xis else None,
            "eta_partial": self.eta_partial,
            "xi_partial": self.xi_partial,
            "single_phase": self.single_phase,
        }


class SojournBuilder:
    """Streaming phase bookkeeping over membership bits"""

    def __init__(self):
        self.n = 0
        self.inside_count = 0
        self.lead = 0
        self.times: List[int] = []
        self.etas: List[int] = []
        self.xis: List[int] = []
        self._state: Optional[bool] = None
        self._phase_start = 0

    def push(self, inside: bool) -> None:
        n = self.n
        if inside:
            self.inside_count += 1
        if self._state is None:
            if inside:
                self.times.append(n)
                self._state = True
                self._phase_start = n
            else:
                self.lead += 1
        elif inside != self._state:
            self.times.append(n)
            duration = n - self._phase_start
            (self.etas if self._state else self.xis).append(duration)
            self._state = inside
            self._phase_start = n
        self.n += 1

    def record(self) -> SojournRecord:
        running = self.n - self._phase_start if self._state is not None else 0
        etas = list(self.etas)
        eta_partial = running if self._state is True else 0
        xi_partial = running if self._state is False else 0
        single = not self.xis and not self.etas
        if single and self._state is True:
            etas, eta_partial = [running], 0
        times = [t - self.times[0] for t in self.times] if self.times else []
        if single and self._state is True:
            times = [0, running]
        return SojournRecord(
            escape_times=times,
            etas=etas,
            xis=list(self.xis),
            eta_partial=eta_partial,
            xi_partial=xi_partial,
            lead=self.lead,
            length=self.n,
            inside_count=self.inside_count,
            single_phase=single,
        )


def decompose_membership(bits: Iterable[bool]) -> SojournRecord:
    builder = SojournBuilder()
    for bit in bits:
        builder.push(bool(bit))
    return builder.record()


class SojournObserver:
    def __init__(self, epsilon: float, r_far: float):
        self.epsilon = epsilon
        self.r_far = r_far
        self.builder = SojournBuilder()

    def observe(self, event: OrbitEvent) -> None:
        modulus = event.point.modulus
        self.builder.push(modulus < self.epsilon or modulus > self.r_far)

    def record(self) -> SojournRecord:
        return self.builder.record()


def sojourn_decomposition(
    system: IfsSystem, z0, epsilon: float, r_far: float, steps: int, seed: int = 0, index: int = 0
) -> SojournRecord:
    if not epsilon < 1.0 < r_far:
        raise InvalidParameterError(f"Need epsilon < 1 < r, got epsilon={epsilon}, r={r_far}")
    ensure_regular_start(system, z0)
    observer = SojournObserver(epsilon, r_far)
    run_orbit(system, z0, SymbolStream(seed, index, system.p0), steps, (observer,))
    record = observer.record()
    if record.single_phase:
        logger.warning(f"No alternation in {steps} steps; record holds a single phase")
    logger.debug(f"Sojourn trial {index}: {len(record.etas)} laminar phases, {len(record.xis)} bursts")
    return record


def occupation_identity_check(record: SojournRecord) -> Fraction:
    """Raw inside fraction minus the phase-sum fraction, in exact arithmetic"""
    if record.length == 0:
        return Fraction(0)
    raw = Fraction(record.inside_count, record.length)
    laminar = record.laminar_total
    decomposed = Fraction(laminar, record.lead + laminar + record.burst_total)
    return raw - decomposed


def sojourn_frequency_bound(record: SojournRecord) -> Optional[Fraction]:
    """(1 + sum xi / sum eta)^-1 over completed laminar phases

    The running burst and the lead count as burst time, so the bound never exceeds the
    occupation fraction.
    """
    laminar = sum(record.etas)
    bursts = sum(record.xis) + record.xi_partial + record.lead
    if laminar == 0:
        return None if bursts == 0 else Fraction(0)
    return Fraction(laminar, laminar + bursts)

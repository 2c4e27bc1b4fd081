"""Built-in incremental mode: ground one more step per iteration."""
from __future__ import annotations

from dataclasses import dataclass

from ..control import add
from ..language import Number

# merged into every incremental program, next to any user-written check(t)
CHECK_PROGRAM = "#program check(t).\n#external query(t).\n"

ISTOP = ("SAT", "UNSAT", "UNKNOWN")


@dataclass(frozen=True)
class IncmodeConfig:
    imin: int = 0
    imax: int | None = None
    istop: str = "SAT"

    def __post_init__(self):
        if self.imin < 0:
            raise ValueError("imin must be non-negative")
        if self.imax is not None and self.imin > self.imax:
            raise ValueError("imin must not exceed imax")
        if self.istop not in ISTOP:
            raise ValueError(f"istop must be one of {', '.join(ISTOP)}")
        # the solver always decides, so UNKNOWN alone would never stop
        if self.istop == "UNKNOWN" and self.imax is None:
            raise ValueError("istop=UNKNOWN needs imax")


def _stop(cfg: IncmodeConfig, res) -> bool:
    if cfg.istop == "SAT":
        return res.satisfiable
    if cfg.istop == "UNSAT":
        return not res.satisfiable
    return False


def run_incmode(ctl, cfg: IncmodeConfig, report, limit: int = 1, cleanup: bool = True):
    """Drive `ctl` through steps 0, 1, ...; `report(res)` sees every result."""
    ctl.state = add(ctl.state, CHECK_PROGRAM)
    step = 0
    res = None
    while cfg.imax is None or step < cfg.imax:
        if step > 0 and step >= cfg.imin and _stop(cfg, res):
            break
        q = Number(step)
        if step == 0:
            parts = [("base", ()), ("check", (q,))]
        else:
            ctl.release_external(f"query({step - 1})")
            parts = [("step", (q,)), ("check", (q,))]
        ctl.ground(parts)
        ctl.assign_external(f"query({step})", "t")
        if cleanup:
            ctl.cleanup()
        res = ctl.solve(limit=limit)
        report(res)
        step += 1
    return res

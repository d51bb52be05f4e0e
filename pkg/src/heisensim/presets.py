"""Bundled circuits."""
from __future__ import annotations

import math
from importlib import resources

from .engine import Circuit, ch, cx, h, ry

__all__ = ["FR_ANGLE", "FR_LABELS", "preset_fr", "get_preset", "preset_source", "PRESETS"]

#: Rotation angle of the preparation step: the prepared qubit lands on the
#: +1 branch with probability 1/3.
FR_ANGLE = 2.0 * math.asin(math.sqrt(2.0 / 3.0))

FR_LABELS = {0: "R", 1: "A", 2: "S", 3: "B", 4: "U_R", 5: "U_A", 6: "W_S", 7: "W_B"}


def preset_fr() -> Circuit:
    """Eight-qubit extended Wigner's-friend protocol (Frauchiger-Renner).

    Two labs: Alice's memory A measures R, prepares Bob's qubit S through a
    controlled-Hadamard, and Bob's memory B measures S.  Two outside
    agents then take a Bell-basis measurement of each lab (controlled-not
    followed by a Hadamard) and record the outcomes into U_R, U_A, W_S,
    W_B with final controlled-nots.
    """
    r, a, s, b, u_r, u_a, w_s, w_b = range(8)
    steps = (
        ry(r, FR_ANGLE, slot=0),
        cx(r, a, slot=1),
        ch(a, s, slot=2),
        cx(s, b, slot=3),
        cx(r, a, slot=4),
        cx(s, b, slot=4),
        h(r, slot=5),
        h(s, slot=5),
        cx(r, u_r, slot=6),
        cx(a, u_a, slot=6),
        cx(s, w_s, slot=6),
        cx(b, w_b, slot=6),
    )
    return Circuit(8, steps, dict(FR_LABELS))


PRESETS = {"fr": preset_fr}


def get_preset(name: str) -> Circuit:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r} (available: {', '.join(sorted(PRESETS))})") from None


def preset_source(name: str) -> str:
    """The shipped text form of a preset (parses to the same circuit)."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}")
    return resources.files("heisensim").joinpath(f"data/{name}.qc").read_text()

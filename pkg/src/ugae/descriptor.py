"""Text descriptors for discount schedules.

Grammar::

    kind(param=value, ...)[|trunc=T][|horizon=H]

with case-insensitive kinds ``exp(gamma)``, ``beta(mu, eta)``,
``hyper(mu)`` or ``hyper(k)``, ``none()`` and ``fixed(t_max)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import schedule as sch

KINDS = {
    "exp": (("gamma",),),
    "beta": (("mu", "eta"),),
    "hyper": (("mu",), ("k",)),
    "none": ((),),
    "fixed": (("t_max",),),
}
_INT_PARAMS = {"t_max"}
_SUFFIX_KEYS = ("trunc", "horizon")

_HEAD = re.compile(r"\s*([A-Za-z_]+)\s*\(([^()]*)\)\s*")


class DescriptorError(ValueError):
    """Malformed or out-of-range schedule descriptor."""

    def __init__(self, text: str, pos: int, message: str, remedy: str = ""):
        self.text = text
        self.pos = pos
        msg = f"{message} (at column {pos + 1} in {text!r})"
        if remedy:
            msg += f"; {remedy}"
        super().__init__(msg)


@dataclass(frozen=True)
class ScheduleDescriptor:
    kind: str
    params: dict = field(default_factory=dict)
    trunc: Optional[int] = None
    horizon: Optional[int] = None

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items())), self.trunc, self.horizon))

    def build(self, horizon: int) -> sch.DiscountSchedule:
        """Materialize the schedule; ``self.horizon`` overrides ``horizon``."""
        h = self.horizon if self.horizon is not None else horizon
        p = self.params
        if self.kind == "exp":
            s = sch.exponential_schedule(p["gamma"], h)
        elif self.kind == "beta":
            s = sch.beta_schedule(sch.MuEta(p["mu"], p["eta"]), h)
        elif self.kind == "hyper":
            if "k" in p:
                s = sch.hyperbolic_schedule_k(p["k"], h)
            else:
                s = sch.hyperbolic_schedule(p["mu"], h)
        elif self.kind == "none":
            s = sch.no_discount_schedule(h)
        elif self.kind == "fixed":
            s = sch.fixed_horizon_schedule(p["t_max"], h)
        else:
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.trunc is not None:
            s = sch.truncate(s, self.trunc)
        return s

    @property
    def label(self) -> str:
        return format_descriptor(self)


def _number(text: str, raw: str, pos: int, key: str):
    raw = raw.strip()
    try:
        if key in _INT_PARAMS or key in _SUFFIX_KEYS:
            return int(raw)
        return float(raw)
    except ValueError:
        want = "an integer" if key in _INT_PARAMS or key in _SUFFIX_KEYS else "a number"
        raise DescriptorError(text, pos, f"{key} must be {want}, got {raw!r}",
                              f"write e.g. {key}=1") from None


def _pairs(text: str, body: str, offset: int):
    out = {}
    if not body.strip():
        return out
    pos = offset
    for chunk in body.split(","):
        if "=" not in chunk:
            raise DescriptorError(text, pos, f"expected key=value, got {chunk.strip()!r}",
                                  "separate parameters as name=value")
        key, raw = chunk.split("=", 1)
        key = key.strip().lower()
        if key in out:
            raise DescriptorError(text, pos, f"duplicate parameter {key!r}")
        out[key] = (raw, pos + chunk.index("=") + 1)
        pos += len(chunk) + 1
    return out


def parse_descriptor(text: str) -> ScheduleDescriptor:
    head, *suffixes = text.split("|")
    m = _HEAD.fullmatch(head)
    if m is None:
        raise DescriptorError(text, 0, "expected kind(param=value,...)",
                              f"valid kinds: {', '.join(KINDS)}")
    kind = m.group(1).lower()
    if kind not in KINDS:
        raise DescriptorError(text, m.start(1), f"unknown kind {m.group(1)!r}",
                              f"valid kinds: {', '.join(KINDS)}")
    raw = _pairs(text, m.group(2), m.start(2))
    signatures = KINDS[kind]
    sig = next((s for s in signatures if set(s) == set(raw)), None)
    if sig is None:
        expected = " or ".join(f"{kind}({', '.join(s)})" for s in signatures)
        missing = sorted(set(signatures[0]) - set(raw))
        extra = sorted(set(raw) - set().union(*map(set, signatures)))
        detail = []
        if missing:
            detail.append(f"missing {', '.join(missing)}")
        if extra:
            detail.append(f"unexpected {', '.join(extra)}")
        raise DescriptorError(text, m.start(2), f"bad parameters for {kind}: "
                              + ("; ".join(detail) or "wrong combination"),
                              f"expected {expected}")
    params = {k: _number(text, v, p, k) for k, (v, p) in raw.items()}

    extras = {}
    pos = len(head) + 1
    for suffix in suffixes:
        kv = _pairs(text, suffix, pos)
        for key, (v, p) in kv.items():
            if key not in _SUFFIX_KEYS:
                raise DescriptorError(text, p, f"unknown suffix {key!r}",
                                      "allowed suffixes: |trunc=T, |horizon=H")
            if key in extras:
                raise DescriptorError(text, p, f"duplicate suffix {key!r}")
            extras[key] = _number(text, v, p, key)
        pos += len(suffix) + 1

    desc = ScheduleDescriptor(kind, params, extras.get("trunc"), extras.get("horizon"))
    try:
        desc.build(1)
    except ValueError as exc:
        raise DescriptorError(text, m.start(2), str(exc), "check the parameter range") from None
    return desc


def format_descriptor(desc: ScheduleDescriptor) -> str:
    order = next(s for s in KINDS[desc.kind] if set(s) == set(desc.params))
    body = ",".join(f"{k}={desc.params[k]!r}" for k in order)
    text = f"{desc.kind}({body})"
    if desc.trunc is not None:
        text += f"|trunc={desc.trunc}"
    if desc.horizon is not None:
        text += f"|horizon={desc.horizon}"
    return text


def read_descriptor_file(path) -> list:
    """One descriptor per line; blank lines and ``#`` comments are skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(parse_descriptor(line))
    return out

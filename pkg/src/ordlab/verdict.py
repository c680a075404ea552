from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Label(str, Enum):
    UNIFORM = "UNIFORM"
    NON_UNIFORM = "NON_UNIFORM"
    UNKNOWN = "UNKNOWN"


@dataclass
class Verdict:
    """Classification result.

    ``certificate`` is the short label of the result that decided the case
    (e.g. ``"t:free"``); ``witness`` holds the data needed to re-check it.
    NON_UNIFORM witnesses always name a sampler kind and a graph.
    """

    label: Label
    certificate: str
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"label": self.label.value, "certificate": self.certificate, "witness": self.witness}

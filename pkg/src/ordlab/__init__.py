"""Consistent random vertex orderings on hereditary graph properties:
samplers, exact Bernoulli-polynomial oracles, statistical consistency
tests and a uniformity classifier."""

__version__ = "0.1.0"

from .graph import Graph, parse_graph, named_graph  # noqa: E402
from .samplers import SamplerSpec, VertexOrdering, prepare  # noqa: E402
from .templates import Template, BlowUpSpec, classify_template  # noqa: E402
from .verdict import Label, Verdict  # noqa: E402

__all__ = [
    "BlowUpSpec", "Graph", "Label", "SamplerSpec", "Template", "Verdict", "VertexOrdering",
    "classify_template", "named_graph", "parse_graph", "prepare",
]

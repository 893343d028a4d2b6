"""BabyLang: an example-based live-programming engine.

Annotated source (probes, sliders, examples, replacements, instance
templates persisted as structured comments) is instrumented, executed under
a value tracer, and the captured runtime feedback served to a CLI and an
interactive editor.
"""

from .lang import (SourceSpan, location_key, parse_module, build_location_map,
                   ParseError, IdentifiedAst, to_source)
from .annotations import (extract_annotations, attach, strip_annotations,
                          can_be_probe, can_be_slider, serialize_annotation,
                          parse_sidecar)
from .instrument import InstrumentConfig, instrument
from .runtime import Evaluation, TraceStore, query_probe, snapshot
from .session import Session, LiveSession, EvaluationReport, bench

__version__ = "0.1.0"

__all__ = [
    "SourceSpan", "location_key", "parse_module", "build_location_map",
    "ParseError", "IdentifiedAst", "to_source", "extract_annotations",
    "attach", "strip_annotations", "can_be_probe", "can_be_slider",
    "serialize_annotation", "parse_sidecar", "InstrumentConfig", "instrument",
    "Evaluation", "TraceStore", "query_probe", "snapshot", "Session",
    "LiveSession", "EvaluationReport", "bench", "__version__",
]

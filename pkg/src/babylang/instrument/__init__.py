from .config import InstrumentConfig
from .module import (Diagnostic, ExamplePlan, InstrumentedModule, InstrumentError,
                     ProbePlan, ReplacementParseError, SliderPlan, UnknownClass,
                     UnresolvedImport, UnresolvedValueSpec, ValuePlan)
from .passes import (append_example_blocks, apply_replacements, emit_factories,
                     insert_guards, instrument, instrument_probes,
                     instrument_sliders, module_stem, normalize_blocks,
                     rewrite_imports)

__all__ = [
    "InstrumentConfig", "Diagnostic", "ExamplePlan", "InstrumentedModule",
    "InstrumentError", "ProbePlan", "ReplacementParseError", "SliderPlan",
    "UnknownClass", "UnresolvedImport", "UnresolvedValueSpec", "ValuePlan",
    "append_example_blocks", "apply_replacements", "emit_factories",
    "insert_guards", "instrument", "instrument_probes", "instrument_sliders",
    "module_stem", "normalize_blocks", "rewrite_imports",
]

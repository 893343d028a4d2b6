from .values import (BabyArray, BabyClass, BabyError, BabyFunction, BabyObject,
                     BabyRuntimeError, BabyTimeout, BoundMethod, HostFunction,
                     HostNamespace, HostResource, ModuleError, NeedsUserInput,
                     format_number, identity_of, is_callable, loose_equals,
                     strict_equals, to_property_key, to_text, truthy, type_tag)
from .snapshots import IdentityRegistry, ValueSnapshot, snapshot
from .tracing import ExampleOutcome, SliderRecord, TraceEvent, TraceStore, UnknownProbe, query_probe
from .interpreter import Environment, Evaluation, ModuleInstance, ReturnSignal, MAX_CALL_DEPTH
from .builtins import CanvasMock, make_builtins

__all__ = [
    "BabyArray", "BabyClass", "BabyError", "BabyFunction", "BabyObject",
    "BabyRuntimeError", "BabyTimeout", "BoundMethod", "HostFunction",
    "HostNamespace", "HostResource", "ModuleError", "NeedsUserInput",
    "format_number", "identity_of", "is_callable", "loose_equals",
    "strict_equals", "to_property_key", "to_text", "truthy", "type_tag",
    "IdentityRegistry", "ValueSnapshot", "snapshot", "ExampleOutcome", "SliderRecord", "TraceEvent",
    "TraceStore", "UnknownProbe", "query_probe", "Environment", "Evaluation",
    "ModuleInstance", "ReturnSignal", "MAX_CALL_DEPTH", "CanvasMock", "make_builtins",
]

from .model import (Annotation, AnnotationSyntaxError, CustomTemplate,
                    ExamplePayload, InstanceTemplatePayload, ReplacementPayload,
                    ValueSpec, serialize_annotation, serialize_payload)
from .extract import ExtractResult, extract_annotations, scan_structured_comments, strip_annotations
from .eligibility import (can_be_probe, can_be_slider, can_be_example_target,
                          can_be_instance_target, can_be_replacement_target, PREDICATES)
from .attach import (attach, AttachedAnnotations, AttachedExample, AttachedProbe,
                     AttachedReplacement, AttachedSlider, AttachedInstanceTemplate, AttachError)
from .templates import SidecarError, parse_sidecar

__all__ = [
    "Annotation", "AnnotationSyntaxError", "CustomTemplate", "ExamplePayload",
    "InstanceTemplatePayload", "ReplacementPayload", "ValueSpec",
    "serialize_annotation", "serialize_payload", "ExtractResult",
    "extract_annotations", "scan_structured_comments", "strip_annotations",
    "can_be_probe", "can_be_slider", "can_be_example_target",
    "can_be_instance_target", "can_be_replacement_target", "PREDICATES",
    "attach", "AttachedAnnotations", "AttachedExample", "AttachedProbe",
    "AttachedReplacement", "AttachedSlider", "AttachedInstanceTemplate",
    "AttachError", "SidecarError", "parse_sidecar",
]

"""Source spans and location keys.

Lines are 1-based, columns are 0-based and count code points of the line.
End positions are exclusive.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class SourceSpan:
    start_line: int
    start_column: int
    end_line: int
    end_column: int

    def __post_init__(self):
        if (self.start_line, self.start_column) > (self.end_line, self.end_column):
            raise ValueError(f"inverted span: {self}")

    @property
    def start(self):
        return (self.start_line, self.start_column)

    @property
    def end(self):
        return (self.end_line, self.end_column)

    def contains(self, other: "SourceSpan") -> bool:
        return self.start <= other.start and other.end <= self.end

    def __str__(self):
        return f"{self.start_line}:{self.start_column}-{self.end_line}:{self.end_column}"


def location_key(span: SourceSpan) -> tuple[int, int, int, int]:
    """Quadruple key identifying a node by its source location."""
    return (span.start_line, span.start_column, span.end_line, span.end_column)

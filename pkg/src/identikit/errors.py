"""Exception taxonomy.

Everything the toolkit raises on purpose derives from ToolkitError so the CLI
can reduce any expected failure to one machine-parsable category line.
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for deliberate toolkit failures."""


class MalformedLine(ToolkitError):
    """A stream line that cannot be parsed into a tweet record."""

    def __init__(self, reason: str, line_no: int | None = None):
        self.reason = reason
        self.line_no = line_no
        suffix = f" (line {line_no})" if line_no is not None else ""
        super().__init__(reason + suffix)


class NegativeAge(ToolkitError):
    """Account observed before it was created."""


class EmptyCorpus(ToolkitError):
    """No token survives the vocabulary frequency cutoff."""


class EmptyData(ToolkitError):
    """A learner was given zero rows."""


class SingleClass(ToolkitError):
    """A label vector with fewer distinct classes than the task needs."""


class MissingClass(ToolkitError):
    """A required identity class has no training examples."""

    def __init__(self, class_index: int):
        self.class_index = class_index
        super().__init__(f"class {class_index} has no examples")


class SchemaMismatch(ToolkitError):
    """Feature width does not match what a model was trained on."""


class TooFewSamples(ToolkitError):
    """Not enough rows for the requested fold count or binning."""


class LengthMismatch(ToolkitError):
    """Paired sequences of different lengths."""


class LabelOutOfRange(ToolkitError):
    """A label outside [0, n_classes)."""


class EmptyMatrix(ToolkitError):
    """A confusion matrix with no observations."""


class EmptySample(ToolkitError):
    """A statistical test was given an empty sample."""


class EmptyInput(ToolkitError):
    """An operation over a collection received nothing."""


class InvalidSpec(ToolkitError):
    """A synthetic-data specification that fails validation."""


class CorruptModel(ToolkitError):
    """A persisted artifact that fails structural or numeric validation."""

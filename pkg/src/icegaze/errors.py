"""Exception taxonomy shared across the package.

Every error the library raises on purpose derives from IcegazeError so
callers (and the CLI exit-code mapping) can catch one base class. Names
describe the violated precondition, not the call site.
"""


class IcegazeError(Exception):
    """Base class for all errors raised deliberately by this package."""


# --- input / parsing ---------------------------------------------------

class MissingColumn(IcegazeError):
    """A required column is absent from an input CSV header."""


class EmptyTrace(IcegazeError):
    """An operation received a trace with no usable frames."""


class InvalidSpec(IcegazeError):
    """A scenario specification violates its own constraints."""


# --- calibration / encoding --------------------------------------------

class SingleClusterFail(IcegazeError):
    """The epsilon search cannot find more than one cluster.

    Calibration needs at least two distinct labels (a dominant gaze
    cluster plus something else) to anchor the engagement region; traces
    with no such structure are rejected rather than encoded.
    """


class EmptyPrefix(IcegazeError):
    """No frames fall inside the requested calibration prefix window."""


class AllMissing(IcegazeError):
    """Every frame of an encoded trace is missing; nothing to summarize."""


# --- comparison / metrics ----------------------------------------------

class LengthMismatch(IcegazeError):
    """Two sequences that must align frame by frame have different lengths."""


class DegenerateSignal(IcegazeError):
    """A signal has zero variance and cannot be correlated."""


class DegenerateInput(IcegazeError):
    """An input is structurally unusable for the requested computation."""


# --- statistics / models -----------------------------------------------

class DegenerateSample(IcegazeError):
    """A sample is too small or has zero pooled variance for a t-test."""


class NonBinaryLabels(IcegazeError):
    """Classification labels do not take exactly two distinct values."""


class SingleGroup(IcegazeError):
    """All rows share one group id; grouped splitting is impossible."""


class TooFewGroups(IcegazeError):
    """Fewer distinct groups than requested folds."""


class NoConvergence(IcegazeError):
    """An iterative solver hit its iteration cap before reaching tolerance."""

"""
Exception hierarchy shared by the pipeline stages.

``run.py`` maps these classes onto process exit codes:
0 success, 1 user/config error, 2 data error, 3 internal invariant violation.
"""


class PipelineError(Exception):
    """Base class for every error raised deliberately by the pipeline."""

    exit_code = 3


class ConfigError(PipelineError, ValueError):
    """A configuration field violates its constraint."""

    exit_code = 1

    def __init__(self, field: str, constraint: str):
        self.field = field
        self.constraint = constraint
        super().__init__(f"invalid config field '{field}': {constraint}")


class MissingArtifactError(PipelineError):
    """An upstream stage artifact is absent from the workspace."""

    exit_code = 1

    def __init__(self, artifact: str, subcommand: str):
        self.artifact = artifact
        self.subcommand = subcommand
        super().__init__(
            f"missing artifact '{artifact}' -- run the '{subcommand}' subcommand first"
        )


class DataError(PipelineError, ValueError):
    """Input data cannot be processed."""

    exit_code = 2


class CorpusEncodingError(DataError):
    """Raw document bytes do not decode under the declared encoding."""

    def __init__(self, offset: int, encoding: str, reason: str = ""):
        self.offset = offset
        self.encoding = encoding
        detail = f" ({reason})" if reason else ""
        super().__init__(f"undecodable {encoding} byte at offset {offset}{detail}")


class AnnotationFormatError(DataError):
    """A row of pre-annotated input is malformed."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class UnknownVerbError(DataError, KeyError):
    """A verb lemma is not present in the distribution matrix or summary."""

    def __init__(self, verb: str):
        self.verb = verb
        super().__init__(f"unknown verb: {verb!r}")

    def __str__(self) -> str:
        return self.args[0]


class UndefinedMeasureError(DataError):
    """A measure is undefined for its inputs (zero types, zero vector, zero total)."""


class PlanError(DataError):
    """A synthetic-corpus plan violates one of its constraints."""

    def __init__(self, constraint: str, detail: str):
        self.constraint = constraint
        super().__init__(f"plan violates '{constraint}': {detail}")


class InvariantError(PipelineError):
    """An internal invariant did not hold."""

    exit_code = 3

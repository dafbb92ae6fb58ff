class CodeViewError(Exception):
    """Base class for all errors raised by codeviews."""


class EmptyInputError(CodeViewError):
    pass


class SourceSyntaxError(CodeViewError):
    """The snippet contains error or missing nodes.

    ``span`` is the byte range of the first offending node, relative to the
    caller's original text.
    """

    def __init__(self, span: tuple[int, int], text: bytes | None = None, kind: str = "ERROR"):
        self.span = span
        self.kind = kind
        self.line, self.column = _line_col(text, span[0]) if text is not None else (None, None)
        where = f"bytes {span[0]}-{span[1]}"
        if self.line is not None:
            where += f" (line {self.line}, column {self.column})"
        super().__init__(f"syntax error ({kind}) at {where}")


class BlacklistCoversRootError(CodeViewError):
    pass


class MixedUnitError(CodeViewError):
    pass


def _line_col(text: bytes, offset: int) -> tuple[int, int]:
    offset = max(0, min(offset, len(text)))
    line = text.count(b"\n", 0, offset) + 1
    col = offset - (text.rfind(b"\n", 0, offset) + 1) + 1
    return line, col

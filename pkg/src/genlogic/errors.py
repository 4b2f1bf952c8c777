"""Exception hierarchy.

Data problems derive from :class:`DataError` (CLI exit code 2); query and
semantic problems derive from :class:`QueryError` (exit code 1).
"""


class GenLogicError(Exception):
    pass


class QueryError(GenLogicError):
    pass


class DataError(GenLogicError):
    pass


class FormulaSyntaxError(QueryError, ValueError):
    """Malformed formula or query text. ``offset`` is a byte offset into the input."""

    def __init__(self, message, offset, text=None):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnknownTokenError(FormulaSyntaxError):
    pass


class UnboundAtomError(QueryError, KeyError):
    def __init__(self, atom):
        self.atom = atom
        super().__init__(atom)

    def __str__(self):
        return f"atom {self.atom!r} is not assigned by the valuation"


class IndexOutOfRange(QueryError, IndexError):
    pass


class UnfoundedCondition(QueryError):
    pass


class UnfoundedConditionAtMuOne(UnfoundedCondition, ZeroDivisionError):
    pass


class CapExceeded(QueryError):
    pass


class SchemaError(DataError):
    pass


class RaggedHorizonError(DataError):
    pass


class UnknownAtomError(DataError):
    def __init__(self, atom, where=""):
        self.atom = atom
        super().__init__(f"unknown atom {atom!r}" + (f" in {where}" if where else ""))


class IncompleteValuationError(DataError):
    pass

"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
2 for syntax/parse problems, 3 for numeric failures, 4 for domain violations.
"""


class GTSError(Exception):
    exit_code = 3


class ParseError(GTSError, ValueError):
    exit_code = 2


class ExprSyntaxError(ParseError):
    """Malformed expression text; ``offset`` is the byte offset of the bad token."""

    def __init__(self, offset, expected, text=""):
        self.offset = offset
        self.expected = expected
        self.text = text
        super().__init__(f"syntax error at offset {offset}: expected {expected}")


class NodeParseError(ParseError):
    pass


class MixedDomain(GTSError, TypeError):
    pass


class SingularMatrix(GTSError, ArithmeticError):
    pass


class DivisionByZeroPolynomial(GTSError, ZeroDivisionError):
    pass


class DomainError(GTSError, ValueError):
    exit_code = 4


class DuplicateNode(DomainError):
    pass


class InexactError(DomainError):
    """An exact-rational computation would need an irrational value."""


class PoleError(GTSError, ZeroDivisionError):
    pass


class WitnessNotBracketed(GTSError):
    def __init__(self, q, lo, hi):
        self.q, self.lo, self.hi = q, lo, hi
        super().__init__(
            f"no sign change of f^(n) - q found: q={q!r}, sampled range [{lo!r}, {hi!r}]"
        )


class DegenerateTable(GTSError):
    pass


class DegreeSplitError(DegenerateTable):
    pass


class PoleAtNode(GTSError):
    pass

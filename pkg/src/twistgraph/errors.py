"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TwistGraphError(Exception):
    """Base class for all errors raised by twistgraph."""


class NonComposable(TwistGraphError):
    pass


class BoundExceeded(TwistGraphError):
    pass


class UnsupportedPresentation(TwistGraphError):
    pass


class NotInGroupoid(TwistGraphError):
    pass


class NotInDomain(TwistGraphError):
    pass


class CyclicGraph(TwistGraphError):
    pass


class ChartMismatch(TwistGraphError):
    pass


class InvalidCocycle(TwistGraphError):
    pass


class ContextMismatch(TwistGraphError):
    pass


class UnsupportedSupport(TwistGraphError):
    pass


class UnsupportedFunction(TwistGraphError):
    pass


class NotRegular(TwistGraphError):
    pass


class ParseError(TwistGraphError):
    pass

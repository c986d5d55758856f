"""Exception hierarchy.

Every error carries a stable integer ``code`` so the command line front end
can map failures to reproducible exit statuses and JSON payloads.
"""


class AlignDanzerError(Exception):
    code = 10


class VolumeTooSmall(AlignDanzerError, ValueError):
    code = 11


class OutOfOrthant(AlignDanzerError, ValueError):
    code = 12


class NotTotallyReal(AlignDanzerError, ValueError):
    code = 13


class DegenerateRoots(AlignDanzerError, ValueError):
    code = 14


class WindowTooLarge(AlignDanzerError, RuntimeError):
    code = 15


class FlowTooLarge(AlignDanzerError, RuntimeError):
    code = 16


class TooManyPoints(AlignDanzerError, RuntimeError):
    code = 17


class EpsTooSmall(AlignDanzerError, RuntimeError):
    code = 18

"""Point sets meeting every aligned box of a fixed volume, with verifiers."""
from .errors import (
    AlignDanzerError,
    DegenerateRoots,
    EpsTooSmall,
    FlowTooLarge,
    NotTotallyReal,
    OutOfOrthant,
    TooManyPoints,
    VolumeTooSmall,
    WindowTooLarge,
)
from .geometry import (
    AlignedBox,
    DyadicRational,
    Window,
    box_volume,
    contains,
    quadrant_pieces,
    reflect,
)

__version__ = "0.1.0"

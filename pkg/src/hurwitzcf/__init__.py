"""Hurwitz continued fractions, their extracted iterated function system, and
the seed-set construction of Hurwitz-digit sets containing homothetic copies
of every finite lattice pattern."""

from .errors import *  # noqa: F401,F403
from .gaussian import GaussianInt, GaussianRational, hurwitz_floor, in_U
from .hurwitz import (
    Digit,
    DigitClass,
    DigitSequence,
    convergents,
    expand,
    reconstruct,
    region_of,
)
from .ifs import apply_map, apply_word, cylinder, derivative_bound, derived_constants, verify_ifs_properties
from .patterns import HomotheticCopy, LatticePattern, copies_in_square, find_copies, scan_digit_stream
from .seedset import (
    InsertionSchedule,
    check_schedule,
    eliminate,
    insert,
    make_schedule,
    sample_seed_word,
    shell_cardinality,
    shell_members,
    square,
)

__version__ = "0.1.0"

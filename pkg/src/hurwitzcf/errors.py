"""Exception hierarchy.  Every domain error derives from :class:`HurwitzError`."""


class HurwitzError(ValueError):
    """Base class for domain errors (CLI exit code 2)."""


class ZeroInput(HurwitzError):
    pass


class InputOutsideU(HurwitzError):
    pass


class InputOutsideClosedU(HurwitzError):
    pass


class EmptySequence(HurwitzError):
    pass


class InadmissibleDigit(HurwitzError):
    pass


class ScheduleInfeasible(HurwitzError):
    pass


class ScheduleUnverified(HurwitzError):
    pass


class IndexOutOfSchedule(HurwitzError):
    pass


class ScheduleTooShort(HurwitzError):
    pass


class NotSeedWord(HurwitzError):
    pass


class NotInImage(HurwitzError):
    pass


class EmptyPattern(HurwitzError):
    pass


class EmptySet(HurwitzError):
    pass


class ScaleTooSmall(HurwitzError):
    pass


class InsufficientSamples(HurwitzError):
    pass


class RadiusTooLarge(HurwitzError):
    pass

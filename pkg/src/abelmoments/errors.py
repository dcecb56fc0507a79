"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class ArtifactError(Exception):
    exit_code = 1


class VerificationFailure(ArtifactError):
    exit_code = 1


class InapplicableTheorem(ArtifactError):
    """The profile does not satisfy the f(p) = ... = f(p^(l-1)) = 1, f(p^l) = k pattern."""

    exit_code = 2


class MalformedProfile(InapplicableTheorem):
    pass


class UnknownFunction(InapplicableTheorem):
    pass


class ToleranceUnreachable(ArtifactError):
    exit_code = 3


class CapacityError(ArtifactError):
    exit_code = 4


class ProfileTooShort(CapacityError):
    pass


class TruncationTooShort(CapacityError):
    pass


class IllConditionedFit(ArtifactError):
    exit_code = 5


class PoleAtOne(ValueError):
    pass


class UnsupportedDomain(ValueError):
    pass


class NonUnitSeries(ValueError):
    pass

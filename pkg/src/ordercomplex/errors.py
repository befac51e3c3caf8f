class OrderError(Exception):
    """Base class for every error raised by this package."""


class ParseError(OrderError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateName(OrderError):
    pass


class UnknownElement(OrderError):
    pass


class CycleDetected(OrderError):
    pass


class NotALattice(OrderError):
    def __init__(self, witness, kind):
        self.witness = witness
        self.kind = kind
        super().__init__(f"no unique {kind} for {witness[0]!r}, {witness[1]!r}")


class SizeLimitExceeded(OrderError):
    pass


class PreimageNotPrincipal(OrderError):
    def __init__(self, q):
        self.q = q
        super().__init__(f"preimage of the principal ideal of {q!r} is not principal")


class NotIsotone(OrderError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"map is not isotone on {pair[0]!r} <= {pair[1]!r}")


class HostMismatch(OrderError):
    pass


class NotInDelta(OrderError):
    def __init__(self, threshold, level_set):
        self.threshold = threshold
        self.level_set = level_set
        super().__init__(f"level set at {threshold} is not a principal ideal: {sorted(level_set)}")


class InvalidChainForm(OrderError):
    pass


class NotComparable(OrderError):
    pass


class NoJoin(OrderError):
    """An operation needed a join or meet the host does not have."""


class NotMeetIrredundant(OrderError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"family is not meet-irredundant; member {index} is redundant")


class PairOrderViolation(OrderError):
    pass


class SecondCoordinateNotJoinPrime(OrderError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"second coordinate of {pair} is not join-prime")


class NotInDeltaXcl(OrderError):
    def __init__(self, threshold, level_set):
        self.threshold = threshold
        self.level_set = level_set
        super().__init__(f"level set at {threshold} is not closed: {sorted(level_set)}")


class NotMember(OrderError):
    pass


class SharedChainViolation(OrderError):
    pass


class DimensionTooHigh(OrderError):
    pass

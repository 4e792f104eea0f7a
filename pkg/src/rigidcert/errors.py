"""Exception types shared across rigidcert."""


class RigidCertError(Exception):
    pass


class ScaleExceeded(RigidCertError, ValueError):
    pass


class NotSymmetric(RigidCertError, ValueError):
    pass


class LPUnbounded(RigidCertError, RuntimeError):
    pass


class DegenerateFramework(RigidCertError, ValueError):
    pass


class NotAStress(RigidCertError, ValueError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


class HypothesisViolation(RigidCertError, ValueError):
    """An input violates a precondition of a construction or formula."""


class RetryExhausted(RigidCertError, RuntimeError):
    def __init__(self, msg, seeds_tried=()):
        super().__init__(msg)
        self.seeds_tried = tuple(seeds_tried)


class StressSearchOutOfScope(RigidCertError, ValueError):
    pass

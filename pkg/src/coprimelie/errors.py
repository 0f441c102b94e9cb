"""Exception hierarchy shared by every module."""


class AlgebraError(Exception):
    """Base class for all package errors."""


class GroupAxiomError(AlgebraError):
    pass


class NotAssociative(GroupAxiomError):
    def __init__(self, i, j, k):
        self.witness = (i, j, k)
        super().__init__(f"({i}*{j})*{k} != {i}*({j}*{k})")


class NoIdentity(GroupAxiomError):
    def __init__(self):
        super().__init__("table has no two-sided identity")


class NoInverse(GroupAxiomError):
    def __init__(self, i):
        self.witness = i
        super().__init__(f"element {i} has no two-sided inverse")


class NotNormal(AlgebraError):
    def __init__(self, g, h=None):
        self.witness = g
        super().__init__(f"subgroup not normal: conjugating {h} by {g} leaves it")


class TooLarge(AlgebraError):
    pass


class InvalidSpec(AlgebraError, ValueError):
    pass


class ActionNotAutomorphic(AlgebraError):
    def __init__(self, msg, witness=None):
        self.witness = witness
        super().__init__(msg)


class NotCoprime(AlgebraError):
    pass


class NotAQGroup(AlgebraError):
    pass


class NotNilpotent(AlgebraError):
    pass


class NotFound(AlgebraError, LookupError):
    pass


class KernelNotNormal(AlgebraError):
    pass


class NotComplement(AlgebraError):
    pass


class FixedPointWitness(AlgebraError):
    def __init__(self, h, f):
        self.witness = (h, f)
        super().__init__(f"complement element {h} fixes kernel element {f}")


class AntisymmetryFail(AlgebraError):
    def __init__(self, i, j):
        self.witness = (i, j)
        super().__init__(f"[e{i}, e{j}] != -[e{j}, e{i}]")


class JacobiFail(AlgebraError):
    def __init__(self, i, j, k):
        self.witness = (i, j, k)
        super().__init__(f"Jacobi identity fails on basis triple ({i}, {j}, {k})")


class MixedExponentLayer(AlgebraError):
    def __init__(self, i, msg=""):
        self.layer = i
        super().__init__(msg or f"lower central factor {i} is not elementary abelian for one prime")


class NotASubalgebra(AlgebraError):
    pass


class OrderMismatch(AlgebraError):
    pass


class NoRootOfUnity(AlgebraError):
    pass


class ZeroResidue(AlgebraError, ValueError):
    pass


class SingularSystem(AlgebraError):
    pass


class HypothesisFail(AlgebraError):
    pass


class CapExceeded(AlgebraError):
    pass


class ConfigError(AlgebraError, ValueError):
    pass


class NotAnAutomorphism(AlgebraError):
    def __init__(self, msg, witness=None):
        self.witness = witness
        super().__init__(msg)

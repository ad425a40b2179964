"""Exception types shared across the toolkit."""


class GDiffError(Exception):
    """Base class for all toolkit errors."""


class BackendMismatch(GDiffError):
    """Operands carry different scalar backends."""


class NotTransitive(GDiffError):
    """The generated permutation group does not act transitively."""


class NotFaithful(GDiffError):
    """Distinct abstract elements map to the same permutation."""


class GroupTooLarge(GDiffError):
    """Group enumeration exceeded the configured cap."""


class InconsistentConnection(GDiffError):
    """Generator matrices violate the cocycle law."""


class SingularGeneratorMatrix(GDiffError):
    """A generator matrix is singular at some point."""


class ElementNotInH(GDiffError):
    """Transversal arithmetic produced an element outside the stabilizer."""


class NoIsoFound(GDiffError):
    """No isomorphism found where the theory guarantees one."""


class SplittingInconclusive(GDiffError):
    """No separating endomorphism found within the retry budget."""


class CharacterBackendMismatch(GDiffError):
    """Character values are not representable in the requested backend."""


class NotASolution(GDiffError):
    """A morphism argument fails the intertwining equation."""


class NotInvariant(GDiffError):
    """A structure argument is not fixed by the group action."""


class ProblemFileError(GDiffError):
    """Problem file failed to parse or validate."""

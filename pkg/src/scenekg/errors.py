"""Exception hierarchy shared by all scenekg modules."""


class SceneKGError(Exception):
    """Base class for all scenekg errors."""


# --- knowledge graph ---

class IllegalKindForLevel(SceneKGError):
    pass


class DuplicateName(SceneKGError):
    pass


class UnknownNode(SceneKGError):
    pass


class SymmetryClassConflict(SceneKGError):
    pass


class CrossLevelEdge(SceneKGError):
    """Raised in strict mode when a non-abstraction edge spans levels."""


class LevelOrderViolation(SceneKGError):
    pass


class EmptyMemberSet(SceneKGError):
    pass


class MergeViolation(SceneKGError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(
            "merged graph is structurally unsound: "
            + "; ".join(v.message for v in self.violations)
        )


class MalformedDocument(SceneKGError):
    pass


# --- scenes ---

class NonPositiveExtent(MalformedDocument):
    pass


class DuplicateRectId(MalformedDocument):
    pass


class OutOfBounds(MalformedDocument):
    pass


class ConfigInvalid(SceneKGError):
    pass


# --- premises / reasoning ---

class PremiseSyntaxError(SceneKGError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class EmptyPremiseList(SceneKGError):
    pass


class NonConvergence(SceneKGError):
    def __init__(self, passes, delta, cover=None):
        self.passes = passes
        self.delta = delta
        self.cover = cover
        where = "" if cover is None else f" (cover {cover})"
        super().__init__(
            f"no fixpoint after {passes} passes{where}, residual delta {delta:g}"
        )


class UniverseMismatch(SceneKGError):
    pass


# --- embedding ---

class IsolatedNode(SceneKGError):
    pass


class EmptyCorpus(SceneKGError):
    pass


class IdenticalEndpoints(SceneKGError):
    pass


class NotTwoDimensional(SceneKGError):
    pass


class TooFewPoints(SceneKGError):
    pass

from lyacert.errors import CertificationError


class GozlanConstraintError(CertificationError):
    """A parameter constraint of the Gozlan lemma is violated."""

    def __init__(self, constraint: str, message: str) -> None:
        super().__init__(f"{constraint}: {message}")
        self.constraint = constraint


class GozlanConditionError(CertificationError):
    pass

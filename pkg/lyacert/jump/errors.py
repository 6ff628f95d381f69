from lyacert.errors import CertificationError


class ChainDefinitionError(CertificationError):
    pass


class DivergentMeasureError(CertificationError):
    """`sum r_i` diverges: the chain has no stationary probability measure."""

    pass


class AdmissibilityError(CertificationError):
    pass

from lyacert.errors import CertificationError


class MomentBoundError(CertificationError):
    pass

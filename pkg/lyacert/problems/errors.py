from lyacert.errors import CertificationError


class ProblemFileError(CertificationError):
    pass
